"""Command-line interface.

Exit codes: 0 success, 1 domain failure (invalid model, solver failure,
residual above tolerance, ...), 2 usage error.  With ``--json`` the payload is
written to stdout as deterministic JSON (sorted keys, 17 significant digits);
otherwise a short human summary is printed.  Diagnostics go to stderr.

A model argument is a path to a ``.anyon`` file or the name of a bundled
model (``fibonacci``, ``ising``, ``moore_read``).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import jsonfmt
from .braid import BraidWord, compile_gate, evaluate_word, generators, measure_pair
from .coherence import (SolverConfig, export_symbols, hexagon_residual, import_symbols, pentagon_residual,
                        r_modulus_deviation, solve_hexagon, solve_pentagon, unitarity_deviation)
from .errors import (AnyonError, DomainError, IncompleteTableError, SolverFailure, SymbolFormatError,
                     UnsupportedFeatureError)
from .fusion_ring import FusionRing, quantum_dimensions, verify_ring
from .fusion_space import ChargedState, decompose, dim, enumerate_basis, homcat
from .model_io import BUNDLED, ModelDocument, ModelParseError, bundled_text, load_model, parse_model

DEFAULT_TOL = 1e-10
DEFAULT_SEED = 0


class UsageError(AnyonError):
    """Bad command-line input; maps to exit code 2."""


@dataclass
class CommandResult:
    code: int
    payload: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


# --- helpers ----------------------------------------------------------------

def _load(model: str) -> ModelDocument:
    path = Path(model)
    if path.is_file():
        return load_model(path)
    if model in BUNDLED:
        return parse_model(bundled_text(model), source=f'<bundled {model}>')
    raise FileNotFoundError(f'cannot read model {model!r}: no such file or bundled model')


def _label(ring: FusionRing, name: str, what: str) -> int:
    if name not in ring.names:
        raise UsageError(f'unknown {what} label {name!r}; labels are {" ".join(ring.names)}')
    return ring.names.index(name)


def _anyons(ring: FusionRing, text: str) -> list[int]:
    toks = text.split()
    if not toks:
        raise UsageError('--anyons needs at least one label')
    return [_label(ring, t, 'anyon') for t in toks]


def _read_symbols(ring: FusionRing, path: str):
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise DomainError(f'cannot read symbols file {path!r}: {exc.strerror}') from None
    return import_symbols(text, ring)


def _names(ring: FusionRing, key: Sequence[int]) -> list[str]:
    return [ring.names[i] for i in key]


def _violation_lines(doc: ModelDocument, labels: Sequence[str]) -> list[int]:
    """Source lines that mention the labels of a violation (best effort)."""
    ring = doc.ring
    idx = [ring.names.index(l) for l in labels if l in ring.names]
    lines = set()
    for a in idx:
        if ('dual', a) in doc.locations:
            lines.add(doc.locations[('dual', a)])
        for b in idx:
            if ('fuse', a, b) in doc.locations:
                lines.add(doc.locations[('fuse', a, b)])
    if not lines and 'labels' in doc.locations:
        lines.add(doc.locations['labels'])
    return sorted(lines)


def _matrix(M: np.ndarray) -> list:
    return [[complex(x) for x in row] for row in M]


def _prefixed(kind: str, exc: Exception) -> str:
    msg = str(exc)
    return msg if msg.startswith(kind) else f'{kind}: {msg}'


def _fmt_c(z: complex) -> str:
    return f'{z.real:+.6f}{z.imag:+.6f}j'


# --- commands ---------------------------------------------------------------

def cmd_validate(model: str) -> CommandResult:
    doc = _load(model)
    ring = doc.ring
    bad = verify_ring(ring)
    viol = [{'axiom': v.axiom, 'labels': list(v.labels), 'message': v.message,
             'lines': _violation_lines(doc, v.labels)} for v in bad]
    payload = {'model': doc.name, 'labels': list(ring.names), 'n_labels': ring.size,
               'multiplicity_free': ring.is_multiplicity_free, 'commutative': ring.is_commutative,
               'violations': viol, 'valid': not bad}
    text = [f'model {doc.name}: {ring.size} labels ({" ".join(ring.names)})']
    if bad:
        for v in viol:
            where = ', '.join(f'line {n}' for n in v['lines'])
            text.append(f'  {v["axiom"]}: {v["message"]}' + (f' ({where})' if where else ''))
        text.append(f'{len(bad)} violation(s)')
        return CommandResult(1, payload, text)
    dims = quantum_dimensions(ring)
    payload['quantum_dimensions'] = {ring.names[a]: d for a, d in dims.items()}
    text.append('valid; quantum dimensions: ' + ', '.join(f'{ring.names[a]}={d:.6g}' for a, d in dims.items()))
    return CommandResult(0, payload, text)


def cmd_homcats(model: str, charge: str | None = None) -> CommandResult:
    doc = _load(model)
    ring = doc.ring
    charges = [_label(ring, charge, 'charge')] if charge is not None else list(ring.labels)
    cats = []
    text = []
    for c in charges:
        h = homcat(ring, c)
        pairs = [[ring.names[a], ring.names[b]] for a, b in h.pairs]
        cats.append({'charge': ring.names[c], 'pairs': pairs})
        text.append(f'HomCat_{ring.names[c]}: ' + ', '.join(f'V[{a} {b} -> {ring.names[c]}]' for a, b in pairs))
    return CommandResult(0, {'model': doc.name, 'homcats': cats}, text)


def cmd_dims(model: str, anyons: str, charge: str | None = None) -> CommandResult:
    doc = _load(model)
    ring = doc.ring
    leaves = _anyons(ring, anyons)
    charges = [_label(ring, charge, 'charge')] if charge is not None else list(ring.labels)
    rows = []
    text = []
    for c in charges:
        n = dim(ring, leaves, c)
        row = {'charge': ring.names[c], 'dim': n}
        if ring.is_multiplicity_free and n:
            row['decomposition'] = str(decompose(ring, leaves, c))
        rows.append(row)
        text.append(f'dim V[{anyons.strip()} -> {ring.names[c]}] = {n}')
    return CommandResult(0, {'model': doc.name, 'anyons': _names(ring, leaves), 'spaces': rows}, text)


def cmd_solve(model: str, out: str | None = None, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED,
              restarts: int = 64) -> CommandResult:
    doc = _load(model)
    ring = doc.ring
    bad = verify_ring(ring)
    if bad:
        return CommandResult(1, {'model': doc.name, 'error': 'invalid ring',
                                 'violations': [str(v) for v in bad]}, errors=[f'invalid ring: {bad[0]}'])
    config = SolverConfig(tolerance=tol, seed=seed, restarts=restarts)
    try:
        F, prep = solve_pentagon(ring, config)
        R, hrep = solve_hexagon(ring, F, config)
    except UnsupportedFeatureError as exc:
        return CommandResult(1, {'model': doc.name, 'error': 'unsupported', 'message': str(exc)},
                             errors=[_prefixed('unsupported', exc)])
    except SolverFailure as exc:
        return CommandResult(1, {'model': doc.name, 'error': 'solver failure', 'message': str(exc),
                                 'best_residual': exc.best_residual}, errors=[str(exc)])
    symbols = export_symbols(F, R, doc.name)
    payload = {
        'model': doc.name,
        'pentagon_residual': prep.residual,
        'hexagon_residual': hrep.residual,
        'hexagon_inverse_residual': hrep.inverse_residual,
        'unitarity_deviation': prep.unitarity,
        'r_modulus_deviation': r_modulus_deviation(R),
        'pentagon': {'restart': prep.restart, 'iterations': prep.iterations,
                     'n_unknowns': prep.n_unknowns, 'n_equations': prep.n_equations},
        'hexagon': {'restart': hrep.restart, 'iterations': hrep.iterations, 'n_unknowns': hrep.n_unknowns,
                    'n_equations': hrep.n_equations, 'n_solutions': len(hrep.solutions)},
        'nontrivial_f_blocks': [_names(ring, b) for b in F.nontrivial_blocks()],
        'tolerance': tol,
        'seed': seed,
    }
    text = [f'pentagon residual {prep.residual:.3e} (restart {prep.restart}, {prep.n_unknowns} unknowns)',
            f'hexagon residuals {hrep.residual:.3e} / {hrep.inverse_residual:.3e} '
            f'(restart {hrep.restart}, {len(hrep.solutions)} solution(s) found)',
            f'unitarity deviation {prep.unitarity:.3e}',
            f'{len(payload["nontrivial_f_blocks"])} non-identity F block(s)']
    if out is not None:
        Path(out).write_text(symbols, encoding='utf-8')
        payload['out'] = out
        text.append(f'wrote {out}')
    else:
        payload['symbols'] = json.loads(symbols)
        text.append(symbols.rstrip('\n'))
    return CommandResult(0, payload, text)


def cmd_verify(model: str, symbols: str, tol: float = DEFAULT_TOL) -> CommandResult:
    doc = _load(model)
    ring = doc.ring
    try:
        F, R, _ = _read_symbols(ring, symbols)
    except IncompleteTableError as exc:
        missing = [_names(ring, k) for k in exc.missing]
        return CommandResult(1, {'model': doc.name, 'error': 'incomplete table', 'kind': exc.kind,
                                 'missing': missing},
                             errors=[f'incomplete {exc.kind} table: {len(missing)} missing tuple(s)'] +
                             [f'  missing {exc.kind}{tuple(m)}' for m in missing[:20]])
    pent = pentagon_residual(ring, F)
    uni = unitarity_deviation(F)
    checks = {'pentagon': pent, 'unitarity': uni}
    if R is not None:
        checks['hexagon'] = hexagon_residual(ring, F, R)
        checks['hexagon_inverse'] = hexagon_residual(ring, F, R, inverse_variant=True)
        checks['r_modulus'] = r_modulus_deviation(R)
    passed = {k: v < tol for k, v in checks.items()}
    ok = all(passed.values())
    payload = {'model': doc.name, 'residuals': checks, 'passed': passed, 'valid': ok, 'tolerance': tol,
               'has_r': R is not None}
    text = [f'{k:16s} {v:.3e}  {"ok" if passed[k] else "FAIL"}' for k, v in checks.items()]
    text.append('valid' if ok else f'invalid at tolerance {tol:g}')
    return CommandResult(0 if ok else 1, payload, text)


def _braid_setup(model: str, symbols: str, anyons: str, charge: str):
    doc = _load(model)
    ring = doc.ring
    leaves = _anyons(ring, anyons)
    c = _label(ring, charge, 'charge')
    F, R, _ = _read_symbols(ring, symbols)
    if R is None:
        raise DomainError('symbols file has no R table; braiding needs one')
    basis = enumerate_basis(ring, leaves, c)
    if len(basis) == 0:
        raise DomainError(f'no fusion channel: {anyons.strip()} cannot fuse to {charge}')
    if len(leaves) < 2:
        raise DomainError('braiding needs at least two anyons')
    return doc, ring, F, basis, generators(ring, F, R, basis)


def _basis_payload(ring: FusionRing, basis) -> list[list[str]]:
    return [_names(ring, t.internals) for t in basis.trees]


def cmd_braid(model: str, symbols: str, anyons: str, charge: str, word: str = '',
              state: str | None = None, pair: int = 1) -> CommandResult:
    doc, ring, F, basis, gens = _braid_setup(model, symbols, anyons, charge)
    try:
        w = BraidWord.parse(word, len(basis.leaves))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    U = evaluate_word(w, gens)
    payload = {'model': doc.name, 'anyons': _names(ring, basis.leaves), 'charge': ring.names[basis.charge],
               'basis': _basis_payload(ring, basis), 'word': str(w), 'matrix': _matrix(U.matrix),
               'unitarity_deviation': U.deviation()}
    text = [f'basis ({len(basis)}): ' + ', '.join('[' + ' '.join(b) + ']' for b in payload['basis']),
            f'word: {str(w) or "(empty)"}']
    text += ['  ' + '  '.join(_fmt_c(z) for z in row) for row in U.matrix]
    if state is not None:
        try:
            amps = np.array([jsonfmt.complex_from_json(x) for x in json.loads(state)], dtype=complex)
        except (ValueError, TypeError) as exc:
            raise UsageError(f'--state must be a JSON list of numbers or [re, im] pairs: {exc}') from None
        if amps.shape != (len(basis),):
            raise UsageError(f'--state has {amps.size} amplitudes, basis has {len(basis)}')
        psi = ChargedState(basis, U.matrix @ amps)
        probs = measure_pair(psi, F, pair)
        payload['state'] = [complex(z) for z in psi.amplitudes]
        payload['measure_pair'] = pair
        payload['probabilities'] = [[ring.names[k], p] for k, p in probs]
        text.append('state: ' + '  '.join(_fmt_c(z) for z in psi.amplitudes))
        text.append(f'pair {pair} channel probabilities: ' +
                    ', '.join(f'{ring.names[k]}={p:.6g}' for k, p in probs))
    return CommandResult(0, payload, text)


def cmd_compile(model: str, symbols: str, anyons: str, charge: str, target: str,
                max_len: int = 8) -> CommandResult:
    doc, ring, F, basis, gens = _braid_setup(model, symbols, anyons, charge)
    try:
        T = jsonfmt.matrix_from_json(json.loads(target))
    except (ValueError, TypeError) as exc:
        raise UsageError(f'--target must be a JSON matrix: {exc}') from None
    if T.shape != (len(basis), len(basis)):
        raise UsageError(f'target is {T.shape[0]}x{T.shape[1]} but the fusion space has dimension {len(basis)}')
    if not 0 <= max_len <= 14:
        raise UsageError('--max-len must be between 0 and 14')
    res = compile_gate(T, gens, max_len)
    payload = {'model': doc.name, 'anyons': _names(ring, basis.leaves), 'charge': ring.names[basis.charge],
               'word': str(res.word), 'length': len(res.word), 'distance': res.distance,
               'search_size': res.search_size, 'max_len': max_len}
    text = [f'word: {str(res.word) or "(empty)"} (length {len(res.word)})',
            f'distance: {res.distance:.12g}', f'words searched: {res.search_size}']
    return CommandResult(0, payload, text)


# --- argument parsing -------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    parser.add_argument('--json', action='store_true', default=argparse.SUPPRESS, help='emit a JSON payload')
    parser.add_argument('--tol', type=float, default=argparse.SUPPRESS,
                        help=f'residual tolerance (default {DEFAULT_TOL:g})')
    parser.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                        help=f'solver seed (default {DEFAULT_SEED})')


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='anyonkit', description='Fusion rings, coherence data and braiding.')
    _global_flags(p)
    sub = p.add_subparsers(dest='command', required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp)
        sp.add_argument('model', help='.anyon file or bundled model name')
        return sp

    add('validate', 'check the ring axioms')
    sp = add('homcats', 'list Hom-categories (pairs fusing to each charge)')
    sp.add_argument('--charge', help='only this total charge')
    sp = add('dims', 'fusion-space dimensions')
    sp.add_argument('--anyons', required=True, help='whitespace-separated leaf labels')
    sp.add_argument('--charge', help='total charge (default: every label)')
    sp = add('solve', 'solve pentagon and hexagon equations')
    sp.add_argument('--out', help='write the symbols JSON here')
    sp.add_argument('--restarts', type=int, default=64, help='random restarts (default 64)')
    sp = add('verify', 're-evaluate residuals of a symbols file')
    sp.add_argument('symbols', help='symbols JSON written by solve')
    for name, help_ in (('braid', 'evaluate a braid word'), ('compile', 'search for a braid word near a target')):
        sp = add(name, help_)
        sp.add_argument('symbols', help='symbols JSON with R-symbols')
        sp.add_argument('--anyons', required=True, help='whitespace-separated leaf labels')
        sp.add_argument('--charge', required=True, help='total charge')
        if name == 'braid':
            sp.add_argument('--word', default='', help="generators such as 's1 s2^-1 s1' (default: identity)")
            sp.add_argument('--state', help='JSON amplitude list')
            sp.add_argument('--pair', type=int, default=1, help='leaf pair to measure (default 1)')
        else:
            sp.add_argument('--target', required=True, help='JSON matrix; entries are numbers or [re, im]')
            sp.add_argument('--max-len', type=int, default=8, help='longest word searched, 0..14 (default 8)')
    return p


def _dispatch(args) -> CommandResult:
    tol = getattr(args, 'tol', DEFAULT_TOL)
    seed = getattr(args, 'seed', DEFAULT_SEED)
    if not tol > 0:
        raise UsageError('--tol must be positive')
    cmd = args.command
    if cmd == 'validate':
        return cmd_validate(args.model)
    if cmd == 'homcats':
        return cmd_homcats(args.model, args.charge)
    if cmd == 'dims':
        return cmd_dims(args.model, args.anyons, args.charge)
    if cmd == 'solve':
        if args.restarts < 1:
            raise UsageError('--restarts must be at least 1')
        return cmd_solve(args.model, args.out, tol, seed, args.restarts)
    if cmd == 'verify':
        return cmd_verify(args.model, args.symbols, tol)
    if cmd == 'braid':
        return cmd_braid(args.model, args.symbols, args.anyons, args.charge, args.word, args.state, args.pair)
    return cmd_compile(args.model, args.symbols, args.anyons, args.charge, args.target, args.max_len)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, 'json', False)
    try:
        result = _dispatch(args)
    except UsageError as exc:
        print(f'anyonkit {args.command}: error: {exc}', file=stderr)
        return 2
    except ModelParseError as exc:
        result = CommandResult(1, {'error': 'parse error',
                                   'issues': [{'line': i.line, 'column': i.column, 'message': i.message}
                                              for i in exc.issues]},
                               errors=[str(exc)])
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        result = CommandResult(1, {'error': 'unreadable file', 'message': str(exc)}, errors=[str(exc)])
    except (DomainError, SymbolFormatError, IncompleteTableError, UnsupportedFeatureError,
            SolverFailure) as exc:
        kind = 'unsupported' if isinstance(exc, UnsupportedFeatureError) else type(exc).__name__
        result = CommandResult(1, {'error': kind, 'message': str(exc)}, errors=[_prefixed(kind, exc)])
    for line in result.errors:
        print(line, file=stderr)
    if as_json:
        print(jsonfmt.dumps(result.payload), file=stdout)
    else:
        for line in result.text:
            print(line, file=stdout)
    return result.code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == '__main__':
    main()
