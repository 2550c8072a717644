"""Numerical solution of the pentagon and hexagon equations.

The pentagon equations (plus block unitarity) are flattened into a complex
polynomial system in the unknown F-entries and solved by damped Gauss-Newton
from random unitary starting points.  Blocks with a unit among the three fused
labels are fixed to the identity.  The converged table is then moved to a
canonical gauge: in every other block, the first nonzero entry of the first
row is made real and positive whenever a basis rephasing can do so (some
entries are gauge invariant, e.g. the top-left entry of the Ising
``F^{sigma sigma sigma}_sigma``; those keep their sign).

With F fixed, the hexagon equations (both the R and the R^-1 form, plus
``|R| = 1``) have finitely many solutions.  All restarts are run, converged
solutions are deduplicated and the one from the lowest restart index is
returned, so the choice depends only on the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, SolverFailure, UnsupportedFeatureError
from ..fusion_ring import FusionRing, verify_ring
from .polysys import PolynomialSystem, levenberg_marquardt
from .residuals import hexagon_residual, pentagon_residual, r_modulus_deviation, unitarity_deviation
from .symbols import (FSymbols, RSymbols, f_blocks, gauge_transform, is_vacuum_block, r_keys,
                      require_multiplicity_free, vertex_keys)

MAX_LABELS = 8


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-10
    max_iterations: int = 200
    restarts: int = 64
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError('tolerance must be positive')
        if self.restarts < 1:
            raise DomainError('need at least one restart')
        if self.max_iterations < 1:
            raise DomainError('need at least one iteration')

    def rng(self, restart: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, restart])


@dataclass
class SolveReport:
    residual: float
    restart: int
    iterations: int
    n_unknowns: int
    n_equations: int
    unitarity: float = 0.0
    inverse_residual: float = 0.0
    solutions: list = field(default_factory=list)


def _check_ring(ring: FusionRing) -> None:
    require_multiplicity_free(ring)
    bad = verify_ring(ring)
    if bad:
        raise DomainError(f'ring fails verification: {bad[0]}')
    if ring.size > MAX_LABELS:
        raise UnsupportedFeatureError(f'solver handles at most {MAX_LABELS} labels, got {ring.size}')


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def vacuum_reduced_blocks(ring: FusionRing) -> list[tuple[int, int, int, int, list[int], list[int]]]:
    """Blocks left after discarding every block with the unit among its four labels."""
    u = ring.unit
    return [blk for blk in f_blocks(ring) if u not in blk[:4]]


class _Unknowns:
    """Bookkeeping between table keys and solver variable indices."""

    def __init__(self, keys, fixed: dict):
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.fixed = fixed

    def factor(self, key, conj: bool = False):
        """Either ``('var', (idx, conj))`` or ``('const', value)``."""
        if key in self.index:
            return 'var', (self.index[key], conj)
        v = self.fixed[key]
        return 'const', (np.conj(v) if conj else v)

    def term(self, coef: complex, *factors) -> tuple[complex, list]:
        vs = []
        for key, conj in factors:
            kind, val = self.factor(key, conj)
            if kind == 'var':
                vs.append(val)
            else:
                coef *= val
        return coef, vs


def _add(system: PolynomialSystem, terms: list[tuple[complex, list]]) -> None:
    const = sum(c for c, vs in terms if not vs)
    var_terms = [(c, vs) for c, vs in terms if vs]
    if not var_terms and abs(const) < 1e-14:
        return
    system.add_equation(var_terms + [(const, [])])


def pentagon_system(ring: FusionRing) -> tuple[PolynomialSystem, _Unknowns, list]:
    """Flattened pentagon + unitarity system for the non-vacuum F-entries."""
    fixed, unknown_keys, unknown_blocks = {}, [], []
    for a, b, c, d, ls, rs in f_blocks(ring):
        if is_vacuum_block(ring, a, b, c):
            fixed[(a, b, c, d, ls[0], rs[0])] = 1.0
        else:
            unknown_blocks.append((a, b, c, d, ls, rs))
            unknown_keys.extend((a, b, c, d, e, f) for e in ls for f in rs)
    U = _Unknowns(unknown_keys, fixed)
    system = PolynomialSystem(len(unknown_keys))
    L = ring.size
    out = ring.outcomes
    N = ring.N
    for a in range(L):
        for b in range(L):
            for c in range(L):
                for d in range(L):
                    for f in out(a, b):
                        for g in out(f, c):
                            for e in out(g, d):
                                for l in out(c, d):
                                    for k in out(b, l):
                                        if not N[a, k, e]:
                                            continue
                                        terms = []
                                        if N[f, l, e]:
                                            terms.append(U.term(1.0, ((f, c, d, e, g, l), False),
                                                                ((a, b, l, e, f, k), False)))
                                        for h in out(b, c):
                                            if N[a, h, g] and N[h, d, k]:
                                                terms.append(U.term(-1.0, ((a, b, c, g, f, h), False),
                                                                    ((a, h, d, e, g, k), False),
                                                                    ((b, c, d, k, h, l), False)))
                                        _add(system, terms)
    for a, b, c, d, ls, rs in unknown_blocks:
        for i, e in enumerate(ls):
            for e2 in ls[i:]:
                terms = [U.term(1.0, ((a, b, c, d, e, f), False), ((a, b, c, d, e2, f), True)) for f in rs]
                terms.append((-1.0 if e == e2 else 0.0, []))
                _add(system, terms)
    return system, U, unknown_blocks


def canonical_gauge(F: FSymbols, R: RSymbols | None = None, atol: float = 1e-8):
    """Rephase so each non-vacuum block has a positive real entry in its first row, where possible.

    Blocks are visited in lexicographic order.  In each, the first nonzero
    entry of the first row whose phase a basis rephasing can change is made
    real positive, unless that phase is already tied to entries fixed
    earlier.  Gauge-invariant entries are left untouched.

    Returns ``(F, R, phases)``.
    """
    ring = F.ring
    vk = vertex_keys(ring)
    col = {k: i for i, k in enumerate(vk)}
    rows, targets, fixed_keys = [], [], []
    rank = 0
    for a, b, c, d, ls, rs in f_blocks(ring):
        if is_vacuum_block(ring, a, b, c):
            continue
        e0 = ls[0]
        for f0 in rs:
            if abs(F.data[(a, b, c, d, e0, f0)]) <= atol:
                continue
            row = np.zeros(len(vk))
            for key, sign in (((a, b, e0), 1), ((e0, c, d), 1), ((b, c, f0), -1), ((a, f0, d), -1)):
                if key in col:
                    row[col[key]] += sign
            if not row.any():
                continue  # gauge invariant entry, try the next one in the row
            new_rank = np.linalg.matrix_rank(np.array(rows + [row]))
            if new_rank > rank:
                rank = new_rank
                rows.append(row)
                key = (a, b, c, d, e0, f0)
                targets.append(-np.angle(F.data[key]))
                fixed_keys.append(key)
            break
    if not rows:
        return F, R, {}
    theta, *_ = np.linalg.lstsq(np.array(rows), np.array(targets), rcond=None)
    phases = {k: complex(np.exp(1j * t)) for k, t in zip(vk, theta)}
    F2, R2 = gauge_transform(F, R, phases)
    for key in fixed_keys:
        F2.data[key] = complex(abs(F2.data[key]), 0.0)
    return F2, R2, phases


def solve_pentagon(ring: FusionRing, config: SolverConfig | None = None) -> tuple[FSymbols, SolveReport]:
    """First converged restart of the pentagon system."""
    config = config or SolverConfig()
    _check_ring(ring)
    system, U, blocks = pentagon_system(ring)
    if not U.keys:
        F = FSymbols(ring, dict(U.fixed))
        res = pentagon_residual(ring, F)
        if res >= config.tolerance:
            raise SolverFailure('pentagon inconsistent with vacuum identities', res)
        return F, SolveReport(res, 0, 0, 0, system.n_eqs, unitarity_deviation(F))

    lm_tol = max(config.tolerance * 1e-2, 1e-14)
    best = np.inf
    for restart in range(config.restarts):
        rng = config.rng(restart)
        z0 = np.empty(len(U.keys), dtype=complex)
        for a, b, c, d, ls, rs in blocks:
            Q = random_unitary(len(ls), rng)
            for i, e in enumerate(ls):
                for j, f in enumerate(rs):
                    z0[U.index[(a, b, c, d, e, f)]] = Q[i, j]
        sol = levenberg_marquardt(system, z0, tol=lm_tol, max_iter=config.max_iterations)
        data = dict(U.fixed)
        data.update({k: complex(v) for k, v in zip(U.keys, sol.z)})
        F, _, _ = canonical_gauge(FSymbols(ring, data))
        res = pentagon_residual(ring, F)
        uni = unitarity_deviation(F)
        best = min(best, max(res, uni))
        if res < config.tolerance and uni < config.tolerance:
            return F, SolveReport(res, restart, sol.iterations, len(U.keys), system.n_eqs, uni)
    raise SolverFailure(f'no unitary pentagon solution in {config.restarts} restarts', best)


def _hexagon_equations(ring: FusionRing, system: PolynomialSystem, U: _Unknowns, fkey) -> None:
    """Both hexagon forms and ``|R|^2 = 1``; ``fkey`` maps an F index tuple to its key in ``U``."""
    L = ring.size
    out = ring.outcomes
    N = ring.N
    for x in range(L):
        for y in range(L):
            for z in range(L):
                for u in range(L):
                    for p in out(x, y):
                        if not N[p, z, u]:
                            continue
                        for q in out(x, z):
                            if not N[y, q, u]:
                                continue
                            rs = [r for r in out(y, z) if N[x, r, u] and N[r, x, u]]
                            for inv in (False, True):
                                if inv:
                                    lhs = U.term(1.0, (('R', y, x, p), True), (fkey((y, x, z, u, p, q)), False),
                                                 (('R', z, x, q), True))
                                else:
                                    lhs = U.term(1.0, (('R', x, y, p), False), (fkey((y, x, z, u, p, q)), False),
                                                 (('R', x, z, q), False))
                                terms = [lhs]
                                for r in rs:
                                    rk = ('R', r, x, u) if inv else ('R', x, r, u)
                                    terms.append(U.term(-1.0, (fkey((x, y, z, u, p, r)), False), (rk, inv),
                                                        (fkey((y, z, x, u, r, q)), False)))
                                _add(system, terms)
    for key in U.keys:
        if key[0] == 'R':
            _add(system, [U.term(1.0, (key, False), (key, True)), (-1.0, [])])


def hexagon_system(ring: FusionRing, F: FSymbols) -> tuple[PolynomialSystem, _Unknowns]:
    fixed = {}
    unknown = []
    for a, b, c in r_keys(ring):
        if ring.unit in (a, b):
            fixed[('R', a, b, c)] = 1.0
        else:
            unknown.append(('R', a, b, c))
    for k, v in F.data.items():
        fixed[('F',) + k] = v
    U = _Unknowns(unknown, fixed)
    system = PolynomialSystem(len(unknown))
    _hexagon_equations(ring, system, U, lambda k: ('F',) + k)
    return system, U


def solve_hexagon(ring: FusionRing, F: FSymbols, config: SolverConfig | None = None,
                  dedup_tol: float = 1e-8) -> tuple[RSymbols, SolveReport]:
    config = config or SolverConfig()
    _check_ring(ring)
    if not ring.is_commutative:
        raise UnsupportedFeatureError('braiding needs a commutative fusion ring')
    F.require_complete()
    pres = pentagon_residual(ring, F)
    if pres >= config.tolerance:
        raise DomainError(f'F does not satisfy the pentagon (residual {pres:.3e})')
    system, U = hexagon_system(ring, F)
    base = {k[1:]: 1.0 for k in U.fixed if k[0] == 'R'}

    def table(z) -> RSymbols:
        data = dict(base)
        data.update({k[1:]: complex(v) for k, v in zip(U.keys, z)})
        return RSymbols(ring, data)

    if not U.keys:
        R = table(np.empty(0, dtype=complex))
        h1 = hexagon_residual(ring, F, R)
        h2 = hexagon_residual(ring, F, R, inverse_variant=True)
        if max(h1, h2) >= config.tolerance:
            raise SolverFailure('hexagon inconsistent with trivial braiding', max(h1, h2))
        return R, SolveReport(h1, 0, 0, 0, system.n_eqs, inverse_residual=h2, solutions=[R])

    lm_tol = max(config.tolerance * 1e-2, 1e-14)
    found: list[tuple[int, np.ndarray, RSymbols, float, float, int]] = []
    best = np.inf
    for restart in range(config.restarts):
        rng = config.rng(restart)
        z0 = np.exp(2j * np.pi * rng.random(len(U.keys)))
        sol = levenberg_marquardt(system, z0, tol=lm_tol, max_iter=config.max_iterations)
        R = table(sol.z)
        h1 = hexagon_residual(ring, F, R)
        h2 = hexagon_residual(ring, F, R, inverse_variant=True)
        mod = r_modulus_deviation(R)
        worst = max(h1, h2, mod)
        # the evaluator divides by R, so report the bounded polynomial residual instead
        best = min(best, sol.residual)
        if worst >= config.tolerance:
            continue
        if any(np.max(np.abs(sol.z - prev[1])) < dedup_tol for prev in found):
            continue
        found.append((restart, sol.z, R, h1, h2, sol.iterations))
    if not found:
        raise SolverFailure(f'no hexagon solution in {config.restarts} restarts', best)
    restart, _, R, h1, h2, iters = found[0]
    report = SolveReport(h1, restart, iters, len(U.keys), system.n_eqs, inverse_residual=h2,
                         solutions=[f[2] for f in found])
    return R, report
