"""F- and R-symbol tables, gauge transformations and their JSON form.

Index conventions (multiplicity-free rings only):

* ``F[a, b, c, d, e, f]``: ``e`` is the internal charge of the left-associated
  tree ``((a b)->e c)->d`` and ``f`` the internal charge of the
  right-associated tree ``(a (b c)->f)->d``.  A left basis vector expands as
  ``|e>_L = sum_f F[e, f] |f>_R``.
* ``R[a, b, c]`` is the phase picked up by ``V^c_{ab}`` when ``a`` and ``b``
  are exchanged, so that ``|ab; c> -> R[a, b, c] |ba; c>``.
"""

from __future__ import annotations

import json
from typing import Iterator, Mapping

import numpy as np

from ..errors import IncompleteTableError, SymbolFormatError, UnsupportedFeatureError
from ..fusion_ring import FusionRing
from ..jsonfmt import fmt_float

FKey = tuple[int, int, int, int, int, int]
RKey = tuple[int, int, int]


def require_multiplicity_free(ring: FusionRing) -> None:
    if not ring.is_multiplicity_free:
        bad = [(ring.names[a], ring.names[b], ring.names[c]) for a, b, c in zip(*np.nonzero(ring.N > 1))]
        raise UnsupportedFeatureError(f'unsupported: fusion multiplicities > 1 at {bad[:4]}')


def f_block_labels(ring: FusionRing, a: int, b: int, c: int, d: int) -> tuple[list[int], list[int]]:
    """Left internals ``e`` and right internals ``f`` of the block ``F^{abc}_d``."""
    lefts = [e for e in ring.outcomes(a, b) if ring.N[e, c, d] > 0]
    rights = [f for f in ring.outcomes(b, c) if ring.N[a, f, d] > 0]
    return lefts, rights


def f_blocks(ring: FusionRing) -> Iterator[tuple[int, int, int, int, list[int], list[int]]]:
    """Every nonempty block ``(a, b, c, d, lefts, rights)`` in lexicographic order."""
    L = ring.size
    for a in range(L):
        for b in range(L):
            for c in range(L):
                for d in range(L):
                    lefts, rights = f_block_labels(ring, a, b, c, d)
                    if lefts:
                        yield a, b, c, d, lefts, rights


def f_keys(ring: FusionRing) -> list[FKey]:
    return [(a, b, c, d, e, f) for a, b, c, d, ls, rs in f_blocks(ring) for e in ls for f in rs]


def r_keys(ring: FusionRing) -> list[RKey]:
    return [(a, b, c) for a in ring.labels for b in ring.labels for c in ring.outcomes(a, b)]


def is_vacuum_block(ring: FusionRing, a: int, b: int, c: int) -> bool:
    """Blocks with a unit among the three fused labels are identity in the fixed gauge."""
    return ring.unit in (a, b, c)


class FSymbols:
    """Table of F-symbols on a multiplicity-free ring."""

    def __init__(self, ring: FusionRing, data: Mapping[FKey, complex]):
        require_multiplicity_free(ring)
        self.ring = ring
        self.data: dict[FKey, complex] = {tuple(int(i) for i in k): complex(v) for k, v in data.items()}

    @classmethod
    def identity_vacuum(cls, ring: FusionRing) -> 'FSymbols':
        """Only the vacuum blocks, all equal to 1."""
        data = {}
        for a, b, c, d, ls, rs in f_blocks(ring):
            if is_vacuum_block(ring, a, b, c):
                data[(a, b, c, d, ls[0], rs[0])] = 1.0
        return cls(ring, data)

    def __getitem__(self, key: FKey) -> complex:
        return self.data[key]

    def get(self, key: FKey, default=None):
        return self.data.get(key, default)

    def missing(self) -> list[FKey]:
        return [k for k in f_keys(self.ring) if k not in self.data]

    def require_complete(self) -> None:
        miss = self.missing()
        if miss:
            raise IncompleteTableError(miss, 'F')

    def block(self, a: int, b: int, c: int, d: int) -> tuple[list[int], list[int], np.ndarray]:
        lefts, rights = f_block_labels(self.ring, a, b, c, d)
        M = np.zeros((len(lefts), len(rights)), dtype=complex)
        missing = []
        for i, e in enumerate(lefts):
            for j, f in enumerate(rights):
                key = (a, b, c, d, e, f)
                if key in self.data:
                    M[i, j] = self.data[key]
                else:
                    missing.append(key)
        if missing:
            raise IncompleteTableError(missing, 'F')
        return lefts, rights, M

    def nontrivial_blocks(self, atol: float = 1e-12) -> list[tuple[int, int, int, int]]:
        """Blocks that differ from the identity matrix."""
        out = []
        for a, b, c, d, ls, rs in f_blocks(self.ring):
            _, _, M = self.block(a, b, c, d)
            if M.shape[0] != M.shape[1] or np.max(np.abs(M - np.eye(M.shape[0]))) > atol:
                out.append((a, b, c, d))
        return out

    def __repr__(self) -> str:
        return f'FSymbols({self.ring!r}, {len(self.data)} entries)'


class RSymbols:
    def __init__(self, ring: FusionRing, data: Mapping[RKey, complex]):
        require_multiplicity_free(ring)
        self.ring = ring
        self.data: dict[RKey, complex] = {tuple(int(i) for i in k): complex(v) for k, v in data.items()}

    def __getitem__(self, key: RKey) -> complex:
        return self.data[key]

    def get(self, key: RKey, default=None):
        return self.data.get(key, default)

    def missing(self) -> list[RKey]:
        return [k for k in r_keys(self.ring) if k not in self.data]

    def require_complete(self) -> None:
        miss = self.missing()
        if miss:
            raise IncompleteTableError(miss, 'R')

    def __repr__(self) -> str:
        return f'RSymbols({self.ring!r}, {len(self.data)} entries)'


def vertex_keys(ring: FusionRing) -> list[RKey]:
    """Pairwise spaces ``V^c_{ab}`` that carry a gauge phase (those without a unit leaf)."""
    return [(a, b, c) for a, b, c in r_keys(ring) if a != ring.unit and b != ring.unit]


def random_gauge(ring: FusionRing, rng: np.random.Generator) -> dict[RKey, complex]:
    return {k: complex(np.exp(2j * np.pi * rng.random())) for k in vertex_keys(ring)}


def gauge_transform(F: FSymbols, R: RSymbols | None, phases: Mapping[RKey, complex]):
    """Rescale each ``V^c_{ab}`` basis vector by ``phases[(a, b, c)]``.

    Missing keys (in particular every space with a unit leaf) keep phase 1.
    Returns the transformed ``(F, R)``.
    """
    u = lambda a, b, c: phases.get((a, b, c), 1.0)  # noqa: E731
    newF = {}
    for (a, b, c, d, e, f), v in F.data.items():
        newF[(a, b, c, d, e, f)] = v * u(a, b, e) * u(e, c, d) / (u(b, c, f) * u(a, f, d))
    newR = None
    if R is not None:
        newR = RSymbols(R.ring, {(a, b, c): v * u(a, b, c) / u(b, a, c) for (a, b, c), v in R.data.items()})
    return FSymbols(F.ring, newF), newR


def tree_phase(vertices, phases: Mapping[RKey, complex]) -> complex:
    """Phase picked up by a fusion-tree basis vector under :func:`gauge_transform`."""
    p = 1.0 + 0j
    for v in vertices:
        p *= phases.get(tuple(v), 1.0)
    return p


# --- JSON -----------------------------------------------------------------

def export_symbols(F: FSymbols, R: RSymbols | None, model: str) -> str:
    """Serialize to the symbols JSON schema (sorted keys, 17 significant digits)."""
    ring = F.ring
    nm = ring.names
    q = lambda s: json.dumps(s, ensure_ascii=False)  # noqa: E731
    lines = ['{']
    f_rows = []
    for key in sorted(F.data):
        a, b, c, d, e, f = key
        v = F.data[key]
        f_rows.append(f'    {{"a": {q(nm[a])}, "b": {q(nm[b])}, "c": {q(nm[c])}, "d": {q(nm[d])}, '
                      f'"e": {q(nm[e])}, "f": {q(nm[f])}, "im": {fmt_float(v.imag)}, "re": {fmt_float(v.real)}}}')
    lines.append('  "F": [' + ('\n' + ',\n'.join(f_rows) + '\n  ' if f_rows else '') + '],')
    r_rows = []
    if R is not None:
        for key in sorted(R.data):
            a, b, c = key
            v = R.data[key]
            r_rows.append(f'    {{"a": {q(nm[a])}, "b": {q(nm[b])}, "c": {q(nm[c])}, '
                          f'"im": {fmt_float(v.imag)}, "re": {fmt_float(v.real)}}}')
    lines.append('  "R": [' + ('\n' + ',\n'.join(r_rows) + '\n  ' if r_rows else '') + '],')
    lines.append(f'  "model": {q(model)}')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _entry_number(entry: dict, field: str, where: str) -> float:
    v = entry.get(field)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SymbolFormatError(f'{where}: field {field!r} must be a number')
    return float(v)


def _entry_label(ring: FusionRing, entry: dict, field: str, where: str) -> int:
    v = entry.get(field)
    if not isinstance(v, str):
        raise SymbolFormatError(f'{where}: field {field!r} must be a label name')
    if v not in ring.names:
        raise SymbolFormatError(f'{where}: unknown label {v!r}')
    return ring.names.index(v)


def import_symbols(text: str, ring: FusionRing, *, require_complete: bool = True):
    """Parse symbols JSON against ``ring``; returns ``(F, R, model_name)``.

    ``R`` is ``None`` when the document has no ``"R"`` key.  With
    ``require_complete`` (the default) missing admissible tuples raise
    :class:`IncompleteTableError`.
    """
    require_multiplicity_free(ring)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolFormatError(f'malformed JSON: {exc}') from None
    if not isinstance(doc, dict):
        raise SymbolFormatError('top level must be an object')
    if not isinstance(doc.get('F'), list):
        raise SymbolFormatError('missing "F" array')
    model = doc.get('model', '')
    if not isinstance(model, str):
        raise SymbolFormatError('"model" must be a string')

    admissible_f = set(f_keys(ring))
    fdata = {}
    for i, entry in enumerate(doc['F']):
        where = f'F[{i}]'
        if not isinstance(entry, dict):
            raise SymbolFormatError(f'{where}: expected an object')
        key = tuple(_entry_label(ring, entry, k, where) for k in 'abcdef')
        if key not in admissible_f:
            raise SymbolFormatError(f'{where}: inadmissible tuple {tuple(entry[k] for k in "abcdef")}')
        if key in fdata:
            raise SymbolFormatError(f'{where}: duplicate entry')
        fdata[key] = complex(_entry_number(entry, 're', where), _entry_number(entry, 'im', where))
    F = FSymbols(ring, fdata)

    R = None
    if 'R' in doc:
        if not isinstance(doc['R'], list):
            raise SymbolFormatError('"R" must be an array')
        admissible_r = set(r_keys(ring))
        rdata = {}
        for i, entry in enumerate(doc['R']):
            where = f'R[{i}]'
            if not isinstance(entry, dict):
                raise SymbolFormatError(f'{where}: expected an object')
            key = tuple(_entry_label(ring, entry, k, where) for k in 'abc')
            if key not in admissible_r:
                raise SymbolFormatError(f'{where}: inadmissible tuple {tuple(entry[k] for k in "abc")}')
            if key in rdata:
                raise SymbolFormatError(f'{where}: duplicate entry')
            rdata[key] = complex(_entry_number(entry, 're', where), _entry_number(entry, 'im', where))
        R = RSymbols(ring, rdata)

    if require_complete:
        F.require_complete()
        if R is not None:
            R.require_complete()
    return F, R, model
