"""Fusion rings: the object-level data of an anyon model.

A :class:`FusionRing` holds a finite list of anyon labels, a dual map and the
fusion multiplicities ``N[a, b, c]`` (how often ``c`` occurs in ``a x b``).
Labels are plain integers ``0 .. L-1``; label ``0`` is always the unit
(vacuum).  Display names are only used at I/O boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError

LabelLike = Union[int, str]


class FusionRing:
    """Immutable fusion ring.

    Parameters
    ----------
    names : sequence of str
        Display names.  ``names[0]`` is the unit.
    dual : sequence of int
        ``dual[a]`` is the label of the antiparticle of ``a``.
    N : array_like, shape (L, L, L)
        Non-negative integer multiplicities ``N[a, b, c]``.
    """

    def __init__(self, names: Sequence[str], dual: Sequence[int], N):
        names = tuple(str(n) for n in names)
        L = len(names)
        if L == 0:
            raise DomainError('a fusion ring needs at least the unit label')
        if len(set(names)) != L:
            raise DomainError(f'duplicate label names in {names}')
        dual = tuple(int(d) for d in dual)
        if len(dual) != L or any(not 0 <= d < L for d in dual):
            raise DomainError('dual map must send every label to a label')
        N = np.array(N, dtype=np.int64)
        if N.shape != (L, L, L):
            raise DomainError(f'fusion tensor must have shape {(L, L, L)}, got {N.shape}')
        if (N < 0).any():
            raise DomainError('fusion multiplicities must be non-negative')
        N.setflags(write=False)
        self._names = names
        self._index = {n: i for i, n in enumerate(names)}
        self._dual = dual
        self._N = N

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def dual_map(self) -> tuple[int, ...]:
        return self._dual

    @property
    def N(self) -> np.ndarray:
        """Read-only fusion tensor ``N[a, b, c]``."""
        return self._N

    @property
    def size(self) -> int:
        return len(self._names)

    @property
    def unit(self) -> int:
        return 0

    @property
    def labels(self) -> range:
        return range(len(self._names))

    def index(self, label: LabelLike) -> int:
        """Resolve a label given by id or display name."""
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if 0 <= label < self.size:
                return int(label)
            raise DomainError(f'label id {label} out of range 0..{self.size - 1}')
        if isinstance(label, str) and label in self._index:
            return self._index[label]
        raise DomainError(f'unknown label {label!r}; known labels: {" ".join(self._names)}')

    def name(self, label: LabelLike) -> str:
        return self._names[self.index(label)]

    def dual(self, label: LabelLike) -> int:
        return self._dual[self.index(label)]

    def fusion_matrix(self, a: LabelLike) -> np.ndarray:
        """Matrix ``[N(a, b, c)]_{b, c}`` of left multiplication by ``a``."""
        return self._N[self.index(a)]

    def outcomes(self, a: int, b: int) -> list[int]:
        """Labels ``c`` with ``N(a, b, c) > 0`` in id order (no validation, hot path)."""
        return [int(c) for c in np.flatnonzero(self._N[a, b])]

    @property
    def is_multiplicity_free(self) -> bool:
        return bool((self._N <= 1).all())

    @property
    def is_commutative(self) -> bool:
        return bool((self._N == self._N.transpose(1, 0, 2)).all())

    def subring(self, labels: Iterable[LabelLike]) -> 'FusionRing':
        """Restrict to a subset of labels closed under fusion and duals.

        The unit must be included; it stays first, the other labels keep
        their relative order.
        """
        ids = sorted({self.index(x) for x in labels})
        if 0 not in ids:
            raise DomainError('a subring must contain the unit')
        keep = set(ids)
        for a in ids:
            if self._dual[a] not in keep:
                raise DomainError(f'{self._names[a]}: dual {self._names[self._dual[a]]} not in subset')
            for b in ids:
                for c in self.outcomes(a, b):
                    if c not in keep:
                        raise DomainError(
                            f'subset not closed: {self._names[a]} x {self._names[b]} contains {self._names[c]}')
        pos = {old: new for new, old in enumerate(ids)}
        N = self._N[np.ix_(ids, ids, ids)]
        return FusionRing([self._names[i] for i in ids], [pos[self._dual[i]] for i in ids], N)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self._names == other._names and self._dual == other._dual
                and np.array_equal(self._N, other._N))

    def __hash__(self) -> int:
        return hash((self._names, self._dual, self._N.tobytes()))

    def __repr__(self) -> str:
        return f'FusionRing({list(self._names)})'


@dataclass(frozen=True)
class Violation:
    """One failed ring axiom together with the labels witnessing it."""

    axiom: str
    labels: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f'{self.axiom}: {self.message}'


def fuse(ring: FusionRing, a: LabelLike, b: LabelLike) -> dict[int, int]:
    """Fusion outcomes of ``a x b`` as ``{c: N(a, b, c)}`` in label order."""
    a, b = ring.index(a), ring.index(b)
    row = ring.N[a, b]
    return {int(c): int(row[c]) for c in np.flatnonzero(row)}


def _word_vector(ring: FusionRing, word: Sequence[int], right: bool = False) -> np.ndarray:
    if right:
        # x1 x (x2 x (... x xn)): fold from the right end
        v = np.zeros(ring.size, dtype=object)
        v[word[-1]] = 1
        for x in reversed(word[:-1]):
            v = np.array([sum(int(ring.N[x, b, c]) * v[b] for b in ring.labels) for c in ring.labels], dtype=object)
        return v
    v = np.zeros(ring.size, dtype=object)
    v[word[0]] = 1
    for x in word[1:]:
        v = np.array([sum(v[b] * int(ring.N[b, x, c]) for b in ring.labels) for c in ring.labels], dtype=object)
    return v


def fuse_word(ring: FusionRing, word: Sequence[LabelLike], *, right_associated: bool = False) -> dict[int, int]:
    """Iterated fusion of a sequence of labels.

    By default the product is left-associated, ``((x1 x x2) x x3) x ...``.
    Uses exact integer arithmetic (Python ints) so large words never overflow.
    """
    if len(word) == 0:
        raise DomainError('fuse_word needs a nonempty word')
    ids = [ring.index(x) for x in word]
    v = _word_vector(ring, ids, right=right_associated)
    return {c: int(v[c]) for c in ring.labels if v[c] != 0}


def verify_ring(ring: FusionRing) -> list[Violation]:
    """Check the ring axioms; returns the list of violations (empty if valid)."""
    out: list[Violation] = []
    nm = ring.names
    N = ring.N
    u = ring.unit
    L = ring.size
    eye = np.eye(L, dtype=np.int64)

    for x in range(L):
        for y in range(L):
            if N[u, x, y] != eye[x, y]:
                out.append(Violation('unit', (nm[x], nm[y]),
                                     f'N({nm[u]}, {nm[x]}, {nm[y]}) = {N[u, x, y]}, expected {eye[x, y]}'))
            if N[x, u, y] != eye[x, y]:
                out.append(Violation('unit', (nm[x], nm[y]),
                                     f'N({nm[x]}, {nm[u]}, {nm[y]}) = {N[x, u, y]}, expected {eye[x, y]}'))

    if ring.dual(u) != u:
        out.append(Violation('dual_unit', (nm[u],), f'dual of the unit is {nm[ring.dual(u)]}'))
    for x in range(L):
        xd = ring.dual(x)
        if ring.dual(xd) != x:
            out.append(Violation('dual_involution', (nm[x],),
                                 f'dual(dual({nm[x]})) = {nm[ring.dual(xd)]}'))
        if N[x, xd, u] < 1:
            out.append(Violation('duality', (nm[x], nm[xd]),
                                 f'{nm[x]} x {nm[xd]} does not contain the unit {nm[u]}'))

    for a in range(L):
        for b in range(L):
            if not N[a, b].any():
                out.append(Violation('nonempty', (nm[a], nm[b]), f'{nm[a]} x {nm[b]} has no outcome'))

    left = np.einsum('ijp,pkl->ijkl', N, N)
    right = np.einsum('jkq,iql->ijkl', N, N)
    for i, j, k, l in zip(*np.nonzero(left != right)):
        out.append(Violation('associativity', (nm[i], nm[j], nm[k], nm[l]),
                             f'(({nm[i]} {nm[j]}) {nm[k]}) -> {nm[l]} has multiplicity {left[i, j, k, l]} '
                             f'but ({nm[i]} ({nm[j]} {nm[k]})) -> {nm[l]} has {right[i, j, k, l]}'))
    return out


def quantum_dimensions(ring: FusionRing) -> dict[int, float]:
    """Perron-Frobenius dimension of every label.

    ``d(a)`` is the spectral radius of the fusion matrix of ``a``.
    """
    bad = verify_ring(ring)
    if bad:
        raise DomainError(f'ring fails verification ({len(bad)} violation(s)), first: {bad[0]}')
    dims = {}
    for a in ring.labels:
        ev = np.linalg.eigvals(ring.fusion_matrix(a).astype(float))
        dims[a] = float(np.max(np.abs(ev)))
    return dims
