"""Fusion-tree bases, Hom-category indexing and charge-typed states.

Bases are left-associated ("caterpillar") trees::

    i1   i2   i3        in
     \\   /    /         /
      k1     /         /
        \\   /         /
         k2   ...    /
           \\        /
             charge

A tree is recorded by its leaves, its internal labels ``k1 .. k_{n-2}`` and
its total charge.  Trees are ordered lexicographically by internal label ids,
so matrices built on a basis are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, LeafMismatchError, SuperselectionError, UnsupportedFeatureError
from .fusion_ring import FusionRing, LabelLike


@dataclass(frozen=True)
class FusionTree:
    leaves: tuple[int, ...]
    internals: tuple[int, ...]
    charge: int

    def chain(self) -> tuple[int, ...]:
        """Running charges ``(i1, k1, ..., k_{n-2}, charge)``; entry ``m`` is the charge of the first m+1 leaves."""
        if len(self.leaves) == 1:
            return (self.charge,)
        return (self.leaves[0],) + self.internals + (self.charge,)

    def vertices(self) -> list[tuple[int, int, int]]:
        """Trivalent vertices ``(a, b, c)`` meaning ``a x b -> c``, from the bottom up."""
        ch = self.chain()
        return [(ch[m - 1], self.leaves[m], ch[m]) for m in range(1, len(self.leaves))]

    def is_admissible(self, ring: FusionRing) -> bool:
        if len(self.leaves) == 1:
            return self.leaves[0] == self.charge and not self.internals
        if len(self.internals) != len(self.leaves) - 2:
            return False
        return all(ring.N[a, b, c] > 0 for a, b, c in self.vertices())


@dataclass(frozen=True)
class FusionBasis:
    ring: FusionRing
    leaves: tuple[int, ...]
    charge: int
    trees: tuple[FusionTree, ...]

    def __len__(self) -> int:
        return len(self.trees)

    @property
    def sector(self) -> tuple[tuple[int, ...], int]:
        return (self.leaves, self.charge)

    def index(self, internals: Sequence[int]) -> int:
        """Position of the tree with the given internal labels."""
        key = tuple(internals)
        for i, t in enumerate(self.trees):
            if t.internals == key:
                return i
        raise DomainError(f'no tree with internals {key} in this basis')

    def describe(self) -> str:
        nm = self.ring.names
        return f'V^{nm[self.charge]}_{{{" ".join(nm[x] for x in self.leaves)}}}'


@dataclass(frozen=True)
class HomCategoryIndex:
    """Simple objects ``V_ab^charge`` of the Hom-category attached to one charge."""

    charge: int
    pairs: tuple[tuple[int, int], ...]


def _check_leaves(ring: FusionRing, leaves: Sequence[LabelLike], charge: LabelLike) -> tuple[tuple[int, ...], int]:
    if len(leaves) == 0:
        raise DomainError('a fusion space needs at least one anyon')
    return tuple(ring.index(x) for x in leaves), ring.index(charge)


def _require_multiplicity_free(ring: FusionRing) -> None:
    if not ring.is_multiplicity_free:
        raise UnsupportedFeatureError('fusion-tree bases are only built for multiplicity-free rings')


def _trees(ring: FusionRing, leaves: tuple[int, ...], charge: int) -> list[FusionTree]:
    n = len(leaves)
    if n == 1:
        return [FusionTree(leaves, (), charge)] if leaves[0] == charge else []
    out = []

    def walk(m: int, current: int, acc: list[int]) -> None:
        # current = charge of the first m leaves
        if m == n:
            if current == charge:
                out.append(FusionTree(leaves, tuple(acc[:-1]), charge))
            return
        for c in ring.outcomes(current, leaves[m]):
            acc.append(c)
            walk(m + 1, c, acc)
            acc.pop()

    walk(1, leaves[0], [])
    return out


def enumerate_basis(ring: FusionRing, leaves: Sequence[LabelLike], charge: LabelLike) -> FusionBasis:
    """All admissible left-associated trees for ``leaves -> charge``."""
    _require_multiplicity_free(ring)
    lv, ch = _check_leaves(ring, leaves, charge)
    return FusionBasis(ring, lv, ch, tuple(_trees(ring, lv, ch)))


def dim(ring: FusionRing, leaves: Sequence[LabelLike], charge: LabelLike) -> int:
    """Dimension of the fusion space, from a product of fusion matrices.

    Works for arbitrary multiplicities (exact integer arithmetic).
    """
    lv, ch = _check_leaves(ring, leaves, charge)
    v = [0] * ring.size
    v[lv[0]] = 1
    Nint = ring.N.tolist()
    for x in lv[1:]:
        v = [sum(v[b] * Nint[b][x][c] for b in ring.labels) for c in ring.labels]
    return v[ch]


def homcat(ring: FusionRing, charge: LabelLike) -> HomCategoryIndex:
    ch = ring.index(charge)
    pairs = tuple((int(a), int(b)) for a, b in zip(*np.nonzero(ring.N[:, :, ch] > 0)))
    return HomCategoryIndex(ch, pairs)


@dataclass(frozen=True)
class Decomposition:
    """Direct-sum decomposition of a fusion space into tensor products of pairwise spaces."""

    ring: FusionRing
    leaves: tuple[int, ...]
    charge: int
    chains: tuple[tuple[int, ...], ...]

    def factors(self, chain: Sequence[int]) -> list[tuple[int, int, int]]:
        """The pairwise spaces ``V^c_{ab}`` (as ``(a, b, c)``) of one summand."""
        return FusionTree(self.leaves, tuple(chain), self.charge).vertices()

    def __str__(self) -> str:
        nm = self.ring.names
        if len(self.leaves) == 1:
            return f'V^{nm[self.charge]}_{nm[self.leaves[0]]}' if self.chains else '0'
        terms = []
        for chain in self.chains:
            terms.append(' ⊗ '.join(f'V^{nm[c]}_{{{nm[a]} {nm[b]}}}' for a, b, c in self.factors(chain)))
        return ' ⊕ '.join(terms) if terms else '0'


def decompose(ring: FusionRing, leaves: Sequence[LabelLike], charge: LabelLike) -> Decomposition:
    basis = enumerate_basis(ring, leaves, charge)
    return Decomposition(ring, basis.leaves, basis.charge, tuple(t.internals for t in basis.trees))


class ChargedState:
    """Amplitude vector on a fusion basis; its sector is ``(leaves, charge)``.

    A state lives in exactly one sector by construction, which is how the
    superselection rule is enforced: there is no way to build a vector whose
    components carry different total charges.
    """

    __slots__ = ('basis', 'amplitudes')

    def __init__(self, basis: FusionBasis, amplitudes):
        amp = np.array(amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (len(basis),):
            raise DomainError(f'expected {len(basis)} amplitudes for {basis.describe()}, got {amp.size}')
        if not np.isfinite(amp).all():
            raise DomainError('amplitudes must be finite')
        amp.setflags(write=False)
        self.basis = basis
        self.amplitudes = amp

    @classmethod
    def basis_state(cls, basis: FusionBasis, internals: Sequence[int] = ()) -> 'ChargedState':
        amp = np.zeros(len(basis), dtype=complex)
        amp[basis.index(internals)] = 1
        return cls(basis, amp)

    @property
    def sector(self) -> tuple[tuple[int, ...], int]:
        return self.basis.sector

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> 'ChargedState':
        n = self.norm
        if n == 0:
            raise DomainError('cannot normalize the zero vector')
        return ChargedState(self.basis, self.amplitudes / n)

    def __repr__(self) -> str:
        return f'ChargedState({self.basis.describe()}, {self.amplitudes!r})'


def superpose(s1: ChargedState, s2: ChargedState, c1: complex = 1, c2: complex = 1) -> ChargedState:
    """``c1 * s1 + c2 * s2``, allowed only inside a single sector."""
    b1, b2 = s1.basis, s2.basis
    if b1.ring != b2.ring:
        raise SuperselectionError('states belong to different anyon models', b1.sector, b2.sector)
    if b1.charge != b2.charge:
        raise SuperselectionError(
            f'cannot superpose {b1.describe()} and {b2.describe()}: total charges differ',
            b1.sector, b2.sector)
    if b1.leaves != b2.leaves:
        raise LeafMismatchError(
            f'cannot superpose {b1.describe()} and {b2.describe()}: anyon contents differ',
            b1.sector, b2.sector)
    return ChargedState(b1, c1 * s1.amplitudes + c2 * s2.amplitudes)
