from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from anyonkit.errors import DomainError, LeafMismatchError, SuperselectionError, UnsupportedFeatureError
from anyonkit.fusion_ring import quantum_dimensions
from anyonkit.fusion_space import (ChargedState, FusionTree, decompose, dim, enumerate_basis, homcat,
                                   superpose)
from anyonkit.model_io import BUNDLED, bundled_ring, parse_model


def brute_force_count(ring, leaves, charge):
    """Count internal-label assignments by exhaustive search (independent of the tree walk)."""
    leaves = tuple(ring.index(x) for x in leaves)
    charge = ring.index(charge)
    n = len(leaves)
    if n == 1:
        return int(leaves[0] == charge)
    count = 0
    for internals in itertools.product(ring.labels, repeat=n - 2):
        if FusionTree(leaves, internals, charge).is_admissible(ring):
            count += 1
    return count


def test_fibonacci_dims():
    fib = bundled_ring('fibonacci')
    expected = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    for n, e in zip(range(3, 13), expected):
        assert dim(fib, ['tau'] * n, 'tau') == e
        assert len(enumerate_basis(fib, ['tau'] * n, 'tau')) == e
        assert brute_force_count(fib, ['tau'] * n, 'tau') == e


def test_bundled_model_dims():
    ising = bundled_ring('ising')
    assert dim(ising, ['sigma'] * 3, 'sigma') == 2
    mr = bundled_ring('moore_read')
    assert dim(mr, ['sigma'] * 3, "sigma'") == 2
    assert dim(mr, ['sigma'] * 3, 'sigma') == 0
    for name in BUNDLED:
        assert dim(bundled_ring(name), ['1', '1'], '1') == 1


@pytest.mark.parametrize('name', BUNDLED)
def test_basis_matches_dim(name):
    ring = bundled_ring(name)
    rng = np.random.default_rng(7)
    for n in range(1, 9):
        for _ in range(6):
            leaves = [int(x) for x in rng.integers(0, ring.size, n)]
            for c in ring.labels:
                basis = enumerate_basis(ring, leaves, c)
                assert len(basis) == dim(ring, leaves, c)
                keys = [t.internals for t in basis.trees]
                assert keys == sorted(keys)
                assert all(t.is_admissible(ring) for t in basis.trees)
                if n <= 5:
                    assert len(basis) == brute_force_count(ring, leaves, c)


@pytest.mark.parametrize('name', BUNDLED)
def test_dimension_bookkeeping(name):
    ring = bundled_ring(name)
    d = quantum_dimensions(ring)
    rng = np.random.default_rng(3)
    for n in range(1, 8):
        leaves = [int(x) for x in rng.integers(0, ring.size, n)]
        total = sum(dim(ring, leaves, c) * d[c] for c in ring.labels)
        assert abs(total - math.prod(d[x] for x in leaves)) < 1e-9


def test_basis_examples():
    fib = bundled_ring('fibonacci')
    b = enumerate_basis(fib, ['tau'] * 3, 'tau')
    assert [t.internals for t in b.trees] == [(0,), (1,)]
    ising = bundled_ring('ising')
    b = enumerate_basis(ising, ['sigma'] * 3, 'sigma')
    assert sorted(t.internals for t in b.trees) == [(0,), (2,)]
    one = enumerate_basis(fib, ['tau'], 'tau')
    assert len(one) == 1 and one.trees[0].internals == ()
    assert len(enumerate_basis(fib, ['tau'], '1')) == 0
    with pytest.raises(DomainError):
        enumerate_basis(fib, [], 'tau')
    with pytest.raises(DomainError):
        dim(fib, ['tau', 'nope'], 'tau')


def test_multiplicity_rings():
    ring = parse_model('model m\nlabels 1 x\nfuse x x -> 1 x*2\n').ring
    assert dim(ring, ['x'] * 3, 'x') == 5  # 1*1 + 2*2
    with pytest.raises(UnsupportedFeatureError):
        enumerate_basis(ring, ['x'] * 3, 'x')


def test_homcat_examples():
    fib = bundled_ring('fibonacci')
    assert homcat(fib, 'tau').pairs == ((0, 1), (1, 0), (1, 1))
    ising = bundled_ring('ising')
    assert homcat(ising, '1').pairs == ((0, 0), (1, 1), (2, 2))
    mr = bundled_ring('moore_read')
    pairs = {(mr.name(a), mr.name(b)) for a, b in homcat(mr, 'psi').pairs}
    assert {('sigma', "sigma'"), ('alpha', 'alpha'), ("alpha'", "alpha'"), ('psi', '1')} <= pairs
    with pytest.raises(DomainError):
        homcat(fib, 'bogus')


@pytest.mark.parametrize('name', BUNDLED)
def test_homcat_partition(name):
    ring = bundled_ring(name)
    seen = []
    for c in ring.labels:
        h = homcat(ring, c)
        assert all(ring.N[a, b, c] > 0 for a, b in h.pairs)
        seen.extend((a, b, c) for a, b in h.pairs)
    assert len(seen) == len(set(seen))
    assert set(seen) == {tuple(int(i) for i in k) for k in zip(*np.nonzero(ring.N))}


def test_decompose():
    fib = bundled_ring('fibonacci')
    d = decompose(fib, ['tau'] * 3, 'tau')
    assert d.chains == ((0,), (1,))
    assert str(d) == 'V^1_{tau tau} ⊗ V^tau_{1 tau} ⊕ V^tau_{tau tau} ⊗ V^tau_{tau tau}'
    mr = bundled_ring('moore_read')
    d = decompose(mr, ['sigma'] * 3, "sigma'")
    assert [mr.name(c[0]) for c in d.chains] == ['alpha', "alpha'"]
    d = decompose(fib, ['tau', 'tau'], 'tau')
    assert d.chains == ((),)


def test_superpose_same_sector():
    fib = bundled_ring('fibonacci')
    b = enumerate_basis(fib, ['tau'] * 3, 'tau')
    s0 = ChargedState.basis_state(b, (0,))
    s1 = ChargedState.basis_state(b, (1,))
    psi = superpose(s0, s1, 1 / math.sqrt(2), 1 / math.sqrt(2))
    assert abs(psi.norm - 1) < 1e-12
    same = superpose(s0, s0, 1, 0)
    assert np.array_equal(same.amplitudes, s0.amplitudes)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


def test_superpose_moore_read_sectors():
    mr = bundled_ring('moore_read')
    ba = enumerate_basis(mr, ['sigma', 'sigma'], 'alpha')
    bb = enumerate_basis(mr, ['sigma', 'sigma'], "alpha'")
    with pytest.raises(SuperselectionError) as exc:
        superpose(ChargedState.basis_state(ba), ChargedState.basis_state(bb))
    assert exc.value.sector1 != exc.value.sector2


def test_superpose_leaf_mismatch():
    fib = bundled_ring('fibonacci')
    b1 = enumerate_basis(fib, ['tau', 'tau'], 'tau')
    b2 = enumerate_basis(fib, ['tau'], 'tau')
    with pytest.raises(LeafMismatchError):
        superpose(ChargedState.basis_state(b1), ChargedState.basis_state(b2))


def test_charged_state_checks():
    fib = bundled_ring('fibonacci')
    b = enumerate_basis(fib, ['tau'] * 3, 'tau')
    with pytest.raises(DomainError):
        ChargedState(b, [1, 0, 0])
    with pytest.raises(DomainError):
        ChargedState(b, [np.nan, 0])
    with pytest.raises(DomainError):
        ChargedState(b, [0, 0]).normalized()
    assert abs(ChargedState(b, [3, 4]).normalized().norm - 1) < 1e-12
