from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from anyonkit.errors import DomainError
from anyonkit.fusion_ring import FusionRing, fuse, fuse_word, quantum_dimensions, verify_ring
from anyonkit.model_io import BUNDLED, bundled_ring

PHI = (1 + math.sqrt(5)) / 2


def test_fuse_examples():
    fib = bundled_ring('fibonacci')
    assert fuse(fib, 'tau', 'tau') == {0: 1, 1: 1}
    mr = bundled_ring('moore_read')
    s = mr.index('sigma')
    assert fuse(mr, s, s) == {mr.index('alpha'): 1, mr.index("alpha'"): 1}
    for name in BUNDLED:
        ring = bundled_ring(name)
        for x in ring.labels:
            assert fuse(ring, ring.unit, x) == {x: 1}
            assert fuse(ring, x, ring.unit) == {x: 1}
    with pytest.raises(DomainError):
        fuse(fib, 'tau', 'bogus')
    with pytest.raises(DomainError):
        fuse(fib, 0, 5)


def test_fuse_word():
    ising = bundled_ring('ising')
    assert fuse_word(ising, ['sigma'] * 3) == {ising.index('sigma'): 2}
    mr = bundled_ring('moore_read')
    assert fuse_word(mr, ['sigma'] * 3) == {mr.index("sigma'"): 2}
    assert fuse_word(mr, ['psi']) == {mr.index('psi'): 1}
    with pytest.raises(DomainError):
        fuse_word(mr, [])


@pytest.mark.parametrize('name', BUNDLED)
def test_fuse_word_reassociation(name):
    ring = bundled_ring(name)
    for n in range(1, 5):
        for word in itertools.product(ring.labels, repeat=n):
            assert fuse_word(ring, word) == fuse_word(ring, word, right_associated=True)


@pytest.mark.parametrize('name', BUNDLED)
def test_bundled_verify_and_commutative(name):
    ring = bundled_ring(name)
    assert verify_ring(ring) == []
    assert ring.is_commutative
    assert ring.is_multiplicity_free
    N = ring.N
    assert np.array_equal(np.einsum('ijp,pkl->ijkl', N, N), np.einsum('jkq,iql->ijkl', N, N))


def test_duality_violation():
    # dual(tau) = tau but tau x tau lacks the unit
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 1] = 1
    ring = FusionRing(['1', 'tau'], [0, 1], N)
    report = verify_ring(ring)
    assert any(v.axiom == 'duality' and v.labels == ('tau', 'tau') for v in report)
    with pytest.raises(DomainError):
        quantum_dimensions(ring)


def test_associativity_violation():
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 0] = 1
    N[1, 1, 1] = 1
    ring = FusionRing(['1', 'x'], [0, 1], N)
    assert verify_ring(ring) == []  # Fibonacci under another name
    N2 = np.zeros((3, 3, 3), dtype=int)
    for x in range(3):
        N2[0, x, x] = N2[x, 0, x] = 1
    N2[1, 1, 0] = N2[2, 2, 0] = 1
    N2[1, 2, 1] = N2[2, 1, 1] = 1  # a x b -> a breaks associativity
    report = verify_ring(FusionRing(['1', 'a', 'b'], [0, 1, 2], N2))
    assert {v.axiom for v in report} >= {'associativity'}


def test_unit_and_empty_violations():
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = 1
    N[0, 1, 1] = 1
    ring = FusionRing(['1', 'x'], [0, 1], N)
    axioms = {v.axiom for v in verify_ring(ring)}
    assert 'unit' in axioms and 'nonempty' in axioms and 'duality' in axioms


def test_moore_read_z4_subring():
    mr = bundled_ring('moore_read')
    sub = mr.subring(['1', 'alpha', 'psi', "alpha'"])
    assert verify_ring(sub) == []
    # identification 1 -> 0, alpha -> 1, psi -> 2, alpha' -> 3
    z4 = {'1': 0, 'alpha': 1, 'psi': 2, "alpha'": 3}
    inv = {v: k for k, v in z4.items()}
    for a in sub.labels:
        for b in sub.labels:
            expected = z4[inv[(z4[sub.name(a)] + z4[sub.name(b)]) % 4]]
            out = fuse(sub, a, b)
            assert len(out) == 1
            (c, m), = out.items()
            assert m == 1 and z4[sub.name(c)] == expected


def test_quantum_dimensions():
    d = quantum_dimensions(bundled_ring('fibonacci'))
    assert d[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(d[1] - PHI) < 1e-10
    ising = bundled_ring('ising')
    d = quantum_dimensions(ising)
    assert abs(d[ising.index('sigma')] - math.sqrt(2)) < 1e-10
    for name in BUNDLED:
        ring = bundled_ring(name)
        d = quantum_dimensions(ring)
        assert all(v >= 1 - 1e-12 for v in d.values())
        for a in ring.labels:
            for b in ring.labels:
                total = sum(m * d[c] for c, m in fuse(ring, a, b).items())
                assert abs(total - d[a] * d[b]) < 1e-9


def test_ring_is_immutable():
    ring = bundled_ring('fibonacci')
    with pytest.raises(ValueError):
        ring.N[1, 1, 1] = 5
