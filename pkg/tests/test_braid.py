from __future__ import annotations

import itertools

import numpy as np
import pytest

from anyonkit.braid import (BraidWord, Unitary, braid_generator, brute_force_distance, compile_gate,
                            evaluate_word, generators, group_closure, measure_pair, phase_distance)
from anyonkit.coherence import gauge_transform, random_gauge
from anyonkit.coherence.symbols import tree_phase
from anyonkit.errors import DomainError
from anyonkit.fusion_space import ChargedState, enumerate_basis

X = np.array([[0, 1], [1, 0]], dtype=complex)


def gens_for(model, leaf, n, charge):
    ring, F, R = model
    basis = enumerate_basis(ring, [leaf] * n, charge)
    return basis, generators(ring, F, R, basis)


def test_sigma1_diagonal(fib):
    ring, F, R = fib
    _, (s1, s2) = gens_for(fib, 'tau', 3, 'tau')
    assert np.allclose(s1.matrix, np.diag([R[(1, 1, 0)], R[(1, 1, 1)]]), atol=1e-14)
    _, _, Fm = F.block(1, 1, 1, 1)
    D = np.diag([R[(1, 1, 0)], R[(1, 1, 1)]])
    assert np.allclose(s2.matrix, Fm @ D @ np.linalg.inv(Fm), atol=1e-12)


def test_two_anyons_scalar(ising):
    ring, F, R = ising
    s, p = ring.index('sigma'), ring.index('psi')
    basis = enumerate_basis(ring, ['sigma', 'sigma'], 'psi')
    (g,) = generators(ring, F, R, basis)
    assert g.matrix.shape == (1, 1)
    assert g.matrix[0, 0] == R[(s, s, p)]


def test_permuted_leaves(ising):
    ring, F, R = ising
    basis = enumerate_basis(ring, ['sigma', 'psi', 'sigma'], 'psi')
    g = braid_generator(ring, F, R, basis, 2)
    assert [ring.name(x) for x in g.codomain.leaves] == ['sigma', 'sigma', 'psi']
    assert g.deviation() < 1e-12
    with pytest.raises(DomainError):
        generators(ring, F, R, basis)


def test_word_basics(fib):
    _, gens = gens_for(fib, 'tau', 3, 'tau')
    assert np.array_equal(evaluate_word(BraidWord.parse('', 3), gens).matrix, np.eye(2))
    U = evaluate_word(BraidWord.parse('s1 s1^-1', 3), gens)
    assert np.max(np.abs(U.matrix - np.eye(2))) < 1e-12
    w = BraidWord.parse('s1 s2^-1 s1', 3)
    assert str(w) == 's1 s2^-1 s1'
    U = evaluate_word(w, gens)
    assert np.allclose(U.matrix, gens[0].matrix @ gens[1].matrix.conj().T @ gens[0].matrix)
    assert np.max(np.abs((U.matrix @ evaluate_word(w.inverse(), gens).matrix) - np.eye(2))) < 1e-12
    with pytest.raises(DomainError):
        BraidWord.parse('s3', 3)
    with pytest.raises(DomainError):
        BraidWord.parse('t1', 3)
    with pytest.raises(DomainError):
        evaluate_word(BraidWord.parse('s1', 4), gens)


@pytest.mark.parametrize('model,leaf', [('fib', 'tau'), ('ising', 'sigma')])
@pytest.mark.parametrize('n', [3, 4, 5, 6])
def test_braid_relations(model, leaf, n, request):
    m = request.getfixturevalue(model)
    ring = m[0]
    for c in ring.labels:
        basis = enumerate_basis(ring, [leaf] * n, c)
        if not len(basis):
            continue
        G = [g.matrix for g in generators(ring, m[1], m[2], basis)]
        for g in G:
            assert np.max(np.abs(g @ g.conj().T - np.eye(len(basis)))) < 1e-9
        for i in range(n - 2):
            assert np.max(np.abs(G[i] @ G[i + 1] @ G[i] - G[i + 1] @ G[i] @ G[i + 1])) < 1e-9
        for i, j in itertools.combinations(range(n - 1), 2):
            if j - i >= 2:
                assert np.max(np.abs(G[i] @ G[j] - G[j] @ G[i])) < 1e-9


def test_closure(fib, ising):
    _, gi = gens_for(ising, 'sigma', 3, 'sigma')
    rep = group_closure(gi)
    assert rep.saturated and rep.elements <= 200
    _, gf = gens_for(fib, 'tau', 3, 'tau')
    rep = group_closure(gf, element_cap=2000)
    assert not rep.saturated and rep.elements > 2000 and rep.max_length <= 20
    assert group_closure([np.eye(2)]).elements == 1
    assert group_closure([np.eye(2)]).saturated


def test_phase_distance():
    U = np.diag([1, 1j])
    assert phase_distance(U, np.exp(0.7j) * U) < 1e-12
    assert abs(phase_distance(np.eye(2), X) - 2) < 1e-12


def test_compile_trivial_targets(fib):
    _, gens = gens_for(fib, 'tau', 3, 'tau')
    r = compile_gate(gens[0].matrix, gens, 4)
    assert str(r.word) == 's1' and r.distance < 1e-12
    r = compile_gate(np.eye(2), gens, 4)
    assert len(r.word) == 0 and r.distance == 0
    with pytest.raises(DomainError):
        compile_gate(np.eye(3), gens, 4)
    with pytest.raises(DomainError):
        compile_gate(np.eye(2), gens, 15)


def test_compile_matches_brute_force(fib):
    _, gens = gens_for(fib, 'tau', 3, 'tau')
    prev = np.inf
    for L in range(0, 7):
        r = compile_gate(X, gens, L)
        oracle = brute_force_distance(X, gens, L)
        assert abs(r.distance - oracle) < 1e-12
        assert r.distance <= prev + 1e-12
        assert len(r.word) <= L
        assert abs(phase_distance(X, evaluate_word(r.word, gens).matrix) - r.distance) < 1e-12
        prev = r.distance


def test_compile_three_dimensional(fib):
    _, gens = gens_for(fib, 'tau', 4, 'tau')
    target = evaluate_word(BraidWord.parse('s3 s1^-1 s2', 4), gens).matrix
    r = compile_gate(target, gens, 4)
    assert r.distance < 1e-12 and len(r.word) <= 3


def test_measure_pair(fib):
    ring, F, R = fib
    basis, gens = gens_for(fib, 'tau', 3, 'tau')
    s0 = ChargedState.basis_state(basis, (0,))
    assert measure_pair(s0) == [(0, 1.0), (1, 0.0)]
    eq = ChargedState(basis, np.ones(2) / np.sqrt(2))
    probs = dict(measure_pair(eq))
    assert abs(probs[0] - 0.5) < 1e-12 and abs(probs[1] - 0.5) < 1e-12
    U = evaluate_word(BraidWord.parse('s1 s1', 3), gens).matrix
    out = ChargedState(basis, U @ s0.amplitudes)
    expected = np.abs(U @ s0.amplitudes) ** 2
    assert np.allclose([p for _, p in measure_pair(out)], expected, atol=1e-12)
    # second pair through an F-move: probabilities are |F[0, f]|^2
    _, _, Fm = F.block(1, 1, 1, 1)
    probs = measure_pair(s0, F, pair=2)
    assert np.allclose([p for _, p in probs], np.abs(Fm[0]) ** 2, atol=1e-12)
    assert abs(sum(p for _, p in probs) - 1) < 1e-10
    with pytest.raises(DomainError):
        measure_pair(ChargedState(basis, [1, 1]))
    with pytest.raises(DomainError):
        measure_pair(s0, None, pair=2)


def test_gauge_covariance(fib, ising):
    for model, leaf, charge in ((fib, 'tau', 'tau'), (ising, 'sigma', '1')):
        ring, F, R = model
        basis, gens = gens_for(model, leaf, 4, charge)
        rng = np.random.default_rng(2)
        phases = random_gauge(ring, rng)
        F2, R2 = gauge_transform(F, R, phases)
        gens2 = generators(ring, F2, R2, basis)
        D = np.diag([tree_phase(t.vertices(), phases) for t in basis.trees])
        for g, g2 in zip(gens, gens2):
            assert np.allclose(g2.matrix, D.conj() @ g.matrix @ D, atol=1e-10)
        assert group_closure(gens, element_cap=500).elements == group_closure(gens2, element_cap=500).elements


def test_unitary_inverse(fib):
    _, gens = gens_for(fib, 'tau', 3, 'tau')
    U = gens[1]
    assert isinstance(U.inverse(), Unitary)
    assert np.allclose(U.inverse().matrix @ U.matrix, np.eye(2))
