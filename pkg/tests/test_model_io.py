from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anyonkit.fusion_ring import FusionRing, fuse, verify_ring
from anyonkit.model_io import (BUNDLED, ModelParseError, bundled_models, bundled_text, load_model, parse_model,
                               serialize_model)


def test_bundled_models():
    docs = bundled_models()
    assert set(docs) == set(BUNDLED)
    for doc in docs.values():
        assert verify_ring(doc.ring) == []
    fib = docs['fibonacci']
    assert fib.ring.size == 2
    nontrivial = [line for line in serialize_model(fib.ring, 'fibonacci').splitlines() if line.startswith('fuse')]
    assert len(nontrivial) == 1
    assert fib.ring.dual('tau') == fib.ring.index('tau')
    ising = docs['ising'].ring
    assert ising.names == ('1', 'sigma', 'psi')
    assert fuse(ising, 'sigma', 'sigma') == {0: 1, 2: 1}
    mr = docs['moore_read'].ring
    assert mr.size == 6
    assert fuse(mr, 'sigma', "sigma'") == {0: 1, mr.index('psi'): 1}


@pytest.mark.parametrize('name', BUNDLED)
def test_bundled_round_trip(name):
    text = bundled_text(name)
    doc = parse_model(text)
    assert serialize_model(doc.ring, doc.name) == text
    assert parse_model(serialize_model(doc.ring, doc.name)).ring == doc.ring


def test_models_directory_matches_package():
    root = Path(__file__).resolve().parents[1] / 'models'
    for name in BUNDLED:
        assert load_model(root / f'{name}.anyon').ring == bundled_models()[name].ring


def test_ising_serialization_lines():
    text = serialize_model(bundled_models()['ising'].ring, 'ising')
    fuse_lines = [line for line in text.splitlines() if line.startswith('fuse')]
    assert fuse_lines == ['fuse sigma sigma -> 1 psi', 'fuse sigma psi -> sigma', 'fuse psi psi -> 1']


def test_unknown_label_reports_line():
    text = 'model bad\nlabels 1 tau\n\nfuse tau tau -> one tau\n'
    with pytest.raises(ModelParseError) as exc:
        parse_model(text)
    (issue,) = exc.value.issues
    assert issue.line == 4 and issue.column == 17
    assert 'one' in issue.message


def test_collects_all_issues():
    text = '\n'.join([
        'model bad',
        'labels 1 a b',
        'dual a zz',
        'fuse a a -> 1 b*0',
        'fuse a b -> a*x',
        'fuse b b -> 1',
        'fuse b b -> a',
        'frobnicate',
    ])
    with pytest.raises(ModelParseError) as exc:
        parse_model(text, source='bad.anyon')
    lines = sorted(i.line for i in exc.value.issues)
    assert lines == [3, 4, 5, 7, 8]
    assert all(i.column >= 1 for i in exc.value.issues)
    assert 'bad.anyon:' in str(exc.value)


def test_missing_labels():
    with pytest.raises(ModelParseError):
        parse_model('model x\nfuse a a -> 1\n')


def test_mirroring_and_comments():
    text = '# Z3\nmodel z3\nlabels 0 g h   # unit first\ndual g h\nfuse g g -> h\nfuse g h -> 0\nfuse h h -> g\n'
    doc = parse_model(text)
    assert doc.mirrored == ((2, 1),)
    assert verify_ring(doc.ring) == []
    assert fuse(doc.ring, 'h', 'g') == {0: 1}
    assert doc.locations['labels'] == 3


def test_non_commutative_declaration():
    # declaring both orders keeps them independent
    text = 'model nc\nlabels 1 a b\nfuse a b -> a\nfuse b a -> b\nfuse a a -> 1\nfuse b b -> 1\n'
    ring = parse_model(text).ring
    assert not ring.is_commutative
    assert parse_model(serialize_model(ring, 'nc')).ring == ring


def test_multiplicities_round_trip():
    text = 'model m\nlabels 1 x\nfuse x x -> 1 x*2\n'
    ring = parse_model(text).ring
    assert ring.N[1, 1, 1] == 2
    assert serialize_model(ring, 'm') == text


@st.composite
def abelian_rings(draw):
    """Group rings of products of cyclic groups, with shuffled labels."""
    orders = draw(st.lists(st.integers(1, 4), min_size=1, max_size=2))
    elems = [()]
    for n in orders:
        elems = [e + (k,) for e in elems for k in range(n)]
    perm = [0] + draw(st.permutations(list(range(1, len(elems)))))
    elems = [elems[p] for p in perm]
    pos = {e: i for i, e in enumerate(elems)}
    L = len(elems)
    N = np.zeros((L, L, L), dtype=int)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            N[i, j, pos[tuple((x + y) % n for x, y, n in zip(a, b, orders))]] = 1
    dual = [pos[tuple((-x) % n for x, n in zip(e, orders))] for e in elems]
    names = ['1'] + [f'g{i}' for i in range(1, L)]
    return FusionRing(names, dual, N)


@st.composite
def random_rings(draw):
    """Arbitrary well-formed (not necessarily valid) rings, multiplicities up to 3."""
    L = draw(st.integers(1, 4))
    N = np.zeros((L, L, L), dtype=int)
    for x in range(L):
        N[0, x, x] = N[x, 0, x] = 1
    for a in range(1, L):
        for b in range(1, L):
            N[a, b] = draw(st.lists(st.integers(0, 3), min_size=L, max_size=L))
    dual = list(range(L))
    names = ['1'] + [f'x{i}' for i in range(1, L)]
    return FusionRing(names, dual, N)


@settings(max_examples=60, deadline=None)
@given(abelian_rings())
def test_round_trip_random_valid_rings(ring):
    assert verify_ring(ring) == []
    text = serialize_model(ring, 'random')
    back = parse_model(text)
    assert np.array_equal(back.ring.N, ring.N)
    assert back.ring == ring
    assert serialize_model(back.ring, 'random') == text


@settings(max_examples=100, deadline=None)
@given(random_rings())
def test_round_trip_random_rings(ring):
    back = parse_model(serialize_model(ring, 'r')).ring
    assert np.array_equal(back.N, ring.N)
