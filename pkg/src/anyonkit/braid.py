"""Braid-group representations on fusion-tree bases.

Generator ``s_i`` exchanges leaves ``i`` and ``i+1`` (1-based).  On a
left-associated basis ``s_1`` is diagonal: leaves 1 and 2 already fuse first,
so a tree with first internal charge ``k1`` just picks up ``R[l1, l2, k1]``.
For ``i > 1`` the two strands are first brought into a common vertex with an
F-move, exchanged there, and moved back.  Worked 3-strand example with
``F = F^{tau tau tau}_tau`` (rows: left internal, columns: right internal)::

    s_2 |e>  =  sum_f F[e, f] R[tau, tau, f] |f>_R
             =  sum_{f, e'} F[e, f] R[tau, tau, f] Finv[f, e'] |e'>

so the matrix of ``s_2`` is ``(F diag(R) F^-1)^T``, which equals
``F diag(R) F^-1`` whenever F is real symmetric (as for Fibonacci in the
canonical gauge).

Matrices act on column vectors of amplitudes; a word ``s_a s_b ...``
evaluates to the ordered product ``G_a @ G_b @ ...``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coherence.symbols import FSymbols, RSymbols
from .errors import DomainError, IncompleteTableError
from .fusion_ring import FusionRing
from .fusion_space import ChargedState, FusionBasis, enumerate_basis

UNITARY_TOL = 1e-9

_TOKEN = re.compile(r'^s(\d+)(\^-1)?$')


@dataclass(frozen=True)
class BraidWord:
    """Sequence of generators ``(i, +1)`` / ``(i, -1)`` on ``n`` strands."""

    letters: tuple[tuple[int, int], ...]
    n: int

    def __post_init__(self):
        for i, e in self.letters:
            if not 1 <= i <= self.n - 1:
                raise DomainError(f'generator s{i} out of range for {self.n} strands')
            if e not in (1, -1):
                raise DomainError(f'exponent must be +1 or -1, got {e}')

    @classmethod
    def parse(cls, text: str, n: int) -> 'BraidWord':
        """Parse whitespace-separated tokens ``s<k>`` and ``s<k>^-1``."""
        letters = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise DomainError(f'bad braid token {tok!r}; expected s<k> or s<k>^-1')
            letters.append((int(m.group(1)), -1 if m.group(2) else 1))
        return cls(tuple(letters), n)

    def inverse(self) -> 'BraidWord':
        return BraidWord(tuple((i, -e) for i, e in reversed(self.letters)), self.n)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ' '.join(f's{i}' if e == 1 else f's{i}^-1' for i, e in self.letters)


@dataclass(frozen=True)
class Unitary:
    """Dense matrix from ``basis`` to ``target`` (the same basis unless leaves were permuted)."""

    matrix: np.ndarray
    basis: FusionBasis
    target: FusionBasis | None = None

    @property
    def codomain(self) -> FusionBasis:
        return self.basis if self.target is None else self.target

    def deviation(self) -> float:
        M = self.matrix
        return float(np.max(np.abs(M @ M.conj().T - np.eye(M.shape[0])), initial=0.0))

    def inverse(self) -> 'Unitary':
        return Unitary(self.matrix.conj().T, self.codomain, self.basis if self.target is not None else None)


@dataclass(frozen=True)
class GroupClosureReport:
    elements: int
    saturated: bool
    max_length: int


@dataclass(frozen=True)
class CompileResult:
    word: BraidWord
    distance: float
    search_size: int


def _block_cache(F: FSymbols):
    cache = {}

    def get(a, b, c, d):
        key = (a, b, c, d)
        if key not in cache:
            ls, rs, M = F.block(a, b, c, d)
            cache[key] = (ls, rs, M, np.linalg.inv(M))
        return cache[key]

    return get


def braid_generator(ring: FusionRing, F: FSymbols, R: RSymbols, basis: FusionBasis, i: int) -> Unitary:
    """Matrix of ``s_i`` on ``basis`` (leaves ``i`` and ``i+1`` exchanged)."""
    n = len(basis.leaves)
    if not 1 <= i <= n - 1:
        raise DomainError(f'generator index {i} out of range 1..{n - 1}')
    if basis.ring != ring:
        raise DomainError('basis belongs to a different ring')
    leaves = list(basis.leaves)
    swapped = leaves.copy()
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    target = basis if swapped == leaves else enumerate_basis(ring, swapped, basis.charge)
    pos = {t.internals: k for k, t in enumerate(target.trees)}
    M = np.zeros((len(target), len(basis)), dtype=complex)
    blocks = _block_cache(F)

    def r(a, b, c):
        v = R.get((a, b, c))
        if v is None:
            raise IncompleteTableError([(a, b, c)], 'R')
        return v

    for col, tree in enumerate(basis.trees):
        ch = list(tree.chain())
        b, c = leaves[i - 1], leaves[i]
        if i == 1:
            M[pos[tree.internals], col] = r(b, c, ch[1])
            continue
        a, e, d = ch[i - 2], ch[i - 1], ch[i]
        ls, rs, Fm, _ = blocks(a, b, c, d)
        ls2, rs2, _, Finv2 = blocks(a, c, b, d)
        row_e = ls.index(e)
        for jf, f in enumerate(rs):
            amp = Fm[row_e, jf] * r(b, c, f)
            if amp == 0:
                continue
            jf2 = rs2.index(f)
            for je2, e2 in enumerate(ls2):
                new = ch.copy()
                new[i - 1] = e2
                internals = tuple(new[1:-1])
                M[pos[internals], col] += amp * Finv2[jf2, je2]
    U = Unitary(M, basis, None if target is basis else target)
    dev = U.deviation()
    if dev > UNITARY_TOL:
        raise DomainError(f's{i} is not unitary (deviation {dev:.3e}); are F and R solved?')
    return U


def generators(ring: FusionRing, F: FSymbols, R: RSymbols, basis: FusionBasis) -> list[Unitary]:
    """``[s_1, ..., s_{n-1}]``; requires all leaves to be the same anyon type."""
    if len(set(basis.leaves)) > 1:
        raise DomainError('a shared generator basis needs identical leaves')
    return [braid_generator(ring, F, R, basis, i) for i in range(1, len(basis.leaves))]


def evaluate_word(word: BraidWord, gens: Sequence[Unitary]) -> Unitary:
    """Ordered product of generator matrices; the empty word gives the identity."""
    if len(gens) != word.n - 1:
        raise DomainError(f'word on {word.n} strands needs {word.n - 1} generators, got {len(gens)}')
    basis = gens[0].basis if gens else None
    if any(g.basis is not basis and g.basis != basis for g in gens) or any(g.target is not None for g in gens):
        raise DomainError('generators must share one basis')
    dimension = gens[0].matrix.shape[0] if gens else 1
    M = np.eye(dimension, dtype=complex)
    inverses = {}
    for i, e in word.letters:
        if e == 1:
            M = M @ gens[i - 1].matrix
        else:
            if i not in inverses:
                inverses[i] = gens[i - 1].matrix.conj().T
            M = M @ inverses[i]
    return Unitary(M, basis)


def phase_distance(U: np.ndarray, V: np.ndarray) -> float:
    """``min over phi of ||U - exp(i phi) V||_F``."""
    t = np.vdot(V, U)  # tr(V^dagger U)
    phase = t / abs(t) if abs(t) > 0 else 1.0
    return float(np.linalg.norm(U - phase * V))


def _letters(n_gens: int) -> list[tuple[int, int]]:
    return [(i, e) for i in range(1, n_gens + 1) for e in (1, -1)]


def group_closure(gens: Sequence[Unitary] | Sequence[np.ndarray], dedup_tol: float = 1e-8,
                  element_cap: int = 2000, max_length: int | None = None,
                  include_inverses: bool = True) -> GroupClosureReport:
    """Breadth-first closure of the generated group modulo global phase.

    Stops when a word length adds nothing new (``saturated``), when more than
    ``element_cap`` elements are known, or after ``max_length`` levels.
    """
    mats = [np.asarray(g.matrix if isinstance(g, Unitary) else g, dtype=complex) for g in gens]
    if not mats:
        return GroupClosureReport(1, True, 0)
    if include_inverses:
        mats = [m for g in mats for m in (g, g.conj().T)]
    d = mats[0].shape[0]
    if d == 0:
        return GroupClosureReport(1, True, 0)
    store = np.empty((64, d, d), dtype=complex)
    store[0] = np.eye(d)
    count = 1

    def known(V: np.ndarray) -> bool:
        overlaps = np.einsum('kij,ij->k', store[:count].conj(), V)
        for k in np.flatnonzero(np.abs(overlaps) > d - 1e-6):
            ph = overlaps[k] / abs(overlaps[k])
            if np.max(np.abs(V - ph * store[k])) < dedup_tol:
                return True
        return False

    frontier = [np.eye(d, dtype=complex)]
    length = 0
    while frontier and count <= element_cap and (max_length is None or length < max_length):
        length += 1
        new = []
        for U in frontier:
            for G in mats:
                V = U @ G
                if known(V):
                    continue
                if count == len(store):
                    store = np.concatenate([store, np.empty_like(store)])
                store[count] = V
                count += 1
                new.append(V)
                if count > element_cap:
                    break
            if count > element_cap:
                break
        frontier = new
    return GroupClosureReport(count, not frontier, length)


def _reduced_words(mats: list[np.ndarray], letters: list[tuple[int, int]], max_len: int):
    """All freely reduced words up to ``max_len`` with their matrices, shortest first."""
    d = mats[0].shape[0]
    words = [()]
    out_m = [np.eye(d, dtype=complex)]
    level = [((), np.eye(d, dtype=complex))]
    for _ in range(max_len):
        nxt = []
        for w, M in level:
            for k, (i, e) in enumerate(letters):
                if w and letters[w[-1]] == (i, -e):
                    continue
                nxt.append((w + (k,), M @ mats[k]))
        level = nxt
        words.extend(w for w, _ in level)
        out_m.extend(M for _, M in level)
    return words, np.array(out_m)


def compile_gate(target, gens: Sequence[Unitary], max_word_length: int) -> CompileResult:
    """Exact search for the word of length <= ``max_word_length`` closest to ``target`` up to phase.

    Meet in the middle: every word is a prefix of length <= ceil(L/2) times a
    suffix of length <= floor(L/2), and ``|tr(T^dagger P S)|`` is maximized
    over all such pairs with one matrix product.  Ties are broken by word
    length, then by generator order (s1, s1^-1, s2, s2^-1, ...).
    """
    if not gens:
        raise DomainError('need at least one generator')
    if not 0 <= max_word_length <= 14:
        raise DomainError('max_word_length must be in 0..14')
    T = np.asarray(target.matrix if isinstance(target, Unitary) else target, dtype=complex)
    d = gens[0].matrix.shape[0]
    if T.shape != (d, d):
        raise DomainError(f'target has shape {T.shape}, generators act on dimension {d}')
    n = len(gens) + 1
    letters = _letters(len(gens))
    mats = []
    for i, e in letters:
        G = gens[i - 1].matrix
        mats.append(G if e == 1 else G.conj().T)

    h = (max_word_length + 1) // 2
    pw, pm = _reduced_words(mats, letters, h)
    sw, sm = _reduced_words(mats, letters, max_word_length - h)
    X = np.einsum('ji,kjl->kil', T.conj(), pm).reshape(len(pw), d * d)  # T^dagger P
    Y = sm.transpose(0, 2, 1).reshape(len(sw), d * d)                    # S^T
    chunk = max(1, 2_000_000 // max(len(sw), 1))
    best = -1.0
    for start in range(0, len(pw), chunk):
        best = max(best, float(np.abs(X[start:start + chunk] @ Y.T).max()))
    plen = np.array([len(w) for w in pw])
    slen = np.array([len(w) for w in sw])
    cand_p, cand_s = [], []
    for start in range(0, len(pw), chunk):
        s = np.abs(X[start:start + chunk] @ Y.T)
        pi, si = np.nonzero(s >= best - 1e-7)
        cand_p.append(pi + start)
        cand_s.append(si)
    cand_p = np.concatenate(cand_p)
    cand_s = np.concatenate(cand_s)
    dists = np.empty(len(cand_p))
    for start in range(0, len(cand_p), 100_000):
        sl = slice(start, start + 100_000)
        W = pm[cand_p[sl]] @ sm[cand_s[sl]]
        tr = np.einsum('ij,kij->k', T.conj(), W)
        ph = np.exp(1j * np.angle(tr))
        dists[sl] = np.linalg.norm((T[None] - ph[:, None, None] * W).reshape(len(W), -1), axis=1)
    ok = dists <= dists.min() + 1e-12
    lens = plen[cand_p] + slen[cand_s]
    ok &= lens == lens[ok].min()
    word = min(pw[p] + sw[q] for p, q in zip(cand_p[ok], cand_s[ok]))
    # report the distance of the chosen word evaluated left to right, as evaluate_word would
    W = np.eye(d, dtype=complex)
    for k in word:
        W = W @ mats[k]
    k_letters = len(letters)
    size = sum(k_letters ** m for m in range(max_word_length + 1))
    return CompileResult(BraidWord(tuple(letters[k] for k in word), n), phase_distance(T, W), size)


def brute_force_distance(target, gens: Sequence[Unitary], max_word_length: int) -> float:
    """Reference minimum over every signed word (no reduction, no splitting); exponential cost."""
    T = np.asarray(target, dtype=complex)
    mats = []
    for G in gens:
        mats.extend([G.matrix, G.matrix.conj().T])
    best = phase_distance(T, np.eye(T.shape[0]))
    for L in range(1, max_word_length + 1):
        for word in itertools.product(range(len(mats)), repeat=L):
            W = mats[word[0]]
            for k in word[1:]:
                W = W @ mats[k]
            best = min(best, phase_distance(T, W))
    return best


def measure_pair(state: ChargedState, F: FSymbols | None = None, pair: int = 1) -> list[tuple[int, float]]:
    """Born-rule probabilities of the fusion channel of leaves ``pair`` and ``pair + 1``.

    For ``pair = 1`` this is the first internal label of the left-associated
    tree and needs no F-symbols; other pairs are first F-moved into a common
    vertex.  Returns ``(channel, probability)`` for every channel allowed by
    the two leaf types, in label order.
    """
    if abs(state.norm - 1.0) > 1e-6:
        raise DomainError(f'state is not normalized (norm {state.norm:.6g})')
    basis = state.basis
    ring = basis.ring
    n = len(basis.leaves)
    if not 1 <= pair <= n - 1:
        raise DomainError(f'pair index {pair} out of range 1..{n - 1}')
    b, c = basis.leaves[pair - 1], basis.leaves[pair]
    probs = {k: 0.0 for k in ring.outcomes(b, c)}
    if pair == 1:
        for tree, amp in zip(basis.trees, state.amplitudes):
            probs[tree.chain()[1]] += abs(amp) ** 2
    else:
        if F is None:
            raise DomainError('measuring a pair other than the first needs F-symbols')
        blocks = _block_cache(F)
        moved: dict[tuple, complex] = {}
        for tree, amp in zip(basis.trees, state.amplitudes):
            ch = tree.chain()
            a, e, d = ch[pair - 2], ch[pair - 1], ch[pair]
            ls, rs, Fm, _ = blocks(a, b, c, d)
            for jf, f in enumerate(rs):
                key = ch[:pair - 1] + (f,) + ch[pair:]
                moved[key] = moved.get(key, 0j) + Fm[ls.index(e), jf] * amp
        for key, amp in moved.items():
            probs[key[pair - 1]] += abs(amp) ** 2
    return sorted(probs.items())
