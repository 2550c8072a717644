"""Pentagon and hexagon residuals, evaluated as compositions of linear maps.

Each coherence diagram is checked literally: for every choice of outer labels
the vertex spaces get explicit bases (tuples of internal labels), every arrow
becomes a matrix between those bases, and the two paths around the diagram
are multiplied out and compared.  This is deliberately a different code path
from the flattened scalar equations used by the solver.

A basis change ``|e>_L = sum_f F[e, f] |f>_R`` acts on coordinate vectors by
the transpose, so an arrow matrix has entries ``M[target, source] = F[source, target]``.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, IncompleteTableError
from ..fusion_ring import FusionRing
from .symbols import FSymbols, RSymbols, f_blocks


def _f(F: FSymbols, key, missing: list) -> complex:
    v = F.data.get(key)
    if v is None:
        missing.append(key)
        return 0j
    return v


def _arrow(src: list[tuple], dst: list[tuple], entry) -> np.ndarray:
    M = np.zeros((len(dst), len(src)), dtype=complex)
    for j, s in enumerate(src):
        for i, t in enumerate(dst):
            M[i, j] = entry(s, t)
    return M


def pentagon_residual(ring: FusionRing, F: FSymbols) -> float:
    """Largest entrywise mismatch between the two paths of the pentagon.

    Vertices for outer labels ``x, y, z, w -> u``::

        1: ((x y)_p z)_q w     2: (x y)_p (z w)_t    3: x (y (z w)_t)_s
        4: (x (y z)_r)_q w     5: x ((y z)_r w)_s

    and the pentagon reads ``F^{xyt}_u F^{pzw}_u = F^{yzw}_s F^{xrw}_u F^{xyz}_q``.
    """
    missing: list = []
    worst = 0.0
    L = ring.size
    out = ring.outcomes
    for x in range(L):
        for y in range(L):
            for z in range(L):
                for w in range(L):
                    for u in range(L):
                        V1 = [(p, q) for p in out(x, y) for q in out(p, z) if ring.N[q, w, u]]
                        if not V1:
                            continue
                        V2 = [(p, t) for p in out(x, y) for t in out(z, w) if ring.N[p, t, u]]
                        V3 = [(s, t) for t in out(z, w) for s in out(y, t) if ring.N[x, s, u]]
                        V4 = [(q, r) for r in out(y, z) for q in out(x, r) if ring.N[q, w, u]]
                        V5 = [(r, s) for r in out(y, z) for s in out(r, w) if ring.N[x, s, u]]
                        M12 = _arrow(V1, V2, lambda S, T: _f(F, (S[0], z, w, u, S[1], T[1]), missing)
                                     if S[0] == T[0] else 0)
                        M23 = _arrow(V2, V3, lambda S, T: _f(F, (x, y, S[1], u, S[0], T[0]), missing)
                                     if S[1] == T[1] else 0)
                        M14 = _arrow(V1, V4, lambda S, T: _f(F, (x, y, z, S[1], S[0], T[1]), missing)
                                     if S[1] == T[0] else 0)
                        M45 = _arrow(V4, V5, lambda S, T: _f(F, (x, S[1], w, u, S[0], T[1]), missing)
                                     if S[1] == T[0] else 0)
                        M53 = _arrow(V5, V3, lambda S, T: _f(F, (y, z, w, S[1], S[0], T[1]), missing)
                                     if S[1] == T[0] else 0)
                        top = M23 @ M12
                        bottom = M53 @ M45 @ M14
                        if top.size:
                            worst = max(worst, float(np.max(np.abs(top - bottom))))
    if missing:
        raise IncompleteTableError(sorted(set(missing)), 'F')
    return worst


def hexagon_residual(ring: FusionRing, F: FSymbols, R: RSymbols, inverse_variant: bool = False) -> float:
    """Largest entrywise mismatch between the two paths of a hexagon.

    Vertices for outer labels ``x, y, z -> u``::

        1: (x y)_p z    2: (y x)_p z    3: y (x z)_q
        4: y (z x)_q    5: x (y z)_r    6: (y z)_r x

    Top path ``1 -> 2 -> 3 -> 4`` uses ``R^{xy}_p``, ``F^{yxz}_u``, ``R^{xz}_q``;
    bottom path ``1 -> 5 -> 6 -> 4`` uses ``F^{xyz}_u``, ``R^{xr}_u`` (with the
    swap of tensor factors), ``F^{yzx}_u``.  With ``inverse_variant`` the
    exchanges are replaced by the inverses ``(R^{yx}_p)^-1``, ``(R^{zx}_q)^-1``
    and ``(R^{rx}_u)^-1``.
    """
    if not ring.is_commutative:
        raise DomainError('braiding requires a commutative fusion ring')
    missing: list = []
    worst = 0.0
    L = ring.size
    out = ring.outcomes

    def r(a, b, c):
        v = R.data.get((a, b, c))
        if v is None:
            missing.append(('R', a, b, c))
            return 1.0
        return v

    def exch(a, b, c):
        # the exchange a b -> b a in channel c, or its inverse variant
        return 1.0 / r(b, a, c) if inverse_variant else r(a, b, c)

    for x in range(L):
        for y in range(L):
            for z in range(L):
                for u in range(L):
                    V1 = [(p,) for p in out(x, y) if ring.N[p, z, u]]
                    if not V1:
                        continue
                    V2 = [(p,) for p in out(y, x) if ring.N[p, z, u]]
                    V3 = [(q,) for q in out(x, z) if ring.N[y, q, u]]
                    V4 = [(q,) for q in out(z, x) if ring.N[y, q, u]]
                    V5 = [(r_,) for r_ in out(y, z) if ring.N[x, r_, u]]
                    V6 = [(r_,) for r_ in out(y, z) if ring.N[r_, x, u]]
                    M12 = _arrow(V1, V2, lambda S, T: exch(x, y, S[0]) if S == T else 0)
                    M23 = _arrow(V2, V3, lambda S, T: _f(F, (y, x, z, u, S[0], T[0]), missing))
                    M34 = _arrow(V3, V4, lambda S, T: exch(x, z, S[0]) if S == T else 0)
                    M15 = _arrow(V1, V5, lambda S, T: _f(F, (x, y, z, u, S[0], T[0]), missing))
                    M56 = _arrow(V5, V6, lambda S, T: exch(x, S[0], u) if S == T else 0)
                    M64 = _arrow(V6, V4, lambda S, T: _f(F, (y, z, x, u, S[0], T[0]), missing))
                    top = M34 @ M23 @ M12
                    bottom = M64 @ M56 @ M15
                    if top.size:
                        worst = max(worst, float(np.max(np.abs(top - bottom))))
    if missing:
        f_missing = sorted({m for m in missing if m[0] != 'R'})
        r_missing = sorted({m[1:] for m in missing if m[0] == 'R'})
        if f_missing:
            raise IncompleteTableError(f_missing, 'F')
        raise IncompleteTableError(r_missing, 'R')
    return worst


def unitarity_deviation(F: FSymbols) -> float:
    """``max over blocks of ||F F^dagger - I||_max``."""
    worst = 0.0
    for a, b, c, d, ls, rs in f_blocks(F.ring):
        _, _, M = F.block(a, b, c, d)
        if M.shape[0] != M.shape[1]:
            return float('inf')
        worst = max(worst, float(np.max(np.abs(M @ M.conj().T - np.eye(M.shape[0])))))
    return worst


def r_modulus_deviation(R: RSymbols) -> float:
    R.require_complete()
    if not R.data:
        return 0.0
    return float(max(abs(abs(v) - 1.0) for v in R.data.values()))
