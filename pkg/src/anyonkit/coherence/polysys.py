"""Sparse complex polynomial systems and a damped Gauss-Newton solver.

A system is a list of equations ``sum_t coef_t * prod_j v_j = 0`` whose
factors ``v_j`` are unknowns ``z_k`` or their conjugates.  Conjugates make the
system non-holomorphic, so it is solved over the real and imaginary parts.
Terms are stored in padded arrays (degree <= ``MAX_DEG``) so residuals and
Jacobians are evaluated without Python loops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEG = 3


class PolynomialSystem:
    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self._eqs: list[list[tuple[complex, tuple[tuple[int, bool], ...]]]] = []
        self._built = False

    def add_equation(self, terms) -> None:
        """``terms``: iterable of ``(coef, factors)``, factors a sequence of ``(var, conj)``.

        Terms without factors are constants.  Zero terms are dropped; an
        equation with no remaining terms is skipped.
        """
        clean = []
        for coef, factors in terms:
            coef = complex(coef)
            if coef == 0:
                continue
            factors = tuple((int(k), bool(cj)) for k, cj in factors)
            if len(factors) > MAX_DEG:
                raise ValueError(f'term degree {len(factors)} exceeds {MAX_DEG}')
            clean.append((coef, factors))
        if clean:
            self._eqs.append(clean)
            self._built = False

    @property
    def n_eqs(self) -> int:
        return len(self._eqs)

    def _build(self) -> None:
        eq, coef, var, conj = [], [], [], []
        for i, terms in enumerate(self._eqs):
            for c, factors in terms:
                eq.append(i)
                coef.append(c)
                vs = [k for k, _ in factors] + [-1] * (MAX_DEG - len(factors))
                cs = [cj for _, cj in factors] + [False] * (MAX_DEG - len(factors))
                var.append(vs)
                conj.append(cs)
        self._eq = np.array(eq, dtype=np.int64)
        self._coef = np.array(coef, dtype=complex)
        self._var = np.array(var, dtype=np.int64).reshape(-1, MAX_DEG)
        self._conj = np.array(conj, dtype=bool).reshape(-1, MAX_DEG)
        self._built = True

    def _factors(self, z: np.ndarray) -> np.ndarray:
        ext = np.append(z, 1.0 + 0j)  # index -1 -> constant 1
        vals = ext[self._var]
        return np.where(self._conj, vals.conj(), vals)

    def residual(self, z: np.ndarray) -> np.ndarray:
        if not self._built:
            self._build()
        terms = self._coef * self._factors(z).prod(axis=1)
        return np.bincount(self._eq, weights=terms.real, minlength=self.n_eqs) + \
            1j * np.bincount(self._eq, weights=terms.imag, minlength=self.n_eqs)

    def jacobians(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Wirtinger derivatives ``(d r / d z, d r / d conj(z))``."""
        if not self._built:
            self._build()
        fac = self._factors(z)
        Jz = np.zeros((self.n_eqs, self.n_vars), dtype=complex)
        Jc = np.zeros((self.n_eqs, self.n_vars), dtype=complex)
        for j in range(MAX_DEG):
            others = np.delete(fac, j, axis=1).prod(axis=1) * self._coef
            k = self._var[:, j]
            live = k >= 0
            cj = self._conj[:, j]
            sel = live & ~cj
            np.add.at(Jz, (self._eq[sel], k[sel]), others[sel])
            sel = live & cj
            np.add.at(Jc, (self._eq[sel], k[sel]), others[sel])
        return Jz, Jc

    def real_residual(self, z: np.ndarray) -> np.ndarray:
        r = self.residual(z)
        return np.concatenate([r.real, r.imag])

    def real_jacobian(self, z: np.ndarray) -> np.ndarray:
        """Jacobian of ``[Re r, Im r]`` with respect to ``[Re z, Im z]``."""
        Jz, Jc = self.jacobians(z)
        dx = Jz + Jc
        dy = 1j * (Jz - Jc)
        return np.block([[dx.real, dy.real], [dx.imag, dy.imag]])


@dataclass
class LMResult:
    z: np.ndarray
    residual: float  # max |r_i|
    iterations: int
    converged: bool


def levenberg_marquardt(system: PolynomialSystem, z0: np.ndarray, *, tol: float = 1e-12,
                        max_iter: int = 200) -> LMResult:
    """Minimize ``||r(z)||^2`` from ``z0`` with Marquardt-damped Gauss-Newton steps.

    Stops when ``max |r_i| < tol``.  Near a regular solution the damping
    vanishes and the iteration is plain Gauss-Newton (quadratic convergence).
    """
    n = system.n_vars
    z = np.asarray(z0, dtype=complex).copy()
    r = system.real_residual(z)
    cost = float(r @ r)
    lam = 1e-3
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r), initial=0.0) < tol:
            return LMResult(z, float(np.max(np.abs(r), initial=0.0)), it - 1, True)
        J = system.real_jacobian(z)
        g = J.T @ r
        A = J.T @ J
        diag = np.diag(A).copy()
        diag[diag < 1e-12] = 1e-12
        improved = False
        for _ in range(30):
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            z_new = z + step[:n] + 1j * step[n:]
            r_new = system.real_residual(z_new)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                z, r, cost = z_new, r_new, cost_new
                lam = max(lam / 10, 1e-15)
                improved = True
                break
            lam *= 10
        if not improved:
            break
    res = float(np.max(np.abs(r), initial=0.0))
    return LMResult(z, res, it, res < tol)
