"""One-sided (Hestenes) Jacobi SVD for small complex matrices.

Columns are orthogonalised pairwise by complex plane rotations until every
normalised off-diagonal Gram entry falls below ``tol``.  Accurate to high
relative precision for the unfoldings used here (at most 32 x 32).
"""
from __future__ import annotations

import numpy as np

JACOBI_TOL = 1e-14
MAX_SWEEPS = 80


# squared column norm (relative to a unit-norm input) below which a column is numerical zero
_NEGLIGIBLE = 1e-34


class ConvergenceError(RuntimeError):
    pass


def _jacobi_tall(a: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonalise the columns of a (m >= n) in place; return (A V, V)."""
    n = a.shape[1]
    v = np.eye(n, dtype=np.complex128)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                ai, aj = a[:, i], a[:, j]
                alpha = np.vdot(ai, ai).real
                beta = np.vdot(aj, aj).real
                gamma = np.vdot(ai, aj)
                g = abs(gamma)
                if g == 0.0 or g <= tol * np.sqrt(alpha * beta) or min(alpha, beta) <= _NEGLIGIBLE:
                    continue
                phase = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                if t == 0.0:
                    # the rotation underflows to the identity: columns already orthogonal
                    continue
                rotated = True
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                # rotate (a_i, a_j e^{-i phi}) by the real Givens pair (c, s)
                aj_ph = aj * np.conj(phase)
                new_i = c * ai - s * aj_ph
                new_j = s * ai + c * aj_ph
                a[:, i], a[:, j] = new_i, new_j
                vj_ph = v[:, j] * np.conj(phase)
                vi = v[:, i].copy()
                v[:, i] = c * vi - s * vj_ph
                v[:, j] = s * vi + c * vj_ph
        if not rotated:
            return a, v
    raise ConvergenceError(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")


def _complete_basis(u: np.ndarray, k: int) -> np.ndarray:
    """Replace columns k.. of u by an orthonormal completion of the first k."""
    m = u.shape[0]
    basis = [u[:, i] for i in range(k)]
    for e in np.eye(m, dtype=np.complex128):
        if len(basis) == u.shape[1]:
            break
        w = e.copy()
        for b in basis:
            w -= np.vdot(b, w) * b
        nrm = np.linalg.norm(w)
        if nrm > 1e-8:
            basis.append(w / nrm)
    return np.stack(basis, axis=1)


def jacobi_svd(m: np.ndarray, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = u @ diag(s) @ vh`` with s sorted descending.

    Returns u (p x k), s (k,), vh (k x q) with k = min(p, q).
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"expected a non-empty matrix, got shape {m.shape}")
    wide = m.shape[0] < m.shape[1]
    scale = np.linalg.norm(m)
    if scale == 0.0 or not np.isfinite(scale):
        scale = 1.0
    work = (m.conj().T if wide else m) / scale
    av, v = _jacobi_tall(work, tol)
    s = np.linalg.norm(av, axis=0)
    order = np.argsort(-s, kind="stable")
    s, av, v = s[order], av[:, order], v[:, order]
    u = np.zeros_like(av)
    smax = s[0] if s.size else 0.0
    nonzero = int(np.sum(s > smax * 1e-15)) if smax > 0 else 0
    u[:, :nonzero] = av[:, :nonzero] / s[:nonzero]
    if nonzero < u.shape[1]:
        u = _complete_basis(u, nonzero)
    s = s * scale
    if wide:
        # m^H = u s v^H  =>  m = v s u^H
        return v, s, u.conj().T
    return u, s, v.conj().T


def singular_values(m: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    return jacobi_svd(m, tol)[1]


def numerical_rank(s: np.ndarray, rel_tol: float) -> int:
    """Count singular values above rel_tol * s_max (0 for the zero matrix)."""
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))
