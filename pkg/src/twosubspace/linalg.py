"""Dense kernels: one-sided Jacobi SVD, rank, null space, frames, principal angles.

All routines take and return plain ``numpy`` arrays of real scalars. A
"frame" is an ``(n, k)`` array with orthonormal columns spanning a
``k``-dimensional subspace of ``R^n``; ``k`` may be zero.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

EPS = np.finfo(float).eps
MAX_SWEEPS = 60


class ConvergenceError(ArithmeticError):
    """Raised when the Jacobi iteration fails to converge within the sweep cap."""


class Svd(NamedTuple):
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D float array, rejecting NaN/Inf."""
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # circle-method tournament: every pair meets once per sweep, pairs in a
    # round are disjoint so a whole round rotates at once
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        left, right = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i >= 0 and j >= 0:
                left.append(min(i, j))
                right.append(max(i, j))
        rounds.append((np.array(left, dtype=int), np.array(right, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _complete(frame: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``frame`` in R^n."""
    k = frame.shape[1]
    if k == 0:
        return np.eye(n)
    if k >= n:
        return np.zeros((n, 0))
    q, _ = np.linalg.qr(np.hstack([frame, np.eye(n)]), mode="complete")
    return q[:, k:n]


def _hestenes(a: np.ndarray) -> Svd:
    m, n = a.shape
    # columns are stored as contiguous rows: row gathers are far cheaper
    ut = np.array(a.T, order="C")
    vt = np.eye(n)
    rounds = _round_robin(n)
    tol = EPS * m
    # columns below eps * ||A||_F are numerical zeros; rotating them only churns noise
    tiny = (EPS * np.linalg.norm(ut)) ** 2
    for _ in range(MAX_SWEEPS):
        rotated = False
        for left, right in rounds:
            if left.size == 0:
                continue
            ul, ur = ut[left], ut[right]
            alpha = np.einsum("ij,ij->i", ul, ul)
            beta = np.einsum("ij,ij->i", ur, ur)
            gamma = np.einsum("ij,ij->i", ul, ur)
            act = (np.abs(gamma) > tol * np.sqrt(alpha * beta)) & (alpha > tiny) & (beta > tiny)
            if not act.any():
                continue
            rotated = True
            if not act.all():
                left, right = left[act], right[act]
                ul, ur = ul[act], ur[act]
                alpha, beta, gamma = alpha[act], beta[act], gamma[act]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = (1.0 / np.sqrt(1.0 + t * t))[:, None]
            s = c * t[:, None]
            ut[left] = c * ul - s * ur
            ut[right] = s * ul + c * ur
            vl, vr = vt[left], vt[right]
            vt[left] = c * vl - s * vr
            vt[right] = s * vl + c * vr
        if not rotated:
            break
    else:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps "
                               f"(shape {a.shape})")

    sigma = np.linalg.norm(ut, axis=1)
    order = np.argsort(-sigma, kind="stable")
    sigma, u, v = sigma[order], ut[order].T, vt[order].T
    # columns with negligible sigma carry no direction information; replace
    # them by a completion so that U keeps orthonormal columns
    good = (sigma > EPS * max(m, n) * sigma[0]) & (sigma > 0)
    r = int(good.sum())
    u_out = np.empty((m, n))
    u_out[:, :r] = u[:, :r] / sigma[:r]
    if r < n:
        u_out[:, r:] = _complete(u_out[:, :r], m)[:, : n - r]
    return Svd(u_out, sigma, np.ascontiguousarray(v))


def svd(m) -> Svd:
    """Thin SVD by one-sided (Hestenes) Jacobi rotations.

    Returns ``Svd(u, sigma, v)`` with ``u`` of shape ``(rows, k)``, ``v`` of
    shape ``(cols, k)``, ``k = min(rows, cols)`` and ``sigma`` non-increasing,
    so that ``u @ diag(sigma) @ v.T`` reproduces the input.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    k = min(rows, cols)
    if k == 0:
        return Svd(np.zeros((rows, 0)), np.zeros(0), np.zeros((cols, 0)))
    # unit scaling keeps squared column norms clear of under/overflow
    scale = np.abs(a).max()
    if scale == 0:
        scale = 1.0
    if rows >= cols:
        t = _hestenes(a / scale)
        return Svd(t.u, t.sigma * scale, t.v)
    t = _hestenes(a.T / scale)
    return Svd(t.v, t.sigma * scale, t.u)


def default_tol(shape: tuple[int, int], sigma_max: float) -> float:
    return EPS * max(shape) * sigma_max


def rank(m, tol: float | None = None) -> int:
    """Number of singular values above ``tol`` (default ``eps * max(m, n) * sigma_1``)."""
    a = as_matrix(m)
    s = svd(a).sigma
    if s.size == 0:
        return 0
    if tol is None:
        tol = default_tol(a.shape, s[0])
    return int(np.sum(s > tol))


def orth_basis(vectors, tol: float | None = None) -> np.ndarray:
    """Orthonormal frame for the column span of ``vectors``."""
    a = as_matrix(vectors)
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0))
    res = svd(a)
    if tol is None:
        tol = default_tol(a.shape, res.sigma[0])
    r = int(np.sum(res.sigma > tol))
    return res.u[:, :r].copy()


def null_space(m, tol: float | None = None) -> np.ndarray:
    """Orthonormal frame of the (numerical) kernel; dimension ``cols - rank``."""
    a = as_matrix(m)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0))
    res = svd(a)
    if res.sigma.size == 0:
        return np.eye(cols)
    if tol is None:
        tol = default_tol(a.shape, res.sigma[0])
    r = int(np.sum(res.sigma > tol))
    return _complete(res.v[:, :r], cols)


def complement(frame: np.ndarray) -> np.ndarray:
    """Frame of the orthogonal complement of ``frame`` in its ambient space."""
    frame = as_matrix(frame)
    return _complete(frame, frame.shape[0])


def principal_angles(u, v) -> np.ndarray:
    """Principal angles between the spans of two frames, non-decreasing in [0, pi/2].

    Cosines come from the singular values of ``u.T @ v`` and sines from
    those of the residual ``v - u (u.T v)``; small angles are taken from the
    sine and large ones from the cosine, which keeps both ends accurate to
    machine precision instead of ``sqrt(eps)`` near zero.
    """
    u = as_matrix(u)
    v = as_matrix(v)
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"ambient mismatch: {u.shape[0]} vs {v.shape[0]}")
    if u.shape[1] < v.shape[1]:
        u, v = v, u
    k = v.shape[1]
    if k == 0:
        return np.zeros(0)
    cos = np.clip(svd(u.T @ v).sigma, 0.0, 1.0)
    resid = v - u @ (u.T @ v)
    sin = np.clip(np.sort(svd(resid).sigma), 0.0, 1.0)
    angles = np.where(cos * cos >= 0.5, np.arcsin(sin), np.arccos(cos))
    return np.sort(angles)


def principal_vectors(u, v) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angles plus matching principal vectors ``(angles, u @ Y, v @ Z)``."""
    u = as_matrix(u)
    v = as_matrix(v)
    k = min(u.shape[1], v.shape[1])
    if k == 0:
        return np.zeros(0), np.zeros((u.shape[0], 0)), np.zeros((v.shape[0], 0))
    res = svd(u.T @ v)
    return principal_angles(u, v), u @ res.u[:, :k], v @ res.v[:, :k]
