"""Finite-dimensional two-subspace systems.

A system ``(R^n; E1, E2)`` is stored as two orthonormal frames. This module
builds graph systems, computes the algebraic dimension quadruple and the
Halmos five-part decomposition, decides unitary / bounded / algebraic
isomorphism, and constructs explicit invertible witnesses.

In finite dimension every invertible linear map is bounded, so bounded and
algebraic isomorphism coincide; both are decided by the dimension quadruple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import linalg

ANGLE_TOL = 1e-8
ANGLE_MATCH_TOL = 1e-8
WITNESS_RESIDUAL_TOL = 1e-8
COND_CAP = 1e8


@dataclass(frozen=True)
class FiniteSystem:
    ambient_dim: int
    e1: np.ndarray = field(repr=False)
    e2: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("e1", "e2"):
            frame = getattr(self, name)
            if frame.ndim != 2 or frame.shape[0] != self.ambient_dim:
                raise ValueError(f"{name} frame has shape {frame.shape}, "
                                 f"ambient is {self.ambient_dim}")
            gram = frame.T @ frame
            if gram.size and np.abs(gram - np.eye(frame.shape[1])).max() > 1e-8:
                raise ValueError(f"{name} frame is not orthonormal")

    @classmethod
    def from_bases(cls, ambient_dim: int, b1, b2) -> FiniteSystem:
        """Build from arbitrary spanning sets given as columns (orthonormalized here)."""
        return cls(ambient_dim, _frame(ambient_dim, b1), _frame(ambient_dim, b2))

    @property
    def dims(self) -> tuple[int, int]:
        return self.e1.shape[1], self.e2.shape[1]

    def transformed(self, q: np.ndarray) -> FiniteSystem:
        """Image of the system under an orthogonal matrix ``q``."""
        return FiniteSystem(self.ambient_dim, q @ self.e1, q @ self.e2)


def _frame(n: int, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.size == 0:
        return np.zeros((n, 0))
    return linalg.orth_basis(b.reshape(n, -1))


class DimQuadruple(NamedTuple):
    d_meet: int
    d1: int
    d2: int
    d_coker: int


class HalmosParts(NamedTuple):
    mm: np.ndarray
    mp: np.ndarray
    pm: np.ndarray
    pp: np.ndarray
    generic_angles: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int, int, int]:
        return (self.mm.shape[1], self.mp.shape[1], self.pm.shape[1],
                self.pp.shape[1], len(self.generic_angles))


@dataclass(frozen=True)
class Witness:
    map: np.ndarray
    residuals: tuple[float, float]
    cond: float


class ThreeSystem(NamedTuple):
    e1: np.ndarray
    e1_perp: np.ndarray
    e2: np.ndarray


# -- constructors -----------------------------------------------------------

def graph_system(t) -> FiniteSystem:
    """The system ``(K1 + K2; K1 + 0, graph(T))`` for ``T: K1 -> K2`` of shape (k2, k1)."""
    t = linalg.as_matrix(t)
    k2, k1 = t.shape
    e1 = np.vstack([np.eye(k1), np.zeros((k2, k1))])
    e2 = _frame(k1 + k2, np.vstack([np.eye(k1), t]))
    return FiniteSystem(k1 + k2, e1, e2)


def derived_system(s: FiniteSystem) -> ThreeSystem:
    return ThreeSystem(s.e1, linalg.complement(s.e1), s.e2)


# -- subspace lattice helpers -----------------------------------------------

def intersection(u: np.ndarray, v: np.ndarray, tol: float = ANGLE_TOL) -> np.ndarray:
    """Frame of ``span(u) & span(v)``: principal vectors at angle <= tol."""
    angles, pu, _ = linalg.principal_vectors(u, v)
    k = int(np.sum(angles <= tol))
    return pu[:, :k]


def _remove(frame: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Frame of ``span(frame)`` minus ``span(sub)`` (``sub`` must lie inside ``frame``)."""
    if sub.shape[1] == 0:
        return frame
    return frame @ linalg.complement(linalg.orth_basis(frame.T @ sub))


def _sum_rank(s: FiniteSystem, tol: float) -> int:
    # rank of [e1 | e2] after eliminating e1: the remaining singular values
    # are the sines of the principal angles, so the threshold matches `tol`
    n1, n2 = s.dims
    if n2 == 0:
        return n1
    resid = s.e2 - s.e1 @ (s.e1.T @ s.e2)
    return n1 + linalg.rank(resid, tol=np.sin(tol))


def dim_quadruple(s: FiniteSystem, tol: float = ANGLE_TOL) -> DimQuadruple:
    n1, n2 = s.dims
    angles = linalg.principal_angles(s.e1, s.e2)
    meet = int(np.sum(angles <= tol))
    total = _sum_rank(s, tol)
    if total != n1 + n2 - meet:
        raise ArithmeticError(f"inconsistent intersection/sum dimensions "
                              f"({meet} vs {n1 + n2 - total})")
    return DimQuadruple(meet, n1 - meet, n2 - meet, s.ambient_dim - total)


def halmos_decompose(s: FiniteSystem, tol: float = ANGLE_TOL) -> HalmosParts:
    """Split off the four intersections and return the angles of the generic part."""
    c1 = linalg.complement(s.e1)
    c2 = linalg.complement(s.e2)
    mm = intersection(s.e1, s.e2, tol)
    mp = intersection(s.e1, c2, tol)
    pm = intersection(c1, s.e2, tol)
    pp = intersection(c1, c2, tol)
    g1 = _remove(s.e1, np.hstack([mm, mp]))
    g2 = _remove(s.e2, np.hstack([mm, pm]))
    if g1.shape[1] != g2.shape[1]:
        raise ArithmeticError("generic parts of E1 and E2 differ in dimension")
    return HalmosParts(mm, mp, pm, pp, linalg.principal_angles(g1, g2))


# -- classifiers ------------------------------------------------------------

def classify_algebraic_fin(a: FiniteSystem, b: FiniteSystem, tol: float = ANGLE_TOL) -> bool:
    return a.ambient_dim == b.ambient_dim and dim_quadruple(a, tol) == dim_quadruple(b, tol)


def classify_bounded_fin(a: FiniteSystem, b: FiniteSystem, tol: float = ANGLE_TOL) -> bool:
    """Bounded isomorphism; identical to the algebraic test in finite dimension."""
    return classify_algebraic_fin(a, b, tol)


def angles_match(x: np.ndarray, y: np.ndarray, tol: float = ANGLE_MATCH_TOL) -> bool:
    if len(x) != len(y):
        return False
    return len(x) == 0 or float(np.max(np.abs(np.sort(x) - np.sort(y)))) <= tol


def classify_unitary_fin(a: FiniteSystem, b: FiniteSystem, tol: float = ANGLE_TOL) -> bool:
    """Unitary isomorphism: equal Halmos part dimensions and equal generic angles."""
    if a.ambient_dim != b.ambient_dim:
        return False
    ha, hb = halmos_decompose(a, tol), halmos_decompose(b, tol)
    return ha.dims == hb.dims and angles_match(ha.generic_angles, hb.generic_angles)


# -- witnesses --------------------------------------------------------------

def _check_shapes(t: np.ndarray, t2: np.ndarray):
    if t.shape != t2.shape:
        raise ValueError(f"shape mismatch: {t.shape} vs {t2.shape}")


def quiver_iso_a2(t, t2) -> bool:
    """Isomorphism of the A2-quiver representations ``K1 --T--> K2``: equal rank."""
    t, t2 = linalg.as_matrix(t), linalg.as_matrix(t2)
    _check_shapes(t, t2)
    return linalg.rank(t) == linalg.rank(t2)


def _full_svd(t: np.ndarray):
    k2, k1 = t.shape
    res = linalg.svd(t)
    u = np.hstack([res.u, linalg._complete(res.u, k2)]) if res.u.shape[1] < k2 else res.u
    v = np.hstack([res.v, linalg._complete(res.v, k1)]) if res.v.shape[1] < k1 else res.v
    return u, res.sigma, v


def _span_residual(m: np.ndarray, src: np.ndarray, dst: np.ndarray) -> float:
    img = m @ src
    if img.size == 0:
        return 0.0
    return float(np.linalg.norm(img - dst @ (dst.T @ img), 2) / max(np.linalg.norm(m, 2), 1e-300))


def _finish(m: np.ndarray, a: FiniteSystem, b: FiniteSystem) -> Witness | None:
    if m.size == 0:
        return Witness(m, (0.0, 0.0), 1.0)
    sv = linalg.svd(m).sigma
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    if cond > COND_CAP:
        return None
    res = (_span_residual(m, a.e1, b.e1), _span_residual(m, a.e2, b.e2))
    if max(res) > WITNESS_RESIDUAL_TOL:
        return None
    return Witness(m, res, cond)


def graph_intertwiners(t, t2) -> tuple[np.ndarray, np.ndarray] | None:
    """Invertible ``G1, G2`` with ``T' G1 = G2 T``, or None when ranks differ.

    Built from both SVDs: ``G1`` carries right singular vectors of ``T`` to
    those of ``T'``; ``G2`` does the same on the left and rescales by the
    singular-value ratios on the common rank (identity elsewhere).
    """
    t, t2 = linalg.as_matrix(t), linalg.as_matrix(t2)
    _check_shapes(t, t2)
    r = linalg.rank(t)
    if r != linalg.rank(t2):
        return None
    u, s, v = _full_svd(t)
    u2, s2, v2 = _full_svd(t2)
    scale = np.ones(u.shape[1])
    scale[:r] = s2[:r] / s[:r]
    g1 = v2 @ v.T
    g2 = (u2 * scale) @ u.T
    return g1, g2


def witness_graph_bounded(t, t2) -> Witness | None:
    """Block-diagonal bounded isomorphism ``diag(G1, G2)`` of two graph systems."""
    t, t2 = linalg.as_matrix(t), linalg.as_matrix(t2)
    pair = graph_intertwiners(t, t2)
    if pair is None:
        return None
    g1, g2 = pair
    k2, k1 = t.shape
    err = np.linalg.norm(t2 @ g1 - g2 @ t, 2) if t.size else 0.0
    scale = 1.0 + np.linalg.norm(t, 2) + np.linalg.norm(t2, 2) if t.size else 1.0
    if err > WITNESS_RESIDUAL_TOL * scale:
        return None
    m = np.zeros((k1 + k2, k1 + k2))
    m[:k1, :k1] = g1
    m[k1:, k1:] = g2
    return _finish(m, graph_system(t), graph_system(t2))


def _adapted_basis(s: FiniteSystem, tol: float) -> tuple[np.ndarray, DimQuadruple]:
    meet = intersection(s.e1, s.e2, tol)
    f1 = _remove(s.e1, meet)
    f2 = _remove(s.e2, meet)
    spanning = np.hstack([meet, f1, f2])
    k = spanning.shape[1]
    rest = linalg._complete(linalg.svd(spanning).u[:, :k], s.ambient_dim) if k else np.eye(s.ambient_dim)
    q = DimQuadruple(meet.shape[1], f1.shape[1], f2.shape[1], rest.shape[1])
    return np.hstack([spanning, rest]), q


def witness_fin(a: FiniteSystem, b: FiniteSystem, tol: float = ANGLE_TOL) -> Witness | None:
    """Invertible map carrying ``a`` onto ``b`` for arbitrary finite systems.

    Maps a basis adapted to ``E1&E2 + E1' + E2' + complement`` of one system
    onto the matching basis of the other.
    """
    if a.ambient_dim != b.ambient_dim:
        return None
    ba, qa = _adapted_basis(a, tol)
    bb, qb = _adapted_basis(b, tol)
    if qa != qb or ba.shape[1] != a.ambient_dim:
        return None
    return _finish(bb @ np.linalg.inv(ba), a, b)


def oblique_projection(e1, e2, tol: float = ANGLE_TOL) -> np.ndarray | None:
    """Idempotent ``P`` with range ``E1`` and kernel ``E2`` for complementary frames."""
    e1, e2 = linalg.as_matrix(e1), linalg.as_matrix(e2)
    n = e1.shape[0]
    if e2.shape[0] != n or e1.shape[1] + e2.shape[1] != n:
        return None
    angles = linalg.principal_angles(e1, e2)
    if np.any(angles <= tol):
        return None
    basis = np.hstack([e1, e2])
    k = e1.shape[1]
    # P = B diag(I_k, 0) B^{-1}
    return basis[:, :k] @ np.linalg.solve(basis, np.eye(n))[:k, :]
