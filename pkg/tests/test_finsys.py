import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twosubspace import finsys, linalg
from twosubspace.selftest import assemble, random_orthogonal, random_rank, well_conditioned


def line(theta):
    return finsys.FiniteSystem(2, np.array([[1.0], [0.0]]),
                               np.array([[math.cos(theta)], [math.sin(theta)]]))


E1 = np.array([[1.0], [0.0]])
E2 = np.array([[0.0], [1.0]])
ORTHO = finsys.FiniteSystem(2, E1, E2)
SAME = finsys.FiniteSystem(2, E1, E1)
HALF = finsys.graph_system(np.diag([1.0, 0.5]))
THIRD = finsys.graph_system(np.diag([1.0, 1 / 3]))


def same_span(a, b):
    return a.shape == b.shape and np.allclose(a @ a.T, b @ b.T, atol=1e-12)


class TestConstruction:
    def test_zero_operator_graph(self):
        s = finsys.graph_system(np.zeros((2, 2)))
        assert same_span(s.e1, s.e2)

    def test_graph_of_half(self):
        # graph(T) spanned by (x, Tx): columns (1,0,1,0) and (0,1,0,1/2)
        basis = np.array([[1, 0], [0, 1], [1, 0], [0, 0.5]])
        assert same_span(HALF.e2, linalg.orth_basis(basis))
        assert same_span(HALF.e1, np.eye(4)[:, :2])

    def test_graph_of_one(self):
        s = finsys.graph_system([[1.0]])
        assert same_span(s.e2, np.array([[1.0], [1.0]]) / math.sqrt(2))

    def test_non_orthonormal_frame_rejected(self):
        with pytest.raises(ValueError):
            finsys.FiniteSystem(2, np.array([[2.0], [0.0]]), E2)

    def test_from_bases_orthonormalizes(self):
        s = finsys.FiniteSystem.from_bases(3, np.array([[1.0, 2.0], [0, 0], [0, 0]]),
                                           np.zeros((3, 0)))
        assert s.dims == (1, 0)

    def test_derived_system(self):
        d = finsys.derived_system(ORTHO)
        assert same_span(d.e1_perp, E2) and same_span(d.e2, E2)
        g = finsys.derived_system(finsys.graph_system([[1.0]]))
        assert same_span(g.e1_perp, np.array([[0.0], [1.0]]))
        rng = np.random.default_rng(0)
        s = assemble(rng, (1, 2, 1, 0), np.array([0.4]))
        d = finsys.derived_system(s)
        assert d.e1.shape[1] + d.e1_perp.shape[1] == s.ambient_dim


class TestQuadruple:
    def test_equal_lines(self):
        assert finsys.dim_quadruple(SAME) == (1, 0, 0, 1)

    def test_orthogonal_lines(self):
        assert finsys.dim_quadruple(ORTHO) == (0, 1, 1, 0)

    def test_graph_half(self):
        assert finsys.dim_quadruple(HALF) == (0, 2, 2, 0)

    def test_graph_rank_deficient(self):
        # T = diag(1, 0): graph meets K1 + 0 in the kernel direction
        assert finsys.dim_quadruple(finsys.graph_system(np.diag([1.0, 0.0]))) == (1, 1, 1, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31))
    def test_rotation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        dims = tuple(int(x) for x in rng.integers(0, 3, size=4))
        angles = rng.uniform(0.1, 1.4, int(rng.integers(0, 3)))
        s = assemble(rng, dims, angles)
        q = finsys.dim_quadruple(s)
        assert finsys.dim_quadruple(s.transformed(random_orthogonal(rng, s.ambient_dim))) == q
        assert q.d_meet + q.d1 == s.dims[0]
        assert sum(q) == s.ambient_dim


class TestHalmos:
    def test_orthogonal_pair(self):
        h = finsys.halmos_decompose(ORTHO)
        assert h.dims == (0, 1, 1, 0, 0)
        assert same_span(h.mp, E1) and same_span(h.pm, E2)

    def test_generic_line(self):
        h = finsys.halmos_decompose(line(0.7))
        assert h.dims == (0, 0, 0, 0, 1)
        np.testing.assert_allclose(h.generic_angles, [0.7], atol=1e-12)

    def test_build_then_recover(self):
        rng = np.random.default_rng(1)
        dims, angles = (1, 2, 1, 0), np.array([0.2, 0.9])
        h = finsys.halmos_decompose(assemble(rng, dims, angles))
        assert h.dims == dims + (2,)
        np.testing.assert_allclose(h.generic_angles, angles, atol=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31))
    def test_parts_orthogonal_and_complete(self, seed):
        rng = np.random.default_rng(seed)
        dims = tuple(int(x) for x in rng.integers(0, 3, size=4))
        s = assemble(rng, dims, rng.uniform(0.1, 1.4, int(rng.integers(0, 3))))
        h = finsys.halmos_decompose(s)
        parts = np.hstack([h.mm, h.mp, h.pm, h.pp])
        gram = parts.T @ parts
        assert np.abs(gram - np.eye(gram.shape[0])).max() <= 1e-9
        assert sum(h.dims[:4]) + 2 * h.dims[4] == s.ambient_dim
        assert np.all((h.generic_angles > 0) & (h.generic_angles < math.pi / 2))


class TestClassifiers:
    @pytest.mark.parametrize("classify", [finsys.classify_algebraic_fin,
                                          finsys.classify_bounded_fin])
    def test_algebraic_and_bounded(self, classify):
        assert classify(HALF, HALF)
        assert not classify(SAME, ORTHO)
        assert classify(HALF, THIRD)

    def test_unitary(self):
        assert finsys.classify_unitary_fin(HALF, HALF)
        assert not finsys.classify_unitary_fin(line(math.pi / 6), line(math.pi / 3))
        assert not finsys.classify_unitary_fin(HALF, THIRD)

    def test_half_third_angles_exact(self):
        # graph(diag(1, t)) has generic angles pi/4 and arctan(t)
        for s, t in ((HALF, 0.5), (THIRD, 1 / 3)):
            np.testing.assert_allclose(finsys.halmos_decompose(s).generic_angles,
                                       sorted([math.pi / 4, math.atan(t)]), atol=1e-12)

    def test_ambient_mismatch_not_isomorphic(self):
        assert not finsys.classify_bounded_fin(ORTHO, HALF)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31))
    def test_unitary_refines_bounded(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        a = finsys.FiniteSystem.from_bases(n, rng.standard_normal((n, rng.integers(0, n + 1))),
                                           rng.standard_normal((n, rng.integers(0, n + 1))))
        b = a.transformed(random_orthogonal(rng, n)) if rng.random() < 0.5 else a
        if finsys.classify_unitary_fin(a, b):
            assert finsys.classify_bounded_fin(a, b)


class TestWitness:
    def test_identical(self):
        t = np.array([[1.0, 2.0], [3.0, 4.0]])
        w = finsys.witness_graph_bounded(t, t)
        np.testing.assert_allclose(w.map, np.eye(4), atol=1e-12)

    def test_half_third(self):
        w = finsys.witness_graph_bounded(np.diag([1.0, 0.5]), np.diag([1.0, 1 / 3]))
        assert w is not None and max(w.residuals) < 1e-10

    def test_rank_mismatch(self):
        assert finsys.witness_graph_bounded(np.diag([1.0, 0.0]), np.eye(2)) is None

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            finsys.witness_graph_bounded(np.eye(2), np.eye(3))
        with pytest.raises(ValueError):
            finsys.quiver_iso_a2(np.eye(2), np.ones((2, 3)))

    def test_intertwining(self):
        rng = np.random.default_rng(2)
        t = random_rank(rng, 4, 3, 2)
        t2 = well_conditioned(rng, 4) @ t @ well_conditioned(rng, 3)
        g1, g2 = finsys.graph_intertwiners(t, t2)
        assert np.linalg.norm(t2 @ g1 - g2 @ t, 2) <= 1e-8 * (1 + np.linalg.norm(t, 2)
                                                             + np.linalg.norm(t2, 2))

    def test_quiver(self):
        rng = np.random.default_rng(3)
        t = rng.standard_normal((3, 4))
        assert finsys.quiver_iso_a2(t, well_conditioned(rng, 3) @ t @ well_conditioned(rng, 4))
        assert not finsys.quiver_iso_a2(t, np.zeros((3, 4)))
        assert finsys.quiver_iso_a2(np.zeros((2, 2)), np.zeros((2, 2)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31))
    def test_general_witness_maps_frames(self, seed):
        rng = np.random.default_rng(seed)
        dims = tuple(int(x) for x in rng.integers(0, 3, size=4))
        a = assemble(rng, dims, rng.uniform(0.1, 1.4, int(rng.integers(0, 3))))
        b = assemble(rng, dims, rng.uniform(0.1, 1.4, a.ambient_dim - sum(dims) >> 1))
        w = finsys.witness_fin(a, b)
        assert w is not None and max(w.residuals) <= 1e-8
        assert finsys.classify_bounded_fin(a, b)

    def test_witness_fin_refuses_mismatch(self):
        assert finsys.witness_fin(SAME, ORTHO) is None


class TestObliqueProjection:
    def test_orthogonal_pair(self):
        np.testing.assert_allclose(finsys.oblique_projection(E1, E2), np.diag([1.0, 0.0]),
                                   atol=1e-14)

    def test_oblique(self):
        diag = np.array([[1.0], [1.0]]) / math.sqrt(2)
        np.testing.assert_allclose(finsys.oblique_projection(E1, diag), [[1, -1], [0, 0]],
                                   atol=1e-12)

    def test_not_complementary(self):
        assert finsys.oblique_projection(E1, E1) is None

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31))
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        e1 = linalg.orth_basis(rng.standard_normal((n, k)))
        e2 = linalg.orth_basis(rng.standard_normal((n, n - k)))
        p = finsys.oblique_projection(e1, e2)
        assert np.abs(p @ p - p).max() <= 1e-9
        assert linalg.rank(p) == k
        assert np.abs(p @ e2).max() <= 1e-9
        assert np.abs(p @ e1 - e1).max() <= 1e-9
