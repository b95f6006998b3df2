import numpy as np
import pytest

from rfturbo.errors import DimensionMismatch, NotAFrame
from rfturbo.frames import (Frame, analyze, dual_frame, frame_bounds,
                            is_uniform, synthesize)


def mercedes():
    angles = np.array([np.pi / 2, np.pi / 2 + 2 * np.pi / 3, np.pi / 2 - 2 * np.pi / 3])
    return Frame(np.stack([np.cos(angles), np.sin(angles)], axis=1))


def repeated_e1():
    return Frame(np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def random_frame(rng, k, n):
    while True:
        F = rng.standard_normal((k, n))
        if np.linalg.matrix_rank(F) == n:
            return Frame(F)


def test_frame_stores_vectors_and_sizes():
    f = repeated_e1()
    assert f.dim == 2 and f.size == 3
    assert f.vectors.shape == (3, 2)


def test_frame_rejects_rank_deficient_rows():
    with pytest.raises(NotAFrame):
        Frame(np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(NotAFrame):
        Frame(np.array([[1.0, 0.0]]))  # fewer vectors than dimensions


def test_frame_bounds_standard_basis():
    fb = frame_bounds(Frame(np.eye(3)))
    assert fb.A == fb.B == 1.0
    assert fb.tight
    assert fb.snug_ratio == 1.0


def test_frame_bounds_repeated_vector():
    fb = frame_bounds(repeated_e1())
    assert abs(fb.A - 1.0) < 1e-12 and abs(fb.B - 2.0) < 1e-12
    assert not fb.tight
    assert abs(fb.snug_ratio - 2.0) < 1e-12


def test_frame_bounds_mercedes_is_tight():
    fb = frame_bounds(mercedes())
    assert abs(fb.A - 1.5) < 1e-12 and abs(fb.B - 1.5) < 1e-12
    assert fb.tight


def test_frame_bounds_sandwich_inequality():
    """A*|z|^2 <= sum <z,phi_k>^2 <= B*|z|^2 for random z."""
    rng = np.random.default_rng(21)
    f = random_frame(rng, 7, 4)
    fb = frame_bounds(f)
    for _ in range(200):
        z = rng.standard_normal(4)
        e = float(np.sum(analyze(f, z) ** 2))
        nz = float(z @ z)
        assert fb.A * nz - 1e-9 <= e <= fb.B * nz + 1e-9


def test_is_uniform():
    assert is_uniform(mercedes())
    assert is_uniform(Frame(np.eye(4)))
    assert not is_uniform(Frame(np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])))


def test_dual_frame_repeated_vector():
    dual = dual_frame(repeated_e1())
    assert np.allclose(dual.vectors, [[0.5, 0.0], [0.5, 0.0], [0.0, 1.0]],
                       atol=1e-12)
    db = frame_bounds(dual)
    assert abs(db.A - 0.5) < 1e-12 and abs(db.B - 1.0) < 1e-12


def test_dual_frame_tight_is_scaled_original():
    f = mercedes()
    assert np.allclose(dual_frame(f).vectors, f.vectors / 1.5, atol=1e-12)


def test_dual_frame_orthonormal_basis_is_self():
    assert np.allclose(dual_frame(Frame(np.eye(3))).vectors, np.eye(3),
                       atol=1e-14)


def test_dual_bounds_are_reciprocal():
    rng = np.random.default_rng(22)
    for _ in range(20):
        f = random_frame(rng, 6, 3)
        fb = frame_bounds(f)
        db = frame_bounds(dual_frame(f))
        assert abs(db.A - 1.0 / fb.B) <= 1e-9 / fb.B
        assert abs(db.B - 1.0 / fb.A) <= 1e-9 / fb.A


def test_analyze_examples():
    basis = Frame(np.eye(2))
    assert np.array_equal(analyze(basis, [3.0, 4.0]), [3.0, 4.0])
    assert np.array_equal(analyze(repeated_e1(), [1.0, 2.0]), [1.0, 1.0, 2.0])
    assert np.array_equal(analyze(repeated_e1(), [0.0, 0.0]), [0.0, 0.0, 0.0])


def test_synthesize_inverts_analyze_by_hand():
    # dual of {e1, e1, e2} halves the duplicated coefficient
    z = synthesize(repeated_e1(), [1.0, 1.0, 2.0])
    assert np.allclose(z, [1.0, 2.0], atol=1e-12)


def test_synthesize_orthonormal_is_adjoint():
    f = Frame(np.eye(3))
    c = np.array([0.5, -1.0, 2.0])
    assert np.allclose(synthesize(f, c), c, atol=1e-14)


def test_analyze_synthesize_round_trip():
    rng = np.random.default_rng(23)
    for _ in range(100):
        k = int(rng.integers(3, 10))
        n = int(rng.integers(2, k + 1))
        f = random_frame(rng, k, n)
        z = rng.standard_normal(n)
        zr = synthesize(f, analyze(f, z))
        assert np.linalg.norm(zr - z) <= 1e-9 * max(np.linalg.norm(z), 1.0)


def test_trace_identity():
    """Eigenvalues of F^T F sum to the total squared vector length."""
    rng = np.random.default_rng(24)
    for _ in range(20):
        F = random_frame(rng, 8, 5).vectors
        eigs = np.linalg.eigvalsh(F.T @ F)
        assert abs(np.sum(eigs) - np.sum(F * F)) <= 1e-9 * np.sum(F * F)


def test_dual_of_dual_bounds_match():
    rng = np.random.default_rng(25)
    f = random_frame(rng, 9, 4)
    fb = frame_bounds(f)
    ddb = frame_bounds(dual_frame(dual_frame(f)))
    assert abs(ddb.A - fb.A) <= 1e-8 * fb.A
    assert abs(ddb.B - fb.B) <= 1e-8 * fb.B
    assert np.allclose(dual_frame(dual_frame(f)).vectors, f.vectors, atol=1e-9)


def test_analyze_dimension_check():
    f = Frame(np.eye(3))
    with pytest.raises(DimensionMismatch):
        analyze(f, [1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        synthesize(f, [1.0, 2.0])
