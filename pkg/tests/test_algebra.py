import numpy as np
import pytest

from lambda_soliton.algebra import (
    I3,
    commutator,
    dagger,
    hermiticity_defect,
    inverse3,
    involution_defect,
    involution_from_projector,
    projector_defect,
    projector_from_vector,
)
from lambda_soliton.errors import NotAProjectorError, SingularMatrixError, ZeroVectorError

TIGHT = 1e-12


def random_vectors(rng, n=64):
    return rng.normal(size=(n, 3)) + 1j * rng.normal(size=(n, 3))


def test_projector_basis_vector():
    p = projector_from_vector(np.array([1.0, 0, 0], dtype=complex))
    assert np.abs(p - np.diag([1.0, 0, 0])).max() < TIGHT


def test_projector_symmetric_two_component():
    v = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    expected = np.array([[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 0]])
    assert np.abs(projector_from_vector(v) - expected).max() < TIGHT


def test_projector_complex_offdiagonal():
    # outer product by hand: P = v v^dag / 2 with v = (1, i, 0)
    p = projector_from_vector(np.array([1.0, 1.0j, 0.0]))
    assert abs(p[0, 1] - (-0.5j)) < TIGHT
    assert abs(p[1, 0] - 0.5j) < TIGHT
    assert abs(p[0, 0] - 0.5) < TIGHT


def test_projector_properties_random(rng):
    p = projector_from_vector(random_vectors(rng))
    assert projector_defect(p) < TIGHT
    assert np.abs(np.trace(p, axis1=-2, axis2=-1) - 1).max() < TIGHT


def test_projector_scale_invariance(rng):
    v = random_vectors(rng, 16)
    scales = (rng.normal(size=(16, 1)) + 1j * rng.normal(size=(16, 1))) * 10.0
    assert np.abs(
        projector_from_vector(v) - projector_from_vector(scales * v)
    ).max() < TIGHT


def test_projector_zero_vector_rejected():
    with pytest.raises(ZeroVectorError):
        projector_from_vector(np.zeros(3, dtype=complex))


def test_involution_basis_cases():
    m = involution_from_projector(np.diag([1.0, 0, 0]).astype(complex))
    assert np.abs(m - np.diag([1.0, -1.0, -1.0])).max() < TIGHT
    m = involution_from_projector(projector_from_vector(np.array([0, 0, 1.0 + 0j])))
    assert np.abs(m - np.diag([-1.0, -1.0, 1.0])).max() < TIGHT


def test_involution_two_component():
    # 2P - I by hand for v = (1, 1, 0)/sqrt(2)
    v = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    expected = np.array([[0, 1.0, 0], [1.0, 0, 0], [0, 0, -1.0]])
    m = involution_from_projector(projector_from_vector(v))
    assert np.abs(m - expected).max() < TIGHT


def test_involution_properties_random(rng):
    m = involution_from_projector(projector_from_vector(random_vectors(rng)))
    assert involution_defect(m) < TIGHT
    assert hermiticity_defect(m) < TIGHT


def test_involution_rejects_non_projector():
    with pytest.raises(NotAProjectorError):
        involution_from_projector(np.diag([0.7, 0.3, 0.0]).astype(complex))


def test_inverse3_identity_and_diagonal():
    assert np.abs(inverse3(np.asarray(I3)) - I3).max() < TIGHT
    inv = inverse3(np.diag([2.0, 4.0, 8.0]).astype(complex))
    assert np.abs(inv - np.diag([0.5, 0.25, 0.125])).max() < TIGHT


def test_inverse3_residual_random(rng):
    m = rng.normal(size=(128, 3, 3)) + 1j * rng.normal(size=(128, 3, 3)) + 2 * I3
    resid = np.abs(m @ inverse3(m) - I3).max()
    assert resid < 1e-10


def test_inverse3_rejects_singular():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 1.0
    with pytest.raises(SingularMatrixError):
        inverse3(m)
    nearly = np.diag([1.0, 1.0, 1e-14]).astype(complex)
    with pytest.raises(SingularMatrixError):
        inverse3(nearly)


def test_commutator_trivial_cases(rng):
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert np.abs(commutator(np.asarray(I3), x)).max() == 0
    assert np.abs(
        commutator(np.diag([1.0, 2, 3]).astype(complex), np.diag([4.0, 5, 6]).astype(complex))
    ).max() == 0


def test_commutator_matches_elementwise_expansion(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    expected = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                expected[i, j] += a[i, k] * b[k, j] - b[i, k] * a[k, j]
    assert np.abs(commutator(a, b) - expected).max() < TIGHT
    assert np.abs(commutator(a, b) + commutator(b, a)).max() < TIGHT


def test_batched_shapes(rng):
    v = rng.normal(size=(4, 5, 3)) + 1j * rng.normal(size=(4, 5, 3))
    p = projector_from_vector(v)
    assert p.shape == (4, 5, 3, 3)
    m = involution_from_projector(p)
    assert involution_defect(m) < TIGHT
    assert np.abs(dagger(m) - m).max() < TIGHT
