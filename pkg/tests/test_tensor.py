"""Test the bipartite vector primitives."""
import numpy as np
import pytest

from uebk.constructions import construct_prop1
from uebk.tensor import (
    BipartiteVector,
    DimensionMismatchError,
    EmptyBasisError,
    NonFiniteAmplitudeError,
    NotOrthonormalError,
    SubspaceBasis,
    ZeroVectorError,
    gram,
    matricize,
    max_gram_deviation,
    random_unit_in_span,
    reduced_rank,
    schmidt_rank,
    singular_values,
    vectorize,
)

SQRT_HALF = 1 / np.sqrt(2)


@pytest.fixture
def bell():
    return BipartiteVector(2, 2, SQRT_HALF * np.array([1, 0, 0, 1]))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_vector(rng, d, dprime, rank=None):
    rank = rank or min(d, dprime)
    left = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    right = rng.standard_normal((rank, dprime)) + 1j * rng.standard_normal((rank, dprime))
    v = vectorize(left @ right)
    return v.scaled(1 / v.norm())


def test_matricize_single_amplitude():
    """A single basis amplitude lands in the matching matrix cell."""
    v = BipartiteVector(2, 2, [1, 0, 0, 0])
    np.testing.assert_array_equal(matricize(v), [[1, 0], [0, 0]])


def test_matricize_bell(bell):
    """The Bell state matricizes to a scaled identity."""
    np.testing.assert_allclose(matricize(bell), SQRT_HALF * np.eye(2))


def test_matricize_row_major():
    """Entry [i, j] is the amplitude at flat index i*d' + j."""
    v = BipartiteVector(2, 3, np.arange(6))
    m = matricize(v)
    for i in range(2):
        for j in range(3):
            assert m[i, j] == v.amps[i * 3 + j]


def test_round_trip_is_exact(rng):
    """vectorize(matricize(v)) reproduces v bit for bit."""
    for _ in range(100):
        d = int(rng.integers(1, 7))
        dprime = int(rng.integers(1, 9))
        v = BipartiteVector(d, dprime, rng.standard_normal(d * dprime)
                            + 1j * rng.standard_normal(d * dprime))
        back = vectorize(matricize(v))
        assert back.shape == v.shape
        assert np.array_equal(back.amps, v.amps)


def test_dimension_mismatch_rejected():
    """Amplitude count must equal d*d'."""
    with pytest.raises(DimensionMismatchError):
        BipartiteVector(2, 3, [1, 0, 0, 0])


def test_singular_values_examples(bell):
    """Bell, product and a k=2 member have the expected Schmidt coefficients."""
    np.testing.assert_allclose(singular_values(matricize(bell)), [SQRT_HALF, SQRT_HALF])
    np.testing.assert_allclose(singular_values(np.array([[1, 0], [0, 0]])), [1, 0])

    family = construct_prop1(3, 3, 2)
    member = family.vectors[family.labels.index((0, 0, 1))]
    np.testing.assert_allclose(
        singular_values(matricize(member)), [SQRT_HALF, SQRT_HALF, 0], atol=1e-12
    )


def test_singular_values_conserve_norm(rng):
    """Sum of squared singular values equals the squared vector norm."""
    for _ in range(100):
        d = int(rng.integers(2, 7))
        dprime = int(rng.integers(d, 9))
        v = BipartiteVector(d, dprime, rng.standard_normal(d * dprime)
                            + 1j * rng.standard_normal(d * dprime))
        values = singular_values(matricize(v))
        assert np.all(np.diff(values) <= 0)
        assert abs(np.sum(values ** 2) - v.norm() ** 2) <= 1e-12 * max(1.0, v.norm() ** 2)


def test_schmidt_rank_examples(bell):
    """Product states have rank 1 and the Bell state rank 2."""
    assert schmidt_rank(BipartiteVector.basis_state(2, 2, 0, 0)) == 1
    assert schmidt_rank(bell) == 2


def test_schmidt_rank_of_prop1_members():
    """Every member of the first construction has Schmidt rank k."""
    family = construct_prop1(4, 5, 3)
    assert all(schmidt_rank(v) == 3 for v in family.vectors)


def test_schmidt_rank_rejects_zero_vector():
    """A numerically zero vector has no meaningful rank."""
    with pytest.raises(ZeroVectorError):
        schmidt_rank(BipartiteVector(2, 2, [0, 0, 0, 1e-12]))


def test_schmidt_rank_matches_reduced_state(rng):
    """Singular value counting agrees with the rank of the partial trace."""
    for _ in range(100):
        d = int(rng.integers(2, 7))
        dprime = int(rng.integers(d, 9))
        rank = int(rng.integers(1, d + 1))
        v = random_vector(rng, d, dprime, rank)
        assert schmidt_rank(v) == rank
        assert reduced_rank(v) == rank


def test_gram_of_prop1_is_identity():
    """The six members at (3, 3, 2) are orthonormal."""
    family = construct_prop1(3, 3, 2)
    g = gram(family.vectors)
    assert g.shape == (6, 6)
    np.testing.assert_allclose(g, np.eye(6), atol=1e-12)
    assert max_gram_deviation(family.vectors) <= 1e-12


def test_gram_duplicate_and_pair(bell):
    """Duplicates give an all-ones Gram matrix; basis pairs the identity."""
    np.testing.assert_allclose(gram([bell, bell]), np.ones((2, 2)))
    pair = [BipartiteVector.basis_state(2, 2, 0, 1), BipartiteVector.basis_state(2, 2, 1, 0)]
    np.testing.assert_array_equal(gram(pair), np.eye(2))


def test_gram_is_hermitian(rng):
    """<a|b> is the conjugate of <b|a>, and unit vectors have unit diagonal."""
    vs = [random_vector(rng, 3, 4) for _ in range(5)]
    g = gram(vs)
    np.testing.assert_array_equal(g, g.conj().T)
    np.testing.assert_allclose(np.diag(g).real, np.ones(5), atol=1e-12)


def test_gram_dimension_mismatch():
    """Vectors of different shapes cannot share a Gram matrix."""
    with pytest.raises(DimensionMismatchError):
        gram([BipartiteVector.basis_state(2, 2, 0, 0), BipartiteVector.basis_state(2, 3, 0, 0)])


def test_random_unit_on_a_line():
    """A one-vector span only allows a phase."""
    u = BipartiteVector(2, 3, np.array([1, 1j, 0, 0, 0, 1]) / np.sqrt(3))
    basis = SubspaceBasis(2, 3, (u,))
    for seed in range(10):
        v = random_unit_in_span(basis, seed)
        assert abs(abs(np.vdot(u.amps, v.amps)) - 1) <= 1e-12


def test_random_unit_is_deterministic_and_normalized():
    """Same seed, same vector; every output has unit norm."""
    basis = SubspaceBasis.full(3, 3)
    assert random_unit_in_span(basis, 7) == random_unit_in_span(basis, 7)
    assert random_unit_in_span(basis, 7) != random_unit_in_span(basis, 8)
    for seed in range(100):
        assert abs(random_unit_in_span(basis, seed).norm() - 1) <= 1e-12


def test_random_unit_needs_a_basis():
    """Sampling from an empty span is an error."""
    with pytest.raises(EmptyBasisError):
        random_unit_in_span(SubspaceBasis(2, 2, ()), 0)


def test_subspace_basis_must_be_orthonormal(bell):
    """A basis with a repeated vector is rejected."""
    with pytest.raises(NotOrthonormalError):
        SubspaceBasis(2, 2, (bell, bell))


def test_subspace_basis_tolerance(bell):
    """A slightly long vector is accepted under a looser tol and still projects exactly."""
    nudged = bell.scaled(1 + 1e-8)
    with pytest.raises(NotOrthonormalError):
        SubspaceBasis(2, 2, (nudged,))
    projector = SubspaceBasis(2, 2, (nudged,), tol=1e-6).projector()
    np.testing.assert_allclose(projector @ projector, projector, atol=1e-12)
    assert np.trace(projector).real == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("bad", [np.nan, np.inf, complex(0, np.nan)])
def test_non_finite_amplitudes_rejected(bad):
    with pytest.raises(NonFiniteAmplitudeError):
        BipartiteVector(2, 2, [bad, 0, 0, 1])
