import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hksym.lie_core import (
    Endo,
    SpectralDomainError,
    build_algebra,
    symmetric_spectral,
)


@pytest.mark.parametrize(
    "family,n,dim",
    [("su", 2, 3), ("su", 4, 15), ("sp", 2, 10), ("so", 4, 6)],
)
def test_dimensions(family, n, dim):
    assert build_algebra(family, n).dim == dim


@pytest.mark.parametrize("family,n", [("su", 3), ("sp", 2), ("so", 5)])
def test_invariants(family, n):
    report = build_algebra(family, n).validate()
    assert report["passed"]
    assert report["jacobi"] < 1e-12
    assert report["ad_invariance"] < 1e-12
    assert report["gram_min_eigenvalue"] > 0


def test_unsupported_family():
    with pytest.raises(ValueError):
        build_algebra("g2", 2)
    with pytest.raises(ValueError):
        build_algebra("so", 2)
    with pytest.raises(ValueError):
        build_algebra("su", 2, kappa=-1.0)


def test_bracket_antisymmetric_and_bilinear(rng):
    alg = build_algebra("su", 3)
    x = rng.standard_normal(alg.dim)
    y = rng.standard_normal(alg.dim)
    z = rng.standard_normal(alg.dim)
    assert np.max(np.abs(alg.bracket(x, x))) < 1e-14
    lhs = alg.bracket(2.0 * x + 3.0 * y, z)
    rhs = 2.0 * alg.bracket(x, z) + 3.0 * alg.bracket(y, z)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_ad_matrix_matches_bracket(rng):
    alg = build_algebra("sp", 2)
    x = rng.standard_normal(alg.dim)
    y = rng.standard_normal(alg.dim)
    assert np.allclose(alg.ad_matrix(x) @ y, alg.bracket(x, y))
    assert np.max(np.abs(alg.ad(x).apply(x))) < 1e-12


def test_invariant_form_ad_invariance(rng):
    alg = build_algebra("su", 3)
    x, y, z = (rng.standard_normal(alg.dim) for _ in range(3))
    assert abs(
        alg.invariant_form(alg.bracket(x, y), z)
        + alg.invariant_form(y, alg.bracket(x, z))
    ) < 1e-12
    assert alg.invariant_form(x, x) > 0


def test_coefficients_roundtrip(rng):
    alg = build_algebra("su", 3)
    coeffs = rng.standard_normal(alg.dim)
    matrix = np.einsum("i,ijk->jk", coeffs, alg.matrices)
    assert np.allclose(alg.coefficients_of(matrix), coeffs)
    with pytest.raises(ValueError):
        alg.coefficients_of(np.eye(3))  # not traceless anti-Hermitian


def test_spectral_matches_dense(rng):
    alg = build_algebra("su", 3)
    a = rng.standard_normal((alg.dim, alg.dim))
    a = 0.5 * (a + a.T)
    endo = Endo(matrix=a, subspace=np.eye(alg.dim), subspace_tag="g")
    v = rng.standard_normal(alg.dim)
    evals, evecs = np.linalg.eigh(a)
    expected = evecs @ (np.exp(evals) * (evecs.T @ v))
    got = symmetric_spectral(endo, np.exp, v)
    assert np.max(np.abs(got - expected)) < 1e-10


def test_spectral_identity_function(rng):
    a = np.diag([1.0, 2.0, 3.0])
    endo = Endo(matrix=a, subspace=np.eye(3), subspace_tag="g")
    v = rng.standard_normal(3)
    assert np.allclose(symmetric_spectral(endo, lambda t: t, v), a @ v)


def test_spectral_skips_orthogonal_eigenspaces():
    # 1/t is undefined on the kernel, but the vector avoids the kernel
    a = np.diag([0.0, 4.0])
    endo = Endo(matrix=a, subspace=np.eye(2), subspace_tag="g")
    v = np.array([0.0, 2.0])
    out = symmetric_spectral(endo, lambda t: 1.0 / t if t > 1e-10 else np.nan, v)
    assert np.allclose(out, [0.0, 0.5])


def test_spectral_domain_error():
    a = np.diag([-1.0, 4.0])
    endo = Endo(matrix=a, subspace=np.eye(2), subspace_tag="g")
    with pytest.raises(SpectralDomainError) as info, np.errstate(invalid="ignore"):
        symmetric_spectral(endo, np.sqrt, np.array([1.0, 1.0]))
    assert info.value.eigenvalue == pytest.approx(-1.0)


def test_spectral_rejects_nonsymmetric():
    a = np.array([[0.0, 1.0], [0.0, 0.0]]) + 1j * np.eye(2)
    endo = Endo(matrix=a, subspace=np.eye(2), subspace_tag="g")
    with pytest.raises(ValueError):
        symmetric_spectral(endo, np.exp, np.array([1.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
        min_size=3,
        max_size=3,
    )
)
def test_jacobi_identity_on_random_elements(coeffs):
    alg = build_algebra("su", 2)
    x = np.array(coeffs)
    y = np.array([1.0, -0.5, 0.25])
    z = np.array([0.0, 1.0, 1.0])
    total = (
        alg.bracket(x, alg.bracket(y, z))
        + alg.bracket(y, alg.bracket(z, x))
        + alg.bracket(z, alg.bracket(x, y))
    )
    assert np.max(np.abs(total)) < 1e-12
