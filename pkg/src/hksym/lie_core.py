"""Dense linear-algebra substrate for compact Lie algebras.

A Lie algebra is stored as a structure-constant table together with an
ad-invariant positive definite inner product.  Elements are plain numpy
coefficient vectors relative to the stored basis; endomorphisms of a
subspace are small dense matrices expressed in an orthonormal basis of
that subspace, so operators symmetric with respect to the invariant form
are literally symmetric matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CompactLieAlgebra",
    "Endo",
    "SpectralDomainError",
    "build_algebra",
    "symmetric_spectral",
]

# Construction-time residual bound for expanding brackets in the basis.
_STRUCTURE_RESIDUAL_TOL = 1e-10
# Relative gap below which eigenvalues are merged into one eigenspace.
_CLUSTER_TOL = 1e-8
# Relative projection norm below which an eigenspace is treated as
# orthogonal to the vector a spectral function is applied to.
_SUPPORT_TOL = 1e-9


class SpectralDomainError(ValueError):
    """A spectral function was required on an eigenvalue outside its domain."""

    def __init__(self, message, eigenvalue):
        super().__init__(f"{message} (eigenvalue {eigenvalue!r})")
        self.eigenvalue = eigenvalue


@dataclass(frozen=True)
class CompactLieAlgebra:
    """A compact Lie algebra given by structure constants.

    ``structure_constants[i, j, k]`` is the coefficient of ``e_k`` in
    ``[e_i, e_j]``; ``gram`` is the matrix of the ad-invariant inner
    product in the same basis.  ``matrices`` keeps the defining matrix
    realization of the basis (used when embedding distinguished elements
    such as the center generator of an isotropy subalgebra).
    """

    dim: int
    basis_labels: tuple
    structure_constants: np.ndarray
    gram: np.ndarray
    matrices: np.ndarray = field(repr=False, default=None)
    kappa: float = 1.0

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        g = np.asarray(self.gram, dtype=float)
        if c.shape != (self.dim,) * 3:
            raise ValueError("structure constant table has wrong shape")
        if g.shape != (self.dim, self.dim):
            raise ValueError("gram matrix has wrong shape")
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "gram", g)

    # -- basic operations -------------------------------------------------

    def _check(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise ValueError(
                f"vector of length {x.shape} does not live in a "
                f"{self.dim}-dimensional algebra"
            )
        return x

    def bracket(self, x, y):
        """Lie bracket of two coefficient vectors (extended bilinearly to
        complex coefficients)."""
        x = self._check(x)
        y = self._check(y)
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants)

    def ad(self, x):
        """Adjoint operator of ``x`` as an Endo on the whole algebra."""
        x = self._check(x)
        return Endo(
            matrix=self.ad_matrix(x),
            subspace=np.eye(self.dim),
            subspace_tag="g",
        )

    def ad_matrix(self, x):
        """Matrix of ad(x) acting on coefficient vectors."""
        x = self._check(x)
        # column j is [x, e_j]
        return np.einsum("i,ijk->kj", x, self.structure_constants)

    def invariant_form(self, x, y):
        """The ad-invariant inner product of two elements."""
        x = self._check(x)
        y = self._check(y)
        return x @ self.gram @ y

    def norm(self, x):
        return float(np.sqrt(np.real(self.invariant_form(np.conj(x), x))))

    def coefficients_of(self, matrix):
        """Express a matrix of the defining realization in the basis."""
        if self.matrices is None:
            raise ValueError("algebra carries no matrix realization")
        coeffs = np.array(
            [-self.kappa * np.real(np.trace(matrix @ m)) for m in self.matrices]
        )
        residual = matrix - np.einsum("i,ijk->jk", coeffs, self.matrices)
        if np.max(np.abs(residual)) > 1e-8 * (1.0 + np.max(np.abs(matrix))):
            raise ValueError("matrix does not lie in the algebra")
        return coeffs

    # -- invariant validation ---------------------------------------------

    def validate(self, tol=1e-12):
        """Check antisymmetry, Jacobi, ad-invariance and positivity.

        Returns the worst residual per named invariant; raises nothing so
        callers can turn failures into reports.
        """
        c = self.structure_constants
        anti = np.max(np.abs(c + np.swapaxes(c, 0, 1)))
        jac = np.max(
            np.abs(
                np.einsum("ijm,mkl->ijkl", c, c)
                + np.einsum("jkm,mil->ijkl", c, c)
                + np.einsum("kim,mjl->ijkl", c, c)
            )
        )
        # <[e_i, e_j], e_k> + <e_j, [e_i, e_k]> = 0
        bg = np.einsum("ijm,mk->ijk", c, self.gram)
        adinv = np.max(np.abs(bg + np.swapaxes(bg, 1, 2)))
        min_eig = float(np.min(np.linalg.eigvalsh(self.gram)))
        return {
            "antisymmetry": float(anti),
            "jacobi": float(jac),
            "ad_invariance": float(adinv),
            "gram_min_eigenvalue": min_eig,
            "passed": anti < tol and jac < tol and adinv < tol and min_eig > 0,
        }


@dataclass
class Endo:
    """An endomorphism of a designated subspace.

    ``subspace`` holds the orthonormal basis of the subspace as columns
    (coefficient vectors in the ambient algebra); ``matrix`` acts on
    coordinates relative to that basis and may be complex.
    """

    matrix: np.ndarray
    subspace: np.ndarray
    subspace_tag: str = "m"

    def __post_init__(self):
        m = np.asarray(self.matrix)
        b = np.asarray(self.subspace)
        if m.shape[0] != m.shape[1] or m.shape[0] != b.shape[1]:
            raise ValueError("matrix dimensions do not match the subspace basis")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, coords):
        return self.matrix @ coords


def _cluster(eigenvalues):
    """Group sorted eigenvalues whose relative gap is below tolerance."""
    groups = []
    start = 0
    for i in range(1, len(eigenvalues) + 1):
        if i == len(eigenvalues) or (
            eigenvalues[i] - eigenvalues[i - 1]
            > _CLUSTER_TOL * (1.0 + abs(eigenvalues[i]))
        ):
            groups.append((start, i))
            start = i
    return groups


def symmetric_spectral(operator, f, coords):
    """Apply a scalar function of a symmetric operator to a vector.

    The operator must be symmetric in the orthonormal coordinates of its
    subspace.  ``f`` is evaluated only on eigenvalues whose eigenspace is
    not orthogonal to ``coords`` (after merging nearly equal eigenvalues),
    so functions with limited domain, such as ``1/t`` or a square root,
    never see irrelevant parts of the spectrum.
    """
    a = np.asarray(operator.matrix)
    if np.iscomplexobj(a) and np.max(np.abs(a.imag)) > 1e-12 * (
        1.0 + np.max(np.abs(a.real))
    ):
        raise ValueError("operator is not real symmetric")
    a = np.real(a)
    a = 0.5 * (a + a.T)
    eigenvalues, vectors = np.linalg.eigh(a)
    coords = np.asarray(coords)
    scale = np.linalg.norm(coords)
    result = np.zeros(coords.shape, dtype=coords.dtype)
    for start, stop in _cluster(eigenvalues):
        block = vectors[:, start:stop]
        projected = block @ (block.conj().T @ coords)
        if np.linalg.norm(projected) <= _SUPPORT_TOL * (scale + 1e-300):
            continue
        mu = float(np.mean(eigenvalues[start:stop]))
        value = f(mu)
        if not np.isfinite(value):
            raise SpectralDomainError("spectral function undefined", mu)
        result = result + value * projected
    return result


# ---------------------------------------------------------------------------
# Matrix realizations of the compact classical families.
# ---------------------------------------------------------------------------


def _elem(n, i, j, value=1.0):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = value
    return m


def _su_matrices(n):
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_elem(n, i, j) - _elem(n, j, i))
            mats.append(1j * (_elem(n, i, j) + _elem(n, j, i)))
    for k in range(n - 1):
        mats.append(1j * (_elem(n, k, k) - _elem(n, k + 1, k + 1)))
    return mats


def _so_matrices(n):
    return [
        _elem(n, i, j) - _elem(n, j, i)
        for i in range(n)
        for j in range(i + 1, n)
    ]


def _sp_matrices(n):
    """Compact symplectic algebra sp(n) as 2n x 2n complex matrices
    [[A, B], [-conj(B), conj(A)]] with A anti-Hermitian, B symmetric."""

    def embed(a, b):
        top = np.hstack([a, b])
        bottom = np.hstack([-np.conj(b), np.conj(a)])
        return np.vstack([top, bottom])

    zero = np.zeros((n, n), dtype=complex)
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(embed(_elem(n, i, j) - _elem(n, j, i), zero))
            mats.append(embed(1j * (_elem(n, i, j) + _elem(n, j, i)), zero))
    for k in range(n):
        mats.append(embed(1j * _elem(n, k, k), zero))
    for i in range(n):
        for j in range(i, n):
            sym = _elem(n, i, j) + _elem(n, j, i) if i != j else _elem(n, i, i)
            mats.append(embed(zero, sym))
            mats.append(embed(zero, 1j * sym))
    return mats


_FAMILIES = {
    "su": (_su_matrices, 2),
    "sp": (_sp_matrices, 1),
    "so": (_so_matrices, 3),
}


def build_algebra(family, n, kappa=1.0):
    """Construct a compact classical Lie algebra with an orthonormal basis.

    The invariant form is -kappa * Re tr(XY) on the defining matrix
    realization; the returned basis is orthonormal for it, so the stored
    gram matrix is the identity.  Structure constants are obtained by
    projecting each bracket onto the basis; the expansion residual must
    stay below 1e-10 or the construction fails.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    builder, n_min = _FAMILIES[family]
    if n < n_min:
        raise ValueError(f"{family}({n}) is not supported (need n >= {n_min})")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    raw = builder(n)
    dim = len(raw)
    ips = np.array(
        [[-kappa * np.real(np.trace(a @ b)) for b in raw] for a in raw]
    )
    lower = np.linalg.cholesky(ips)
    transform = np.linalg.inv(lower)  # rows express orthonormal basis in raw
    mats = np.einsum("ij,jkl->ikl", transform, np.asarray(raw))

    constants = np.zeros((dim, dim, dim))
    worst = 0.0
    for i in range(dim):
        for j in range(i + 1, dim):
            br = mats[i] @ mats[j] - mats[j] @ mats[i]
            coeffs = np.array(
                [-kappa * np.real(np.trace(br @ m)) for m in mats]
            )
            residual = br - np.einsum("k,kab->ab", coeffs, mats)
            worst = max(worst, float(np.max(np.abs(residual))))
            constants[i, j] = coeffs
            constants[j, i] = -coeffs
    if worst > _STRUCTURE_RESIDUAL_TOL:
        raise ValueError(
            f"structure constant extraction residual {worst:.3e} too large"
        )
    labels = tuple(f"{family}{n}_{k}" for k in range(dim))
    return CompactLieAlgebra(
        dim=dim,
        basis_labels=labels,
        structure_constants=constants,
        gram=np.eye(dim),
        matrices=mats,
        kappa=kappa,
    )
