"""Hermitian orthogonal symmetric Lie algebras for the compact classical
families.

A space is specified by a short string:

    "su:p,q"  ->  su(p+q) / s(u(p) + u(q))
    "sp:n"    ->  sp(n) / u(n)
    "so*:n"   ->  so(2n) / u(n)
    "soB:n"   ->  so(n+2) / (so(2) + so(n))

The isotropy subalgebra is recovered as the centralizer of the u(1)
center generator Z0 of the defining realization, the tangent model m as
its orthogonal complement, and the invariant complex structure as
ad(Z0) restricted to m.  The inner product is normalized so that the
distinguished su(2)-triple vectors selected later have unit length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

import numpy as np
from scipy.linalg import expm

from .lie_core import CompactLieAlgebra, Endo, build_algebra

__all__ = [
    "SpaceSpec",
    "parse_space",
    "HermitianPair",
    "Root",
    "RootDatum",
    "build_pair",
    "compute_root_datum",
    "check_I_in_AdK",
]

_KERNEL_TOL = 1e-9
_COVECTOR_TOL = 1e-8


@dataclass(frozen=True, order=True)
class SpaceSpec:
    family: str
    params: tuple

    def __str__(self):
        return f"{self.family}:{','.join(str(p) for p in self.params)}"

    @property
    def label(self):
        p = self.params
        if self.family == "su":
            return f"su({p[0] + p[1]})/s(u({p[0]})+u({p[1]}))"
        if self.family == "sp":
            return f"sp({p[0]})/u({p[0]})"
        if self.family == "so*":
            return f"so({2 * p[0]})/u({p[0]})"
        return f"so({p[0] + 2})/(so(2)+so({p[0]}))"


def parse_space(text):
    """Parse a space specification string; round-trips via str()."""
    if isinstance(text, SpaceSpec):
        return text
    try:
        family, _, rest = text.partition(":")
        params = tuple(int(p) for p in rest.split(","))
    except ValueError:
        raise ValueError(f"malformed space spec {text!r}") from None
    if family == "su":
        if len(params) != 2 or min(params) < 1:
            raise ValueError(f"su spec needs p,q >= 1, got {text!r}")
    elif family == "sp":
        if len(params) != 1 or params[0] < 1:
            raise ValueError(f"sp spec needs n >= 1, got {text!r}")
    elif family == "so*":
        if len(params) != 1 or params[0] < 3:
            raise ValueError(f"so* spec needs n >= 3, got {text!r}")
    elif family == "soB":
        if len(params) != 1 or params[0] < 3:
            raise ValueError(f"soB spec needs n >= 3, got {text!r}")
    else:
        raise ValueError(f"unknown space family in {text!r}")
    return SpaceSpec(family=family, params=params)


@dataclass(frozen=True, eq=False)
class HermitianPair:
    """The triple (g, k, I) with the Cartan splitting g = k + m."""

    algebra: CompactLieAlgebra
    space: SpaceSpec
    k_basis: np.ndarray  # (dim, dim_k), orthonormal columns
    m_basis: np.ndarray  # (dim, dim_m), orthonormal columns
    Z0: np.ndarray
    I: np.ndarray = field(repr=False, default=None)  # (dim_m, dim_m)

    @property
    def dim_k(self):
        return self.k_basis.shape[1]

    @property
    def dim_m(self):
        return self.m_basis.shape[1]

    def m_coords(self, x):
        return self.m_basis.T @ x

    def m_embed(self, coords):
        return self.m_basis @ coords

    def k_coords(self, x):
        return self.k_basis.T @ x

    def k_embed(self, coords):
        return self.k_basis @ coords

    def I_endo(self):
        return Endo(matrix=self.I, subspace=self.m_basis, subspace_tag="m")

    def apply_I(self, x):
        """Apply the complex structure to an element of m (ambient coords)."""
        return self.m_basis @ (self.I @ (self.m_basis.T @ x))


@dataclass
class Root:
    """One positive root of g^C with its normalized triple.

    ``covector`` stores alpha(t_j)/i over the orthonormal basis of the
    Cartan subalgebra (first basis vector parallel to Z0).  ``E``/``Eneg``
    are the root vectors with [H, E(+/-)] = +/-2 E(+/-) and
    [E, Eneg] = -H; X, Y, T are the real su(2)-triple vectors.
    """

    covector: np.ndarray
    compact: bool
    E: np.ndarray
    Eneg: np.ndarray
    H: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    T: np.ndarray


@dataclass
class RootDatum:
    pair: HermitianPair
    t_basis: np.ndarray  # (dim, rank), orthonormal columns, col 0 ~ Z0
    positive: list

    @property
    def rank(self):
        return self.t_basis.shape[1]

    @property
    def noncompact_positive(self):
        return [r for r in self.positive if not r.compact]

    @property
    def compact_positive(self):
        return [r for r in self.positive if r.compact]

    def all_covectors(self):
        pos = np.array([r.covector for r in self.positive])
        return np.vstack([pos, -pos])

    def is_root(self, covector, tol=1e-6):
        table = self.all_covectors()
        return bool(
            np.min(np.linalg.norm(table - covector, axis=1)) < tol
        )


# ---------------------------------------------------------------------------
# Matrix realizations of Z0 per family.
# ---------------------------------------------------------------------------


def _z0_matrix(spec):
    if spec.family == "su":
        p, q = spec.params
        n = p + q
        d = np.concatenate([np.full(p, q / n), np.full(q, -p / n)])
        return 1j * np.diag(d)
    if spec.family == "sp":
        n = spec.params[0]
        return np.diag(
            np.concatenate([np.full(n, 0.5j), np.full(n, -0.5j)])
        )
    if spec.family == "so*":
        n = spec.params[0]
        j0 = np.zeros((2 * n, 2 * n), dtype=complex)
        j0[:n, n:] = -np.eye(n)
        j0[n:, :n] = np.eye(n)
        return 0.5 * j0
    n = spec.params[0]
    z = np.zeros((n + 2, n + 2), dtype=complex)
    z[0, 1] = 1.0
    z[1, 0] = -1.0
    return z


def _base_algebra(spec, kappa):
    if spec.family == "su":
        return build_algebra("su", sum(spec.params), kappa=kappa)
    if spec.family == "sp":
        return build_algebra("sp", spec.params[0], kappa=kappa)
    if spec.family == "so*":
        return build_algebra("so", 2 * spec.params[0], kappa=kappa)
    return build_algebra("so", spec.params[0] + 2, kappa=kappa)


def _assemble(spec, algebra):
    z0 = algebra.coefficients_of(_z0_matrix(spec))
    ad_z0 = algebra.ad_matrix(z0)
    _, s, vt = np.linalg.svd(ad_z0)
    kernel_mask = s < _KERNEL_TOL * (1.0 + s[0])
    k_basis = vt[kernel_mask].T
    m_basis = vt[~kernel_mask].T
    i_matrix = m_basis.T @ ad_z0 @ m_basis
    defect = np.max(np.abs(i_matrix @ i_matrix + np.eye(m_basis.shape[1])))
    if defect > 1e-10:
        raise ValueError(
            f"ad(Z0)|m does not square to -Id (defect {defect:.3e})"
        )
    return HermitianPair(
        algebra=algebra,
        space=spec,
        k_basis=k_basis,
        m_basis=m_basis,
        Z0=z0,
        I=i_matrix,
    )


# ---------------------------------------------------------------------------
# Root datum.
# ---------------------------------------------------------------------------


def _cartan_of_k(pair, rng):
    """Orthonormal basis of a Cartan subalgebra of k containing Z0.

    Grown greedily: starting from Z0, repeatedly pick a random element of
    the centralizer of the current span inside k until the centralizer
    stabilizes.
    """
    alg = pair.algebra
    t_vecs = [pair.Z0 / alg.norm(pair.Z0)]
    for _ in range(alg.dim):
        stacked = np.vstack(
            [alg.ad_matrix(t) @ pair.k_basis for t in t_vecs]
        )
        _, s, vt = np.linalg.svd(stacked)
        tol = _KERNEL_TOL * (1.0 + (s[0] if len(s) else 0.0))
        null_dim = int(np.sum(s < tol)) + max(
            0, pair.dim_k - stacked.shape[0]
        )
        basis = vt[len(s) - int(np.sum(s < tol)):].T if np.sum(s < tol) else None
        # null space columns of the stacked map, in k coordinates
        kernel = vt[s.shape[0] - null_dim:].T if null_dim else np.zeros(
            (pair.dim_k, 0)
        )
        if null_dim == len(t_vecs):
            return np.column_stack(t_vecs)
        for _attempt in range(20):
            candidate = pair.k_embed(kernel @ rng.standard_normal(null_dim))
            for t in t_vecs:
                candidate = candidate - alg.invariant_form(t, candidate) * t
            nrm = alg.norm(candidate)
            if nrm > 1e-8:
                t_vecs.append(candidate / nrm)
                break
        else:
            raise RuntimeError("failed to extend the Cartan subalgebra")
    raise RuntimeError("Cartan subalgebra extension did not stabilize")


def compute_root_datum(pair, seed=0):
    """Diagonalize ad over a Cartan subalgebra of k and normalize triples."""
    alg = pair.algebra
    for attempt in range(6):
        rng = np.random.default_rng((seed, attempt))
        try:
            datum = _root_datum_once(pair, rng)
        except _DegenerateSplit:
            continue
        return datum
    raise RuntimeError("root decomposition failed for every retry seed")


class _DegenerateSplit(Exception):
    pass


def _root_datum_once(pair, rng):
    alg = pair.algebra
    t_basis = _cartan_of_k(pair, rng)
    rank = t_basis.shape[1]
    ad_t = [alg.ad_matrix(t_basis[:, j]) for j in range(rank)]

    weights = rng.standard_normal(rank)
    generic = 1j * sum(w * a for w, a in zip(weights, ad_t))
    eigenvalues, vectors = np.linalg.eigh(generic)
    kernel_count = int(np.sum(np.abs(eigenvalues) < 1e-8))
    if kernel_count != rank:
        raise _DegenerateSplit

    positive = []
    for idx in np.argsort(eigenvalues):
        if abs(eigenvalues[idx]) < 1e-8:
            continue
        v = vectors[:, idx]
        covector = np.empty(rank)
        for j, a in enumerate(ad_t):
            image = a @ v
            val = np.vdot(v, image)
            if np.linalg.norm(image - val * v) > 1e-7:
                raise _DegenerateSplit
            covector[j] = val.imag
        if not _lex_positive(covector):
            continue
        positive.append(_normalize_triple(pair, v, covector))
    expected = (alg.dim - rank) // 2
    if len(positive) != expected:
        raise _DegenerateSplit
    positive.sort(key=cmp_to_key(_covector_cmp))
    return RootDatum(pair=pair, t_basis=t_basis, positive=positive)


def _covector_cmp(a, b):
    """Descending lexicographic comparison, robust to rounding noise.

    Coordinates agreeing to within tolerance are treated as equal so the
    tie is broken by the next coordinate rather than by noise.
    """
    for x, y in zip(a.covector, b.covector):
        if abs(x - y) > _COVECTOR_TOL:
            return -1 if x > y else 1
    return 0


def _lex_positive(covector):
    for value in covector:
        if abs(value) > _COVECTOR_TOL:
            return value > 0
    return False


def _normalize_triple(pair, v, covector):
    """Fix scale and phase of a root vector and build its su(2) triple."""
    alg = pair.algebra
    h0 = -alg.bracket(v, np.conj(v))
    aval = np.vdot(v, alg.bracket(h0, v))
    if not aval.real > 0 or abs(aval.imag) > 1e-8 * abs(aval.real):
        raise _DegenerateSplit
    e = np.sqrt(2.0 / aval.real) * v
    pivot = int(np.argmax(np.abs(e)))
    phase = e[pivot] / abs(e[pivot])
    e = e / phase
    e_neg = np.conj(e)
    h = -alg.bracket(e, e_neg)
    x = np.real(e)
    y = -np.imag(e)
    t = np.real(0.5j * h)
    z0_value = covector[0] * alg.norm(pair.Z0)  # alpha(Z0)/i
    compact = abs(z0_value) < 1e-7
    return Root(
        covector=covector,
        compact=compact,
        E=e,
        Eneg=e_neg,
        H=h,
        X=x,
        Y=y,
        T=t,
    )


def build_pair(space, seed=0):
    """Construct the Hermitian pair with the unit-triple normalization.

    A first pass with kappa = 1 locates the highest noncompact root; the
    form is then rescaled so its triple vector X has unit length, which
    pins down the coordinates used by the rank-one closed forms.
    """
    spec = parse_space(space)
    pair1 = _assemble(spec, _base_algebra(spec, kappa=1.0))
    datum1 = compute_root_datum(pair1, seed=seed)
    beta1 = datum1.noncompact_positive[0]
    scale = pair1.algebra.invariant_form(beta1.X, beta1.X)
    return _assemble(spec, _base_algebra(spec, kappa=1.0 / scale))


def check_I_in_AdK(pair, z0_scale=1.0):
    """Sup-norm distance between exp((pi/2) ad(Z0))|m and I.

    ``z0_scale`` rescales Z0 before exponentiating; values other than 1
    serve as a negative control.
    """
    ad_z0 = pair.m_basis.T @ pair.algebra.ad_matrix(pair.Z0) @ pair.m_basis
    rotation = expm((np.pi / 2.0) * z0_scale * ad_z0)
    return float(np.max(np.abs(rotation - pair.I)))
