"""Equivariant operator fields on the tangent module.

Everything here is built from the squared adjoint operator
A(w) = (-ad_w^2 - ad_{Iw}^2)|m and spectral functions of it: the inverse
field Upsilon(w) = A(w)^{-1} w and its exact derivative, spectral maps
q_hat / phi_hat, the operator family P_w = (1 + i(a1+a2 I) Ups_*) ·
(1 + c^2 Ups_*^2)^{-1} · B_w together with its real and imaginary parts,
the block almost-complex tensors on the horizontal/vertical splitting,
the canonical 1- and 2-forms pulled back to the group times the tangent
module, and the invariant potential with its antiholomorphic gradient.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from .lie_core import Endo, SpectralDomainError, symmetric_spectral

__all__ = [
    "HKParams",
    "make_params",
    "DomainPoint",
    "make_domain_point",
    "sample_domain_point",
    "adjoint_word",
    "A_op",
    "upsilon",
    "upsilon_star",
    "q_hat",
    "b_scalar",
    "phi_scalar",
    "B_op",
    "P_op",
    "PDecomposition",
    "J_tensor",
    "J_pm",
    "theta_form",
    "omega_form",
    "theta_prime_form",
    "omega_prime_form",
    "potential",
    "PotentialEval",
]

_SINGULAR_TOL = 1e-10


# ---------------------------------------------------------------------------
# Parameter quadruples.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HKParams:
    """An admissible parameter quadruple (a0, a1, a2, eps).

    Admissibility depends on the restricted-root type of the space: type
    C allows any reals with eps = +1; type BC forces a1 = a2 = 0 and
    either a0 > 0 with eps = +/-1 or the quadruple (0, 0, 0, -1).
    """

    a0: float
    a1: float
    a2: float
    eps: int
    type_tag: str

    @property
    def c2(self):
        return self.a1 * self.a1 + self.a2 * self.a2

    @property
    def a_dagger(self):
        """Lower bound for the squared radial coordinates of the domain."""
        if self.c2 > 0:
            return 0.5 * (np.sqrt(self.a0**2 + 4.0 * self.c2) - self.a0)
        return -self.a0

    def as_tuple(self):
        return (self.a0, self.a1, self.a2, self.eps)

    def __str__(self):
        return f"({self.a0:g},{self.a1:g},{self.a2:g},{self.eps:+d})"


def make_params(a0, a1, a2, eps, type_tag):
    """Validate a parameter quadruple against the space type."""
    a0, a1, a2 = float(a0), float(a1), float(a2)
    eps = int(eps)
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    if type_tag == "C":
        if eps != 1:
            raise ValueError("type C admits only eps = +1")
    elif type_tag == "BC":
        if a1 != 0.0 or a2 != 0.0:
            raise ValueError("type BC requires a1 = a2 = 0")
        if a0 < 0.0:
            raise ValueError("type BC requires a0 >= 0")
        if a0 == 0.0 and eps != -1:
            raise ValueError("type BC with a0 = 0 requires eps = -1")
    else:
        raise ValueError(f"unknown type tag {type_tag!r}")
    return HKParams(a0=a0, a1=a1, a2=a2, eps=eps, type_tag=type_tag)


# ---------------------------------------------------------------------------
# Cached adjoint data per pair.
# ---------------------------------------------------------------------------

_PAIR_CACHE = weakref.WeakKeyDictionary()


def _cache(pair):
    data = _PAIR_CACHE.get(pair)
    if data is None:
        alg = pair.algebra
        pm = pair.m_basis
        dm = pair.dim_m
        ad_m = np.stack([alg.ad_matrix(pm[:, i]) for i in range(dm)])
        im_cols = pm @ pair.I  # columns: I(e_i) in ambient coordinates
        ad_im = np.stack([alg.ad_matrix(im_cols[:, i]) for i in range(dm)])
        data = {"ad_m": ad_m, "ad_im": ad_im}
        _PAIR_CACHE[pair] = data
    return data


def _a_data(pair, w):
    """Full adjoint matrices of w, Iw and the restricted squared operator."""
    alg = pair.algebra
    adw = alg.ad_matrix(w)
    adiw = alg.ad_matrix(pair.apply_I(w))
    pm = pair.m_basis
    a = -pm.T @ (adw @ adw + adiw @ adiw) @ pm
    return adw, adiw, 0.5 * (a + a.T)


def A_op(pair, w):
    """The symmetric positive semidefinite operator -(ad_w^2+ad_{Iw}^2)|m."""
    _, _, a = _a_data(pair, w)
    return Endo(matrix=a, subspace=pair.m_basis, subspace_tag="m")


def upsilon(pair, w):
    """Solve A(w) u = w on the spectral support of w; ambient result."""

    def f(t):
        return 1.0 / t if t > _SINGULAR_TOL else np.nan

    a = A_op(pair, w)
    wm = pair.m_coords(w)
    return pair.m_embed(symmetric_spectral(a, f, wm))


def upsilon_star(pair, w):
    """Exact derivative of the inverse field as an operator on m.

    Differentiates w -> A(w)^{-1} w through the resolvent: the
    derivative in direction xi is A^{-1}(xi - (D_xi A)(Upsilon(w)))
    where D_xi A = -(ad_xi ad_w + ad_w ad_xi + ad_{Ixi} ad_{Iw}
    + ad_{Iw} ad_{Ixi}).
    """
    cache = _cache(pair)
    pm = pair.m_basis
    adw, adiw, a = _a_data(pair, w)
    evals, evecs = np.linalg.eigh(a)
    if evals[0] <= _SINGULAR_TOL:
        raise SpectralDomainError(
            "squared adjoint operator is singular", float(evals[0])
        )
    a_inv = (evecs / evals) @ evecs.T
    ups_m = a_inv @ pair.m_coords(w)
    ups = pm @ ups_m

    ad_m = cache["ad_m"]  # (dm, d, d): ad of basis vectors of m
    ad_im = cache["ad_im"]  # ad of their images under I
    u1 = adw @ ups
    u2 = adiw @ ups
    # (D_{e_i} A)(ups), one row per basis direction, all in ambient coords
    t1 = np.einsum("iab,b->ia", ad_m, u1)
    t2 = np.einsum("ab,ib->ia", adw, np.einsum("iab,b->ia", ad_m, ups))
    t3 = np.einsum("iab,b->ia", ad_im, u2)
    t4 = np.einsum("ab,ib->ia", adiw, np.einsum("iab,b->ia", ad_im, ups))
    d_ups = -(t1 + t2 + t3 + t4)  # (dm, d)
    rhs = np.eye(pair.dim_m) - d_ups @ pm  # row i = e_i - proj(D_i ups)
    matrix = a_inv @ rhs.T
    return Endo(matrix=matrix, subspace=pm, subspace_tag="m")


def q_hat(pair, w, q, q_prime=None):
    """Spectral map q(A(w)) w and its radial derivative.

    The radial derivative (the derivative of s -> q_hat(s w) at s = 1)
    acts on the same eigenvectors with coefficient q(t) + 2 t q'(t);
    it is returned only when ``q_prime`` is given.
    """
    a = A_op(pair, w)
    wm = pair.m_coords(w)
    value = pair.m_embed(symmetric_spectral(a, q, wm))
    if q_prime is None:
        return value, None
    radial = pair.m_embed(
        symmetric_spectral(a, lambda t: q(t) + 2.0 * t * q_prime(t), wm)
    )
    return value, radial


# ---------------------------------------------------------------------------
# Scalar profiles.
# ---------------------------------------------------------------------------


def b_scalar(x, params):
    """The radial profile sqrt(a0 + x^2 - c^2/x^2) of the operator family."""
    x = float(x)
    radicand = params.a0 + x * x
    if params.c2 > 0:
        radicand -= params.c2 / (x * x)
    if radicand <= 0:
        raise SpectralDomainError("radial profile undefined", radicand)
    return float(np.sqrt(radicand))


def phi_scalar(t, params):
    """(sqrt(a0 + t - c^2/t) - eps*sqrt(|a0|)) / t, stable near t = 0."""
    shift = params.eps * np.sqrt(abs(params.a0))
    if params.c2 == 0 and params.eps == 1 and params.a0 >= 0:
        # same quantity without the cancellation of nearly equal roots
        return 1.0 / (np.sqrt(params.a0 + t) + np.sqrt(params.a0))
    radicand = params.a0 + t - params.c2 / t
    if radicand < 0:
        raise SpectralDomainError("operator profile undefined", radicand)
    return (np.sqrt(radicand) - shift) / t


def B_op(pair, w, params):
    """The real symmetric factor of the operator family.

    Computed as I ad([I phi_hat(w), w])|m + eps sqrt(|a0|) Id with
    phi_hat the spectral map of the profile ``phi_scalar``.
    """
    phihat, _ = q_hat(pair, w, lambda t: phi_scalar(t, params))
    u = pair.algebra.bracket(pair.apply_I(phihat), w)
    ad_u = pair.m_basis.T @ pair.algebra.ad_matrix(u) @ pair.m_basis
    matrix = pair.I @ ad_u + params.eps * np.sqrt(abs(params.a0)) * np.eye(
        pair.dim_m
    )
    return Endo(matrix=matrix, subspace=pair.m_basis, subspace_tag="m")


@dataclass
class PDecomposition:
    """The operator family at a point with its real/imaginary parts."""

    P: np.ndarray  # complex (dm, dm)
    R: np.ndarray  # real (dm, dm)
    S: np.ndarray  # real (dm, dm)
    B: np.ndarray  # real (dm, dm)
    subspace: np.ndarray = field(repr=False, default=None)


def P_op(pair, w, params):
    """Evaluate the full operator family at a tangent point.

    P = (1 - i(a1 + a2 I) U) (1 + c^2 U^2)^{-1} B with U the derivative
    of the inverse field; reduces exactly to B when a1 = a2 = 0.  The
    sign of the imaginary factor fixes the orientation of the (a1, a2)
    parameter plane; the opposite choice gives the same family under
    (a1, a2) -> (-a1, -a2).
    """
    b = B_op(pair, w, params).matrix
    dm = pair.dim_m
    if params.c2 == 0:
        return PDecomposition(
            P=b.astype(complex),
            R=b.copy(),
            S=np.zeros((dm, dm)),
            B=b,
            subspace=pair.m_basis,
        )
    u = upsilon_star(pair, w).matrix
    core = np.linalg.solve(np.eye(dm) + params.c2 * (u @ u), b)
    p = (np.eye(dm) - 1j * (params.a1 * np.eye(dm) + params.a2 * pair.I) @ u) @ core
    return PDecomposition(
        P=p,
        R=np.real(p),
        S=np.imag(p),
        B=b,
        subspace=pair.m_basis,
    )


# ---------------------------------------------------------------------------
# Block tensors and pullback forms.
# ---------------------------------------------------------------------------


def J_tensor(R, S):
    """Block almost-complex tensor of the operator family.

    Acts on horizontal + vertical coordinates as
    [[-R^{-1}S, -R^{-1}], [R + S R^{-1} S, S R^{-1}]].
    """
    r_inv = np.linalg.inv(R)
    sr = S @ r_inv
    return np.block([[-r_inv @ S, -r_inv], [R + S @ r_inv @ S, sr]])


def J_pm(pair, sign):
    """diag(I, +/-I) on horizontal + vertical coordinates."""
    dm = pair.dim_m
    out = np.zeros((2 * dm, 2 * dm))
    out[:dm, :dm] = pair.I
    out[dm:, dm:] = sign * pair.I
    return out


def theta_form(pair, w, xi):
    """Canonical 1-form pulled back: <w, xi> for xi in the full algebra."""
    return np.dot(w, xi)


def omega_form(pair, w, arg1, arg2):
    """Canonical 2-form pulled back, extended bilinearly to complex args."""
    xi1, u1 = arg1
    xi2, u2 = arg2
    return (
        np.dot(xi2, u1)
        - np.dot(xi1, u2)
        - np.dot(w, pair.algebra.bracket(xi1, xi2))
    )


def theta_prime_form(pair, w, xi):
    """The rotated 1-form <Iw, xi>."""
    return np.dot(pair.apply_I(w), xi)


def omega_prime_form(pair, arg1, arg2):
    """The rotated 2-form on horizontal + vertical arguments from m."""
    xi1, u1 = arg1
    xi2, u2 = arg2
    return np.dot(xi2, pair.apply_I(u1)) - np.dot(xi1, pair.apply_I(u2))


# ---------------------------------------------------------------------------
# Domain points.
# ---------------------------------------------------------------------------


@dataclass
class DomainPoint:
    """A tangent point w = Ad_k(sum x_j X_j) with its generating data."""

    pair: object
    x: np.ndarray
    k_word: list
    w: np.ndarray

    def in_domain(self, params):
        bound = params.a_dagger
        if np.any(self.x**2 <= bound):
            return False
        if params.a0 == 0 and params.eps == -1 and np.any(self.x == 0):
            return False
        return True


def adjoint_word(pair, k_word):
    """Product of exp(ad zeta) over the word, as a matrix on the algebra."""
    out = np.eye(pair.algebra.dim)
    for zeta in k_word:
        out = expm(pair.algebra.ad_matrix(zeta)) @ out
    return out


def make_domain_point(pair, sos, x, k_word=()):
    x = np.asarray(x, dtype=float)
    w0 = sos.a_element(x)
    w = adjoint_word(pair, list(k_word)) @ w0
    return DomainPoint(pair=pair, x=x, k_word=list(k_word), w=w)


def sample_domain_point(pair, sos, params, rng, word_length=1, spread=3.75):
    """Random point of the parameter domain, known to lie inside it.

    Squared radial coordinates are drawn from
    [max(a_dagger, 0) + 0.25, max(a_dagger, 0) + 0.25 + spread] with
    random signs; the margin keeps finite-difference probes inside the
    domain.  The group word consists of random isotropy directions.
    """
    lo = max(params.a_dagger, 0.0) + 0.25
    sq = rng.uniform(lo, lo + spread, size=sos.rank)
    x = rng.choice([-1.0, 1.0], size=sos.rank) * np.sqrt(sq)
    word = [
        pair.k_embed(rng.standard_normal(pair.dim_k))
        / np.sqrt(pair.dim_k)
        for _ in range(word_length)
    ]
    return make_domain_point(pair, sos, x, word)


# ---------------------------------------------------------------------------
# Potential.
# ---------------------------------------------------------------------------


@dataclass
class PotentialEval:
    """Potential value and its antiholomorphic gradient covector.

    ``form(eta, u)`` evaluates the gradient 1-form on a horizontal
    argument eta (full algebra) and a vertical argument u (tangent
    module); ``base_point`` records the quadrature constant.
    """

    Q: float
    vec_h: np.ndarray  # complex ambient covector, horizontal slot
    vec_v: np.ndarray  # complex ambient covector, vertical slot
    base_point: float

    def form(self, eta, u):
        return np.dot(self.vec_h, eta) + np.dot(self.vec_v, u)


def potential_profile(params):
    """The scalar profile q and its derivative for the potential.

    q(t) = F(t) / (2t) with F the antiderivative of
    1/sqrt(a0 + s - a1^2/s) based at t0 = max(1, a_dagger + 1); the base
    point only shifts q by a closed-form term that cancels in every
    check.  Requires a2 = 0.
    """
    if params.a2 != 0:
        raise ValueError("potential requires a2 = 0")
    a0, a1 = params.a0, params.a1
    t0 = max(1.0, params.a_dagger + 1.0)

    def integrand(s):
        radicand = a0 + s - (a1 * a1) / s if a1 != 0 else a0 + s
        if radicand <= 0:
            raise SpectralDomainError("potential integrand undefined", radicand)
        return 1.0 / np.sqrt(radicand)

    def accumulated(t):
        value, err = quad(
            integrand, t0, t, limit=200, epsabs=1e-12, epsrel=1e-12
        )
        if not np.isfinite(value) or err > 1e-8 * (1.0 + abs(value)):
            raise SpectralDomainError("quadrature failed", t)
        return value

    def q(t):
        return accumulated(t) / (2.0 * t)

    def q_prime(t):
        return integrand(t) / (2.0 * t) - accumulated(t) / (2.0 * t * t)

    return q, q_prime, t0


def potential(pair, w, params):
    """Invariant potential at w and its antiholomorphic gradient."""
    q, q_prime, t0 = potential_profile(params)
    value, radial = q_hat(pair, w, q, q_prime)
    big_q = float(np.dot(value, w))
    w_prime = value + radial
    dec = P_op(pair, w, params)
    dm = pair.dim_m
    sr = dec.S @ np.linalg.inv(dec.R)
    w_prime_m = pair.m_coords(w_prime)
    vec_h = 0.5j * ((np.eye(dm) + sr @ sr) @ dec.R @ w_prime_m)
    vec_v = 0.5 * ((np.eye(dm) + 1j * sr) @ w_prime_m)
    return PotentialEval(
        Q=big_q,
        vec_h=pair.m_basis @ vec_h,
        vec_v=pair.m_basis @ vec_v,
        base_point=t0,
    )
