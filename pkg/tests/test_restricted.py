import itertools

import numpy as np
import pytest

from hksym.fields import make_params
from hksym.restricted import MooreViolation, check_adjoint_square_identity, check_centralizer, k_partner
from hksym.verify import build_context

# Classified restricted-root data: (space, type, {half tuple: multiplicity}).
EXPECTED_TABLES = {
    "su:1,1": ("C", {(2,): 1}),
    "su:1,2": ("BC", {(2,): 1, (1,): 2}),
    "su:2,2": ("C", {(2, 0): 1, (1, 1): 2, (1, -1): 2, (0, 2): 1}),
    "sp:2": ("C", {(2, 0): 1, (1, 1): 1, (1, -1): 1, (0, 2): 1}),
    "su:2,3": (
        "BC",
        {(2, 0): 1, (1, 1): 2, (1, 0): 2, (1, -1): 2, (0, 2): 1, (0, 1): 2},
    ),
    "so*:3": ("BC", {(2,): 1, (1,): 4}),
    "so*:4": ("C", {(2, 0): 1, (1, 1): 4, (1, -1): 4, (0, 2): 1}),
    "soB:3": ("C", {(2, 0): 1, (1, 1): 1, (1, -1): 1, (0, 2): 1}),
    "soB:4": ("C", {(2, 0): 1, (1, 1): 2, (1, -1): 2, (0, 2): 1}),
}


def brute_force_restricted_roots(ctx):
    """Independent joint diagonalization by iterative eigenspace splitting.

    Splits the tangent module by the eigenvalues of each squared Cartan
    adjoint operator separately, then reads off signs from the mixed
    products; no random linear combinations, no snapping heuristics.
    """
    pair, sos = ctx.pair, ctx.sos
    alg = pair.algebra
    pm = pair.m_basis
    r = sos.rank
    ads = [alg.ad_matrix(sos.X[:, j]) for j in range(r)]
    # the squared operators fix the magnitudes |c_j|; the symmetrized
    # products fix the relative signs via the eigenvalue -c_p c_k
    ops = [-pm.T @ ad @ ad @ pm for ad in ads]
    pairs = list(itertools.combinations(range(r), 2))
    for p, k in pairs:
        prod = pm.T @ (ads[p] @ ads[k] + ads[k] @ ads[p]) @ pm
        ops.append(0.5 * prod)

    subspaces = [np.eye(pair.dim_m)]
    values = [()]
    for op in ops:
        new_subspaces, new_values = [], []
        for basis, vals in zip(subspaces, values):
            block = basis.T @ op @ basis
            evals, evecs = np.linalg.eigh(0.5 * (block + block.T))
            start = 0
            for stop in range(1, len(evals) + 1):
                if stop == len(evals) or evals[stop] - evals[stop - 1] > 1e-6:
                    vecs = basis @ evecs[:, start:stop]
                    mu = float(np.mean(evals[start:stop]))
                    new_subspaces.append(vecs)
                    new_values.append(vals + (mu,))
                    start = stop
        subspaces, values = new_subspaces, new_values

    table = {}
    for basis, vals in zip(subspaces, values):
        mags = [np.sqrt(max(v, 0.0)) for v in vals[:r]]
        doubled = [int(round(2.0 * c)) for c in mags]
        assert max(abs(2.0 * c - d) for c, d in zip(mags, doubled)) < 1e-6
        nonzero = [j for j, d in enumerate(doubled) if d != 0]
        if not nonzero:
            continue  # the Cartan subspace itself
        lead = nonzero[0]
        signs = {lead: 1}
        for idx, (p, k) in enumerate(pairs):
            prod_eig = -vals[r + idx]  # equals c_p c_k on this subspace
            if p == lead and k in nonzero:
                signs[k] = 1 if prod_eig > 0 else -1
        key = tuple(
            signs.get(j, 1) * doubled[j] if j in nonzero else 0
            for j in range(r)
        )
        first = next(v for v in key if v != 0)
        if first < 0:
            key = tuple(-v for v in key)
        table[key] = table.get(key, 0) + basis.shape[1]
    return table


@pytest.mark.parametrize("space", sorted(EXPECTED_TABLES))
def test_tables_match_classification(space):
    ctx = build_context(space)
    expected_type, expected_mults = EXPECTED_TABLES[space]
    assert ctx.rrs.type_tag == expected_type
    got = {r.half_coeffs: r.multiplicity for r in ctx.rrs.roots}
    assert got == expected_mults


@pytest.mark.parametrize("space", sorted(EXPECTED_TABLES))
def test_brute_force_oracle(space):
    ctx = build_context(space)
    oracle = brute_force_restricted_roots(ctx)
    # both sides use the same positive representative (first nonzero
    # coordinate positive), so the tables must agree exactly
    expected = {r.half_coeffs: r.multiplicity for r in ctx.rrs.roots}
    assert oracle == expected


def test_cascade_is_maximal_strongly_orthogonal(ctx):
    datum, sos = ctx.datum, ctx.sos
    noncompact = datum.noncompact_positive

    def strongly_orthogonal(a, b):
        for sign in (1.0, -1.0):
            combo = a.covector + sign * b.covector
            if np.linalg.norm(combo) < 1e-8 or datum.is_root(combo):
                return False
        return True

    # brute-force search over all subsets of noncompact positive roots
    best = 0
    for size in range(1, len(noncompact) + 1):
        for subset in itertools.combinations(noncompact, size):
            if all(
                strongly_orthogonal(a, b)
                for a, b in itertools.combinations(subset, 2)
            ):
                best = max(best, size)
    assert sos.rank == best
    for a, b in itertools.combinations(sos.betas, 2):
        assert strongly_orthogonal(a, b)


def test_cascade_triples(ctx):
    pair, sos = ctx.pair, ctx.sos
    alg = pair.algebra
    r = sos.rank
    for j in range(r):
        assert alg.norm(sos.X[:, j]) == pytest.approx(1.0, abs=1e-10)
        for k in range(r):
            delta = 1.0 if j == k else 0.0
            assert np.max(np.abs(
                alg.bracket(sos.X[:, j], sos.Y[:, k]) - delta * sos.T[:, j]
            )) < 1e-10
            assert np.max(np.abs(
                alg.bracket(sos.T[:, j], sos.X[:, k]) - delta * sos.Y[:, j]
            )) < 1e-10


def test_root_spaces_are_joint_eigenspaces(ctx, rng):
    pair, sos, rrs = ctx.pair, ctx.sos, ctx.rrs
    alg = pair.algebra
    x = rng.uniform(0.5, 2.0, size=sos.rank)
    w = sos.a_element(x)
    adw = alg.ad_matrix(w)
    for root in rrs.roots:
        lam = root.value(x)
        for col in root.m_basis.T:
            assert np.max(np.abs(adw @ (adw @ col) + lam**2 * col)) < 1e-8
        for col in root.k_basis.T:
            assert np.max(np.abs(adw @ (adw @ col) + lam**2 * col)) < 1e-8


def test_partner_map_is_involutive(ctx):
    rrs = ctx.rrs
    for root in rrs.roots:
        if root.partner is None:
            continue
        other = rrs.find(root.partner)
        assert other is not None
        assert other.partner == root.half_coeffs
        assert other.multiplicity == root.multiplicity


def test_partner_is_complex_rotation(ctx):
    pair, rrs = ctx.pair, ctx.rrs
    for root in rrs.roots:
        rotated = pair.m_basis @ (
            pair.I @ (pair.m_basis.T @ root.m_basis)
        )
        if root.partner is None:
            target = np.column_stack(
                [ctx.sos.X, pair.m_basis @ (pair.I @ pair.m_coords(ctx.sos.X))]
            )
        else:
            target = rrs.find(root.partner).m_basis
        proj = target @ np.linalg.lstsq(target, rotated, rcond=None)[0]
        assert np.max(np.abs(rotated - proj)) < 1e-8


def test_k_partner_relations(ctx):
    pair, rrs = ctx.pair, ctx.rrs
    alg = pair.algebra
    for root in rrs.roots:
        xi = root.m_basis[:, 0]
        zeta = k_partner(rrs, xi)
        coeffs = root.coeffs()
        for j in range(rrs.rank):
            assert np.max(np.abs(
                alg.bracket(rrs.cartan.X[:, j], xi) + coeffs[j] * zeta
            )) < 1e-10
            assert np.max(np.abs(
                alg.bracket(rrs.cartan.X[:, j], zeta) - coeffs[j] * xi
            )) < 1e-10


def test_k_partner_rejects_mixed_vectors(ctx):
    rrs = ctx.rrs
    if len(rrs.roots) < 2:
        pytest.skip("needs two distinct root spaces")
    mixed = rrs.roots[0].m_basis[:, 0] + rrs.roots[1].m_basis[:, 0]
    with pytest.raises(ValueError):
        k_partner(rrs, mixed)


def test_squared_adjoint_identity(ctx, rng):
    pair = ctx.pair
    ws = [pair.m_embed(rng.standard_normal(pair.dim_m)) for _ in range(20)]
    report = check_adjoint_square_identity(pair, ws)
    assert report["identity"] < 1e-10
    assert report["commutator"] < 1e-10


def test_centralizer(ctx):
    report = check_centralizer(ctx.pair, ctx.rrs)
    assert report["residual"] < 1e-9


def test_sigma_pp(ctx):
    for root in ctx.rrs.sigma_pp:
        assert min(root.half_coeffs) >= 0


def test_type_tag_drives_params(ctx):
    tag = ctx.rrs.type_tag
    if tag == "BC":
        with pytest.raises(ValueError):
            make_params(1.0, 0.1, 0.0, 1, tag)
        with pytest.raises(ValueError):
            make_params(-1.0, 0.0, 0.0, 1, tag)
        make_params(0.0, 0.0, 0.0, -1, tag)
    else:
        with pytest.raises(ValueError):
            make_params(1.0, 0.0, 0.0, -1, tag)
        make_params(-1.0, 0.5, 0.5, 1, tag)


def test_moore_violation_is_exported():
    assert issubclass(MooreViolation, RuntimeError)
