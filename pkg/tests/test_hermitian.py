import numpy as np
import pytest

from hksym.hermitian import (
    build_pair,
    check_I_in_AdK,
    compute_root_datum,
    parse_space,
)


@pytest.mark.parametrize(
    "text,family,expected",
    [
        ("su:1,2", "su", (1, 2)),
        ("sp:2", "sp", (2,)),
        ("so*:3", "so*", (3,)),
        ("soB:4", "soB", (4,)),
    ],
)
def test_parse_space(text, family, expected):
    spec = parse_space(text)
    assert spec.family == family
    assert spec.params == expected
    assert parse_space(str(spec)) == spec


@pytest.mark.parametrize(
    "bad", ["su:0,2", "su:2", "sp:0", "so*:1", "xx:3", "su:a,b", ""]
)
def test_parse_space_rejects(bad):
    with pytest.raises(ValueError):
        parse_space(bad)


def test_splitting_dimensions(ctx):
    pair = ctx.pair
    assert pair.dim_k + pair.dim_m == pair.algebra.dim
    # orthogonality of the two factors
    assert np.max(np.abs(pair.k_basis.T @ pair.m_basis)) < 1e-12


def test_bracket_inclusions(ctx, rng):
    pair = ctx.pair
    alg = pair.algebra
    pk, pm = pair.k_basis, pair.m_basis
    for _ in range(10):
        z1 = pair.k_embed(rng.standard_normal(pair.dim_k))
        z2 = pair.k_embed(rng.standard_normal(pair.dim_k))
        m1 = pair.m_embed(rng.standard_normal(pair.dim_m))
        m2 = pair.m_embed(rng.standard_normal(pair.dim_m))
        assert np.max(np.abs(pm.T @ alg.bracket(z1, z2))) < 1e-10
        assert np.max(np.abs(pk.T @ alg.bracket(z1, m1))) < 1e-10
        assert np.max(np.abs(pm.T @ alg.bracket(m1, m2))) < 1e-10


def test_complex_structure(ctx, rng):
    pair = ctx.pair
    alg = pair.algebra
    assert np.max(np.abs(pair.I @ pair.I + np.eye(pair.dim_m))) < 1e-12
    # orthogonality of I
    assert np.max(np.abs(pair.I.T @ pair.I - np.eye(pair.dim_m))) < 1e-12
    # bracket compatibility
    xi = pair.m_embed(rng.standard_normal(pair.dim_m))
    eta = pair.m_embed(rng.standard_normal(pair.dim_m))
    zeta = pair.k_embed(rng.standard_normal(pair.dim_k))
    assert np.max(np.abs(
        alg.bracket(pair.apply_I(xi), pair.apply_I(eta))
        - alg.bracket(xi, eta)
    )) < 1e-10
    assert np.max(np.abs(
        pair.apply_I(alg.bracket(zeta, eta))
        - alg.bracket(zeta, pair.apply_I(eta))
    )) < 1e-10


def test_z0_central_in_k(ctx):
    pair = ctx.pair
    ad_z0 = pair.algebra.ad_matrix(pair.Z0)
    assert np.max(np.abs(ad_z0 @ pair.k_basis)) < 1e-10


def test_rotation_generates_I(ctx):
    assert check_I_in_AdK(ctx.pair) < 1e-10
    assert check_I_in_AdK(ctx.pair, z0_scale=1.1) > 1e-2


def test_root_counts(ctx):
    pair, datum = ctx.pair, ctx.datum
    assert 2 * len(datum.positive) + datum.rank == pair.algebra.dim
    assert 2 * len(datum.noncompact_positive) == pair.dim_m


def test_root_datum_deterministic():
    pair = build_pair("su:2,2")
    d1 = compute_root_datum(pair, seed=0)
    d2 = compute_root_datum(pair, seed=0)
    c1 = np.array([r.covector for r in d1.positive])
    c2 = np.array([r.covector for r in d2.positive])
    assert np.allclose(c1, c2)


def test_triples_close(ctx):
    alg = ctx.pair.algebra
    for root in ctx.datum.positive:
        assert np.max(np.abs(alg.bracket(root.X, root.Y) - root.T)) < 1e-10
        assert np.max(np.abs(alg.bracket(root.T, root.X) - root.Y)) < 1e-10
        assert np.max(np.abs(alg.bracket(root.T, root.Y) + root.X)) < 1e-10


def test_cartan_diagonalizes(ctx):
    pair, datum = ctx.pair, ctx.datum
    alg = pair.algebra
    for root in datum.positive:
        for j in range(datum.rank):
            t = datum.t_basis[:, j]
            res = alg.bracket(t, root.E) - 1j * root.covector[j] * root.E
            assert np.max(np.abs(res)) < 1e-10


def test_highest_root_vector_normalized(ctx):
    # the two-pass scale fixes the cascade generators to unit length
    beta1 = ctx.datum.noncompact_positive[0]
    assert ctx.pair.algebra.norm(beta1.X) == pytest.approx(1.0, abs=1e-10)


def test_compactness_flag(ctx):
    # compact roots have no center coordinate, noncompact ones share it
    levels = [abs(r.covector[0]) for r in ctx.datum.noncompact_positive]
    for r in ctx.datum.compact_positive:
        assert abs(r.covector[0]) < 1e-8
    assert np.ptp(levels) < 1e-8 and levels[0] > 1e-6
