import json

import pytest

from hksym.fields import make_params
from hksym.verify import (
    COVERAGE_MANIFEST,
    Campaign,
    build_context,
    default_param_grid,
    run_campaign,
    run_hk_suite,
    run_negative_controls,
    run_structure_suite,
)

_STRUCTURE_IDS = {r.check_id for r in run_structure_suite("su:1,1", samples=3)}


def test_structure_suite_passes(ctx):
    results = run_structure_suite(ctx.space, samples=15)
    failed = [r for r in results if not r.passed]
    assert not failed, [
        (r.check_id, r.max_residual, r.details) for r in failed
    ]


def test_hk_suite_passes(ctx):
    for tup in default_param_grid(ctx.rrs.type_tag)[:2]:
        params = make_params(*tup, ctx.rrs.type_tag)
        results = run_hk_suite(ctx.space, params, samples=10)
        failed = [r for r in results if not r.passed]
        assert not failed, [
            (r.check_id, r.max_residual, r.details) for r in failed
        ]


def test_negative_controls_detect(ctx):
    results = run_negative_controls(ctx.space, samples=10)
    assert results, "no controls ran"
    for r in results:
        assert r.passed, (r.check_id, r.details)
    if ctx.rrs.type_tag == "BC":
        flip = next(
            r for r in results if r.check_id == "control-eigenvalue-sign-flip"
        )
        assert flip.details[0].get("note") != "not applicable"


def test_checkresult_invariant(ctx_su11):
    for r in run_structure_suite("su:1,1", samples=5):
        assert r.passed == (r.max_residual < r.threshold)
        payload = r.to_json()
        json.dumps(payload)  # must be serializable
        assert payload["check_id"] in COVERAGE_MANIFEST


def test_hk_suite_requires_params():
    with pytest.raises(TypeError):
        run_hk_suite("su:1,1", (1, 0, 0, 1))


def test_threshold_overrides():
    results = run_structure_suite("su:1,1", samples=3, tol_alg=1e-3)
    alg = next(r for r in results if r.check_id == "cartan-splitting")
    assert alg.threshold == 1e-3
    fd = next(r for r in results if r.check_id == "radial-derivative")
    assert fd.threshold == 1e-6
    results = run_structure_suite("su:1,1", samples=3, tol_fd=1e-4)
    fd = next(r for r in results if r.check_id == "radial-derivative")
    assert fd.threshold == 1e-4


def test_not_applicable_paths():
    params = make_params(1.0, 0.5, 0.5, 1, "C")
    results = run_hk_suite("su:1,1", params, samples=5)
    by_id = {r.check_id: r for r in results}
    for check_id in ("hypercomplex-pair", "potential-ode", "potential-gradient"):
        r = by_id[check_id]
        assert r.passed and r.samples == 0
        assert r.details == [{"note": "not applicable"}]


def test_manifest_covers_all_emitted_ids():
    campaign = Campaign(seed=1, spaces=("su:1,1",), samples=5)
    report = run_campaign(campaign)
    emitted = {c["check_id"] for c in report["checks"]}
    assert emitted <= set(COVERAGE_MANIFEST)
    # a single space already exercises every registered check id
    assert emitted == set(COVERAGE_MANIFEST)


def test_campaign_determinism():
    campaign = Campaign(seed=7, spaces=("su:1,1", "su:1,2"), samples=8)
    r1 = run_campaign(campaign)
    r2 = run_campaign(campaign)
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert r1["version"] == "hksym-report/1"
    assert r1["all_passed"]


def test_campaign_seed_changes_stream():
    base = Campaign(seed=7, spaces=("su:1,1",), samples=8)
    other = Campaign(seed=8, spaces=("su:1,1",), samples=8)
    r1 = run_campaign(base)
    r2 = run_campaign(other)
    res1 = [c["max_residual"] for c in r1["checks"]]
    res2 = [c["max_residual"] for c in r2["checks"]]
    assert res1 != res2


def test_campaign_custom_params():
    campaign = Campaign(
        seed=0,
        spaces=("su:1,1",),
        param_tuples=((1.0, 0.0, 0.0, 1),),
        samples=5,
    )
    report = run_campaign(campaign)
    assert report["params"]["su:1,1"] == ["(1,0,0,+1)"]
    assert report["all_passed"]


def test_context_caching():
    assert build_context("su:1,1") is build_context("su:1,1")
