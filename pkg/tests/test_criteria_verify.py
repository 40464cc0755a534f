"""Criteria verdicts, statement checks, and the campaign engine."""

import itertools
import json

import pytest

from dirset.errors import (
    BudgetExceeded,
    ConstantFunction,
    DegreeOutOfRange,
    InvalidSpec,
    NonDivisor,
)
from dirset.field_core import build_field, mult_subgroup
from dirset.direction_engine import direction_set, inverse_set, product_set
from dirset.poly_fn import FqFunction, MonomialForm, interpolate
from dirset.criteria_verify import (
    CampaignSpec,
    cor1_criterion,
    cor2_criterion,
    is_permutation_oracle,
    main2_criterion,
    result1_check,
    result2_check,
    run_campaign,
    run_search,
    sziklai_classify,
    _iter_all,
    _iter_monic,
)


def poly(ctx, coeffs):
    return FqFunction.from_coeffs(ctx, coeffs)


def canon(report):
    d = report.to_dict()
    d.pop("elapsed_ms")
    return json.dumps(d, sort_keys=True)


# ---------------------------------------------------------------------------
# the oracle and single-function criteria
# ---------------------------------------------------------------------------

def test_oracle_frozen(F5):
    assert is_permutation_oracle(poly(F5, [0, 1]))
    assert not is_permutation_oracle(poly(F5, [2]))
    assert not is_permutation_oracle(poly(F5, [0, 0, 1]))  # 1 and 4 both map to 1


def test_main2_frozen(F5, F9):
    v = main2_criterion(poly(F9, [0, 0, 0, 1]))
    assert v.proven and v.set_size == 4 and v.threshold == 8 and v.oracle
    v = main2_criterion(poly(F5, [0, 0, 0, 1]))
    assert not v.proven and v.set_size == 4 and v.threshold == 4
    assert v.oracle  # sufficient, not necessary
    v = main2_criterion(poly(F5, [0, 0, 1]))
    assert not v.proven and v.set_size == 5 and v.threshold == 5 and not v.oracle
    with pytest.raises(DegreeOutOfRange):
        main2_criterion(poly(F5, [3]))


def test_cor1_frozen(F5, F7, F9):
    v = cor1_criterion(poly(F9, [0, 0, 0, 1]))
    assert v.proven and v.set_size == 4 and v.threshold == 5
    v = cor1_criterion(poly(F7, [0, 1]))
    assert v.proven and v.set_size == 1 and v.threshold == 4
    v = cor1_criterion(poly(F5, [0, 0, 1]))
    assert not v.proven and v.set_size == 5 and v.threshold == 3
    with pytest.raises(ConstantFunction):
        cor1_criterion(poly(F5, [1]))


def test_sziklai_frozen(F5, F9):
    r = sziklai_classify(poly(F9, [0, 0, 0, 1]), 2)
    assert r.contained and r.form == MonomialForm(1, 1, 0)
    r = sziklai_classify(poly(F5, [0, 0, 1]), 2)
    assert not r.contained and r.form is None
    r = sziklai_classify(poly(F5, [3]), 4)
    assert r.contained and r.form == MonomialForm(0, 0, 3)
    with pytest.raises(NonDivisor):
        sziklai_classify(poly(F5, [0, 1]), 3)
    with pytest.raises(NonDivisor):
        sziklai_classify(poly(F5, [0, 1]), 1)


def test_cor2_frozen(F5, F9):
    r = cor2_criterion(poly(F9, [0, 0, 0, 1]))
    assert r.proven and r.set_size == 4 and r.form == MonomialForm(1, 1, 0)
    r = cor2_criterion(poly(F5, [3, 2]))
    assert r.proven and r.set_size == 1 and r.form == MonomialForm(2, 0, 3)
    r = cor2_criterion(poly(F5, [0, 0, 1]))
    assert not r.proven and r.set_size == 5 and r.form is None


def test_result_checks_frozen(F5, F9):
    assert result1_check(poly(F9, [0, 0, 0, 1]), 2)
    assert result1_check(poly(F5, [0, 0, 1]), 2)   # antecedent false, vacuous
    assert result2_check(poly(F9, [0, 0, 0, 1]))   # |D| = 4 <= 5, and additive
    assert result2_check(poly(F5, [0, 0, 1]))      # |D| = 5 > 3, vacuous
    with pytest.raises(NonDivisor):
        result1_check(poly(F5, [0, 1]), 3)


def test_criteria_sound_exhaustive_q4():
    ctx = build_field(2, 2)
    proven_main2 = proven_cor1 = 0
    for values in itertools.product(range(4), repeat=4):
        f = interpolate(ctx, values)
        if not f.is_constant():
            v = main2_criterion(f)
            assert v.sound()
            proven_main2 += v.proven
            w = cor1_criterion(f)
            assert w.sound()
            proven_cor1 += w.proven
    # campaign counts must agree with the direct loop
    r = run_campaign(CampaignSpec(2, 2, "main2", "all"))
    assert r.fired == proven_main2 and not r.counterexamples
    r = run_campaign(CampaignSpec(2, 2, "cor1", "all"))
    assert r.fired == proven_cor1 and not r.counterexamples


def test_product_size_monotone(rng):
    # |D| <= |D^-1 D| <= |D^-1 D D^-1| once D has a nonzero element
    for p, n in [(5, 1), (7, 1), (3, 2), (2, 3)]:
        ctx = build_field(p, n)
        for _ in range(60):
            f = interpolate(ctx, [rng.randrange(ctx.q) for _ in range(ctx.q)])
            d = direction_set(f).elements
            if len(d) == 1 and 0 in d:
                continue
            dinv = inverse_set(ctx, d)
            dd = product_set(ctx, dinv, d)
            ddd = product_set(ctx, dd, dinv)
            assert len(d) <= len(dd) <= len(ddd)


# ---------------------------------------------------------------------------
# enumeration order
# ---------------------------------------------------------------------------

def test_all_family_is_base_q_counter():
    ctx = build_field(3, 1)
    tables = [t for _, t in _iter_all(ctx, 0, 12)]
    # index digit i (base q, least significant first) is f(i)
    assert tables[0] == (0, 0, 0)
    assert tables[1] == (1, 0, 0)
    assert tables[2] == (2, 0, 0)
    assert tables[3] == (0, 1, 0)
    assert tables[11] == (2, 0, 1)
    # chunked iteration agrees with the full pass
    full = [t for _, t in _iter_all(ctx, 0, 27)]
    resumed = [t for _, t in _iter_all(ctx, 13, 27)]
    assert full[13:] == resumed


def test_monic_family_blocks():
    ctx = build_field(5, 1)
    items = list(_iter_monic(ctx, 2, 0, 30))
    assert len(items) == 30
    # first block: x + c0; first table is x itself
    assert items[0][1] == (0, 1, 2, 3, 4)
    assert items[1][1] == (1, 2, 3, 4, 0)
    # second block starts at index 5 with x^2
    assert items[5][1] == tuple(x * x % 5 for x in range(5))
    # resume mid-block
    assert list(_iter_monic(ctx, 2, 7, 30)) == items[7:]


def test_random_family_reproducible():
    r1 = run_campaign(CampaignSpec(7, 1, "cor1", "random-500", seed=9))
    r2 = run_campaign(CampaignSpec(7, 1, "cor1", "random-500", seed=9))
    r3 = run_campaign(CampaignSpec(7, 1, "cor1", "random-500", seed=10))
    assert canon(r1) == canon(r2)
    assert canon(r1) != canon(r3)
    assert r1.checked == 500


# ---------------------------------------------------------------------------
# campaigns: frozen counts
# ---------------------------------------------------------------------------

def test_conj_campaign_counts_q5():
    r = run_campaign(CampaignSpec(5, 1, "conj", "all", d=2))
    assert (r.checked, r.fired, r.counterexamples) == (3125, 15, [])
    r = run_campaign(CampaignSpec(5, 1, "conj", "all", d=4))
    assert r.fired == 10 and r.ok


def test_main2_campaign_q5_fires_within_permutations():
    r = run_campaign(CampaignSpec(5, 1, "main2", "all"))
    assert r.checked == 5**5 and r.ok
    assert r.fired <= 120  # 5! permutations exist in total
    assert r.extremes["skipped_constants"] == 5


def test_main_campaign_q5_has_equality_witness():
    r = run_campaign(CampaignSpec(5, 1, "main", "monic-deg-3"))
    assert r.ok
    assert r.extremes["min_margin"] == 0
    assert r.extremes["equality_count"] >= 1
    w = r.extremes["equality_witness"]
    assert w is not None and w["product_size"] == 5 - w["k"] + 2
    assert r.extremes["h_set_checks"] == r.fired


def test_search_monomial_forms_q9():
    r = run_search(CampaignSpec(3, 2, "conj", "monomial-forms", d=2))
    assert r.checked == 9 + 8 * 2 * 9
    assert r.fired == 81 and len(r.members) == 81 and r.ok
    # 9 constants plus 36 + 36 twists with a in the square class
    constants = [m for m in r.members if m["form"][0] == 0]
    assert len(constants) == 9
    for m in r.members:
        assert m["form"][0] == 0 or m["form"][0] in mult_subgroup(build_field(3, 2), 2)


def test_search_all_q5_d4():
    r = run_search(CampaignSpec(5, 1, "conj", "all", d=4))
    assert r.fired == 10 and len(r.members) == 10
    polys = sorted(m["poly"] for m in r.members)
    # constants and x + b only
    assert polys == sorted([str(b) for b in range(5)] +
                           [f"{b},1" for b in range(5)])


def test_result_campaigns_q5():
    r = run_campaign(CampaignSpec(5, 1, "result1", "all", d=2))
    assert r.ok and r.fired == 10  # permutations with directions inside M_2
    r = run_campaign(CampaignSpec(5, 1, "result2", "all"))
    assert r.ok and r.fired == 25  # affine functions over F_5
    r = run_campaign(CampaignSpec(5, 1, "cor2", "all"))
    assert r.ok and r.fired == 25


# ---------------------------------------------------------------------------
# spec validation, budget, determinism, parallelism
# ---------------------------------------------------------------------------

def test_spec_validation_errors():
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "nope", "all"))
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "conj", "everything", d=2))
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "conj", "all"))       # missing d
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "main2", "all", d=2))  # stray d
    with pytest.raises(NonDivisor):
        run_campaign(CampaignSpec(5, 1, "conj", "all", d=3))
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "main2", "poly-deg-9"))
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "main2", "random-0"))
    with pytest.raises(InvalidSpec):
        run_campaign(CampaignSpec(5, 1, "main2", "all", jobs=0))


def test_budget_cap_and_override(monkeypatch):
    with pytest.raises(BudgetExceeded):
        run_campaign(CampaignSpec(5, 1, "conj", "all", d=2, budget=100))
    monkeypatch.setenv("DIRSET_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        run_campaign(CampaignSpec(5, 1, "conj", "all", d=2))
    # explicit budget overrides the environment
    r = run_campaign(CampaignSpec(5, 1, "conj", "all", d=2, budget=5000))
    assert r.fired == 15


def test_reports_byte_identical_modulo_elapsed():
    a = run_campaign(CampaignSpec(5, 1, "conj", "all", d=2))
    b = run_campaign(CampaignSpec(5, 1, "conj", "all", d=2))
    assert canon(a) == canon(b)
    assert a.to_json() [:1] == "{"


def test_parallel_jobs_match_sequential():
    specs = [
        CampaignSpec(7, 1, "conj", "all", d=3, jobs=2),
        CampaignSpec(5, 1, "main", "monic-deg-3", jobs=2),
        CampaignSpec(7, 1, "main2", "random-6000", seed=1, jobs=2),
    ]
    for spec in specs:
        seq = run_campaign(CampaignSpec(**{**spec.__dict__, "jobs": 1}))
        par = run_campaign(spec)
        assert canon(seq) == canon(par)


def test_report_json_schema():
    r = run_campaign(CampaignSpec(5, 1, "conj", "all", d=2))
    payload = json.loads(r.to_json())
    assert set(payload) == {"spec", "checked", "fired", "counterexamples",
                            "extremes", "elapsed_ms"}
    assert payload["spec"]["q"] == 5
    assert isinstance(payload["elapsed_ms"], int)
    s = run_search(CampaignSpec(5, 1, "conj", "all", d=2))
    assert "members" in json.loads(s.to_json())
