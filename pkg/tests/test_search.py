import json
from math import comb

import pytest

from rangesum import search
from rangesum.fpcore import make_field
from rangesum.poly import FpPoly, apply_affine, canonical_form, eval_all
from rangesum.search import (
    InfeasiblePrime,
    SearchInterrupted,
    classify_all,
    family_polys,
    min_degree_census,
    orbit_partition,
    verify_known_families,
)

from . import oracles


def P(p, *coeffs):
    return FpPoly(p, coeffs)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_engine_matches_brute_force(p):
    ctx = make_field(p)
    expected = oracles.brute_force_solutions(p)
    assert classify_all(ctx).raw_solutions == expected
    assert classify_all(ctx, normalize=False).raw_solutions == expected


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_normalized_and_full_enumeration_agree(p):
    ctx = make_field(p)
    a = classify_all(ctx)
    b = classify_all(ctx, normalize=False)
    assert a.raw_solutions == b.raw_solutions
    assert a.to_dict(include_time=False)["orbits"] == b.to_dict(include_time=False)["orbits"]


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_nodes_visited(p):
    k = (p - 1) // 2
    assert classify_all(make_field(p)).nodes_visited == comb(p + k - 2, k - 1)
    assert classify_all(make_field(p), normalize=False).nodes_visited == comb(p + k - 1, k)


def test_classify_p7_contains_families():
    ctx = make_field(7)
    res = classify_all(ctx)
    forms = [o.form.canonical_values for o in res.orbits]
    assert canonical_form(ctx, P(7, 1, 0, 0, 1)).canonical_values in forms
    assert canonical_form(ctx, P(7, 4, 0, 0, 4)).canonical_values in forms
    assert res.orbit_count == len(set(forms))
    for o in res.orbits:
        f = o.representative
        assert f.degree == 3 and eval_all(ctx, f).range_sum == 7
        assert o.residual_valid and o.leading_class_ok


def test_classify_p11_families():
    ctx = make_field(11)
    forms = {o.form.canonical_values for o in classify_all(ctx).orbits}
    f1, f2 = family_polys(ctx)
    assert f2 == P(11, 6, 0, 0, 0, 0, 6)
    assert canonical_form(ctx, f1).canonical_values in forms
    assert canonical_form(ctx, f2).canonical_values in forms


def test_classify_p5_restricted_to_c1():
    ctx = make_field(5)
    res = classify_all(ctx, only_c=[1])
    # roots of monic range-sum-5 quadratics, by direct check of all 15 root multisets
    direct = [(1, r) for c, r in oracles.brute_force_solutions(5) if c == 1]
    assert res.raw_solutions == direct
    assert res.orbit_count == 1
    assert res.orbits[0].form.canonical_values == canonical_form(ctx, P(5, 1, 0, 1)).canonical_values


def test_representatives_are_the_families():
    for p in (7, 11, 13):
        ctx = make_field(p)
        f1, f2 = family_polys(ctx)
        k = (p - 1) // 2
        reps = {o.representative for o in classify_all(ctx).orbits}
        alt = FpPoly.monomial(ctx, k, (p - 1) // 2) + P(p, (p + 1) // 2)
        assert reps == {f1, alt}
        assert canonical_form(ctx, alt).canonical_values == canonical_form(ctx, f2).canonical_values


def test_printed_g_is_not_a_solution():
    for p in (7, 11, 13):
        ctx = make_field(p)
        g = (FpPoly.monomial(ctx, (p - 1) // 2) + P(p, 1)) * ((p - 1) // 2)
        assert eval_all(ctx, g).range_sum == p * (p - 1) // 2


def test_orbit_partition_examples():
    ctx = make_field(7)
    f = P(7, 1, 0, 0, 1)
    groups = orbit_partition([f, apply_affine(ctx, f, 1, 1), apply_affine(ctx, f, 2, 0)], ctx)
    assert len(groups) == 1 and len(groups[0]) == 3
    assert len(orbit_partition([f, P(7, 4, 0, 0, 4)], ctx)) == 2
    assert orbit_partition([], ctx) == []


@pytest.mark.parametrize("p", [7, 23, 199])
def test_known_families(p):
    assert verify_known_families(make_field(p))


def test_infeasible():
    with pytest.raises(InfeasiblePrime):
        classify_all(make_field(29))
    with pytest.raises(InfeasiblePrime):
        min_degree_census(make_field(17))


def test_census_small():
    r5 = min_degree_census(make_field(5))
    assert r5.min_nonconstant_degree == 2 and r5.census[0] == 1
    assert r5.total == search.census_vector_count(5) == 121
    r7 = min_degree_census(make_field(7))
    assert r7.min_nonconstant_degree == 3 and r7.census[0] == 1
    assert r7.total == comb(13, 6) - 7


@pytest.mark.parametrize("p", [5, 7, 11])
def test_census_half_degree_count_matches_classifier(p):
    ctx = make_field(p)
    assert min_degree_census(ctx).census[(p - 1) // 2] == classify_all(ctx).raw_solution_count


def test_census_threads_agree():
    ctx = make_field(7)
    assert min_degree_census(ctx, threads=2).census == min_degree_census(ctx).census


def test_threads_do_not_change_result():
    ctx = make_field(11)
    a = classify_all(ctx).to_dict(include_time=False)
    b = classify_all(ctx, threads=3).to_dict(include_time=False)
    assert json.dumps(a) == json.dumps(b)


def test_checkpoint_resume(tmp_path):
    ctx = make_field(11)
    ck = tmp_path / "ck.json"
    with pytest.raises(SearchInterrupted):
        classify_all(ctx, checkpoint_path=ck, stop_after_units=7, checkpoint_every=1)
    data = json.loads(ck.read_text())
    assert data["schema"] == 1 and len(data["completed_prefixes"]) == 7
    resumed = classify_all(ctx, checkpoint_path=ck, resume=True)
    fresh = classify_all(ctx)
    assert resumed.to_dict(include_time=False) == fresh.to_dict(include_time=False)


def test_checkpoint_mismatch(tmp_path):
    ck = tmp_path / "ck.json"
    classify_all(make_field(7), checkpoint_path=ck)
    with pytest.raises(ValueError):
        classify_all(make_field(11), checkpoint_path=ck, resume=True)
    with pytest.raises(FileNotFoundError):
        classify_all(make_field(7), checkpoint_path=tmp_path / "missing.json", resume=True)


def test_result_schema():
    d = classify_all(make_field(7)).to_dict()
    assert set(d) >= {"p", "orbit_count", "orbits", "nodes_visited", "elapsed_ms"}
    assert set(d["orbits"][0]) >= {"canonical_values", "representative_coeffs", "c_values", "raw_count"}
