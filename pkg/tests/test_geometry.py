"""Surface pipeline, cross-validation, and the exact bound arithmetic."""

import math

import pytest

from triapn import geometry as geo
from triapn import identities
from triapn.gf2m import make_field

F3 = make_field(3)
F6 = make_field(6)


# -- bound arithmetic -----------------------------------------------------------


def test_integer_roots_are_exact():
    assert geo.ceil_cbrt(27) == 3
    assert geo.ceil_cbrt(28) == 4
    c = geo.ceil_cbrt(16 ** 13)
    assert (c - 1) ** 3 < 16 ** 13 <= c ** 3
    for m in (3, 5, 9, 19):
        v = geo.ceil_q_pow_3_2(m)
        assert (v - 1) ** 2 < (1 << (3 * m)) <= v ** 2
    assert geo.ceil_q_pow_3_2(4) == 1 << 6


def test_bound_report_values():
    rep = geo.bound_check(16, 3, 40)
    assert rep.applicability_threshold == 1536
    rows = {r.m: r for r in rep.rows}
    assert not rows[10].applicable and rows[11].applicable  # 2^11 = 2048 > 1536
    assert rep.minimal_closing_m == 20
    assert rep.minimal_closing_m_multiple_of_3 == 21
    assert not rows[19].closes and rows[20].closes and rows[21].closes
    # frozen exact value at the closing degree
    assert rows[20].lower_bound == 8211398656
    assert rows[20].required == 48 << 20
    # every quantity is exact machine-integer arithmetic
    for r in rep.rows:
        for v in (r.q, r.lower_bound, r.required, r.exclusion_budget):
            assert isinstance(v, int)
    # monotone closure across the scanned range
    closed = [r.closes for r in rep.rows]
    assert closed == sorted(closed)


def test_bound_exclusion_budget_accounting():
    rep = geo.bound_check(16, 2, 6)
    rows = {r.m: r for r in rep.rows}
    # budget = 3(q+1) + 44q + 1 = 47q + 4; 48q exceeds it exactly when q > 4
    assert rows[2].exclusion_budget == 47 * 4 + 4
    assert rows[2].required <= rows[2].exclusion_budget
    assert rows[3].required > rows[3].exclusion_budget


def test_bound_reference_claim_attached():
    doc = geo.bound_check(16, 3, 24).to_json()
    assert doc["schema"] == "bound/1"
    assert doc["reference"]["threshold_m"] == 20
    assert doc["minimal_closing_m"] <= 20


def test_bound_rejects_bad_parameters():
    with pytest.raises(ValueError):
        geo.bound_check(delta=2)
    with pytest.raises(ValueError):
        geo.bound_check(m_from=5, m_to=4)


def test_bound_delta_sensitivity():
    # a smaller degree bound closes earlier; the scan stays monotone
    rep = geo.bound_check(8, 3, 40)
    assert rep.minimal_closing_m < 20


# -- surface enumeration -----------------------------------------------------------


def test_surface_counts_m3_frozen():
    doc = geo.surface_report(2, F3, collect_points=True)
    assert doc["counts"] == {"total": 22, "on_excluded_lines": 22,
                             "on_degree44_curve": 1, "filtered": 0}
    # no filtered points can exist at m=3: the family is APN there
    assert all(p["on_excluded_lines"] for p in doc["points"])


def test_surface_points_reverify_through_trivariate_evaluation():
    # independent re-evaluation: full multivariate polynomial vs the Horner scan
    P = identities.surface_polynomial()
    doc = geo.surface_report(2, F3, collect_points=True)
    assert len(doc["points"]) == doc["counts"]["total"]
    for pt in doc["points"]:
        val = P.eval({"a": int(pt["alpha"], 16), "b": int(pt["beta"], 16),
                      "g": 1, "u": 2, "y": int(pt["y"], 16)}, F3)
        assert val == 0


def test_surface_counts_m6_frozen():
    doc = geo.surface_report(2, F6)
    assert doc["counts"] == {"total": 4390, "on_excluded_lines": 190,
                             "on_degree44_curve": 57, "filtered": 4144}
    assert doc["counts"]["filtered"] >= 1  # witnesses exist at m=6


def test_surface_guards():
    with pytest.raises(ValueError):
        geo.surface_report(2, make_field(4))
    with pytest.raises(ValueError):
        geo.surface_report(2, make_field(12))


def test_filtered_iteration_respects_flags():
    pts = list(geo.iter_surface_points(2, F6, filtered=True))
    assert pts
    for p in pts[:50]:
        assert p.passes_filters
        assert p.y not in (0, p.beta)
        assert p.alpha != 0 and p.beta != 0


# -- witness reconstruction -----------------------------------------------------------


def test_point_to_witness_m6():
    ev = geo.SurfaceEvaluator(2, F6)
    pt = next(geo.iter_surface_points(2, F6, filtered=True, evaluator=ev))
    cert = geo.point_to_witness(pt, 2, F6, evaluator=ev)
    assert cert.kernel_dim >= 2
    assert cert.triple == (pt.alpha, pt.beta, 1)
    # the reconstructed solution keeps the point's y coordinate
    assert any(v[1] == pt.y for v in cert.solutions)


def test_point_to_witness_rejects_flagged_points():
    pt = geo.SurfacePoint(1, 1, 0, on_excluded_lines=True, on_degree44_curve=False)
    with pytest.raises(ValueError, match="excluded line"):
        geo.point_to_witness(pt, 2, F6)


def test_cross_validation_consistent_m3():
    rep = geo.cross_validate(2, F3)
    assert rep.consistent
    # the family is APN at m=3: no kernel witnesses and no filtered points
    assert rep.kernel_witness_triples == 0
    assert rep.surface_points_checked == 0


def test_cross_validation_consistent_m6():
    rep = geo.cross_validate(2, F6)
    assert rep.consistent
    assert rep.kernel_witness_triples > 0
    assert rep.surface_points_checked == 4144
    doc = rep.to_json()
    assert doc["consistent"] and doc["mismatches"] == []


def test_cross_validation_planted_fault_is_detected():
    # dropping the excluded-lines filter feeds degenerate points into the
    # reconstruction, which must surface as mismatches
    rep = geo.cross_validate(2, F3, skip_lines_filter=True)
    assert not rep.consistent
    assert all(mm["direction"] == "surface_to_kernel" for mm in rep.mismatches)


def test_cross_validation_guards():
    with pytest.raises(ValueError):
        geo.cross_validate(2, make_field(9))


# -- count vs band -----------------------------------------------------------------------


def test_count_vs_band_m3():
    doc = geo.count_vs_band(2, F3)
    assert doc["count"] == 22
    assert doc["counts_agree"]
    assert doc["band_vacuous"]  # width exceeds q^2 at this size


def test_count_vs_band_m6():
    doc = geo.count_vs_band(2, F6)
    assert doc["count"] == 4390
    assert doc["counts_agree"]
    # 210 * 512^(3/2)-scale width dwarfs q^2 = 4096: recorded honestly
    assert doc["band_vacuous"]
    assert "caveat" in doc
