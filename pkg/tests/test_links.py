import pytest

from quadlink.chow import DivisorClass
from quadlink.errors import (
    BadBoundaryShape,
    InconsistentFlags,
    NotARuling,
    NotASection,
    PatternMismatch,
)
from quadlink.links import (
    FiberType,
    commute_blowups_check,
    cube_from_genera,
    fiber_type,
    inverse_qp_link,
    p2_canonical_presentation,
    pp_link,
    qp_link,
    qq_link,
)
from quadlink.models import (
    CurveData,
    anticanonical_cube,
    p2_bundle,
    quadric_fibration,
    _p2_model_from_degree,
)

D = DivisorClass
XI, H, F = D.unit("xi"), D.unit("H"), D.unit("F")

RULING = CurveData(genus=0, hits={"H": 1, "F": 0}, name="l")


def section(sigma=0):
    return CurveData(genus=0, hits={"H": sigma, "F": 1}, name="s")


class TestPPLink:
    @pytest.mark.parametrize(
        "n,in_boundary,expected",
        [
            (0, False, (2, 1, True)),
            (0, True, (2, 0, False)),
            (1, True, (4, -1, False)),
            (1, False, (1, 1, True)),
        ],
    )
    def test_case_table(self, n, in_boundary, expected):
        model = _p2_model_from_degree(3)
        new_model, step = pp_link(model, n, XI, in_boundary)
        b = step.data["boundary_new"]
        got = (new_model.kind.degree, b.coeff("F"), step.data["new_center_in_boundary"])
        assert got == expected

    def test_parity_preserved_for_standard_centers(self):
        # Point off the boundary and line in the boundary both preserve
        # deg + e mod 2.
        for deg, e in [(3, 1), (0, 0), (4, -2), (-1, 1)]:
            model = _p2_model_from_degree(deg)
            boundary = XI + e * F
            for n, in_b in ((0, False), (1, True)):
                new_model, step = pp_link(model, n, boundary, in_b)
                b = step.data["boundary_new"]
                assert (new_model.kind.degree + b.coeff("F")) % 2 == (deg + e) % 2

    def test_point_in_boundary_flips_parity(self):
        model = _p2_model_from_degree(4)
        new_model, step = pp_link(model, 0, XI, True)
        b = step.data["boundary_new"]
        assert (new_model.kind.degree + b.coeff("F")) % 2 != (4 + 0) % 2

    def test_bad_boundary(self):
        model = _p2_model_from_degree(2)
        with pytest.raises(BadBoundaryShape):
            pp_link(model, 0, 2 * XI, False)


class TestQPLink:
    def test_standard_model_type_zero(self):
        q = quadric_fibration(-4, 3)
        p, b, step = qp_link(q, section(), H, 1)
        assert b.genus == 0
        assert step.data["m"] == 0
        assert anticanonical_cube(p) == 54

    def test_bisection_genus_from_cube(self):
        # (-K)^3 = 32 forces an elliptic bisection; 8 would force genus 4.
        q = quadric_fibration(1, 1)
        assert anticanonical_cube(q) == 32
        _, b, _ = qp_link(q, section(), H, 1)
        assert b.genus == 1
        q = quadric_fibration(-8, 3)
        assert anticanonical_cube(q) == 8
        _, b, _ = qp_link(q, section(), H, 1)
        assert b.genus == 4

    def test_m_independent_of_section(self):
        q = quadric_fibration(2, 1)  # boundary coefficient 1: type 2
        values = {qp_link(q, section(s), H, 1)[2].data["m"] for s in (-3, 0, 2, 7)}
        assert values == {2}

    def test_not_a_section(self):
        q = quadric_fibration(-4, 3)
        with pytest.raises(NotASection):
            qp_link(q, CurveData(genus=0, hits={"H": 0, "F": 2}), H, 1)
        with pytest.raises(NotASection):
            qp_link(q, CurveData(genus=1, hits={"H": 0, "F": 1}), H, 1)


class TestInverseQPLink:
    @pytest.mark.parametrize("d", range(4))
    def test_boundary_stays_ruled_of_same_degree(self, d):
        # The sub-bundle family: boundary transported with multiplicity 0
        # lands as a relative hyperplane with coefficient 3 and cube -4.
        p = p2_bundle(0, 1, d)
        bis = CurveData(genus=0, hits={"xi": 2, "F": 2}, name="B")
        tracked = {"Dh": (XI - 1 * F, 0)}
        q, step = inverse_qp_link(p, bis, tracked=tracked)
        assert anticanonical_cube(q) == 40
        dh = step.data["tracked"]["Dh"]
        assert q.triple(dh, dh, dh) == -4
        assert (q.minus_k - 2 * dh) == 3 * F

    def test_elliptic_bisection(self):
        p = p2_bundle(0, 1, 2)
        bis = CurveData(genus=1, hits={"xi": 3, "F": 2}, name="B")
        q, _ = inverse_qp_link(p, bis)
        assert anticanonical_cube(q) == 32

    def test_cube_from_genera_matches_lattice(self):
        for g in range(4):
            p = p2_bundle(0, 1, 1)
            bis = CurveData(genus=g, hits={"xi": 2 + g, "F": 2}, name="B")
            q, _ = inverse_qp_link(p, bis)
            assert anticanonical_cube(q) == cube_from_genera(g, 0)

    def test_roundtrip_with_qp(self):
        p = p2_bundle(0, 1, 3)
        bis = CurveData(genus=0, hits={"xi": 2, "F": 2}, name="B")
        tracked = {"Dh": (XI - 1 * F, 0)}
        q, step = inverse_qp_link(p, bis, tracked=tracked)
        dh = step.data["tracked"]["Dh"]
        # The section to blow up back is the image of the contracted
        # sub-bundle; its hits are (X.s) = -(pullback X . exc^2) on the
        # common resolution.
        exc = step.data["exc_class"]
        widetilde_hits = {}
        from quadlink.models import blow_up_curve

        blown = blow_up_curve(p, bis)
        pullbacks = step.data["pullbacks"]
        for name, cls in pullbacks.items():
            widetilde_hits[name] = -blown.triple(cls, exc, exc)
        s = CurveData(genus=0, hits=widetilde_hits, name="s")
        p_back, b_back, qp_step = qp_link(q, s, dh, 1)
        canon_back, _ = p2_canonical_presentation(p_back)
        canon_orig, _ = p2_canonical_presentation(p)
        assert canon_back.form == canon_orig.form
        assert (b_back.genus, b_back.hits["F"]) == (bis.genus, 2)

    def test_not_a_bisection(self):
        p = p2_bundle(0, 0, 1)
        with pytest.raises(PatternMismatch):
            inverse_qp_link(p, CurveData(genus=0, hits={"xi": 1, "F": 1}))


class TestQQLink:
    def test_shape_preserved(self):
        q = quadric_fibration(-4, 3)
        q1, step = qq_link(q, RULING, H, 1)
        assert q1.form.value("H", "H", "F") == 2
        assert step.data["boundary_new"] == H

    def test_double_link_is_identity(self):
        for h3, a, k in [(-4, 3, 0), (2, 1, 0), (5, 0, 2)]:
            q = quadric_fibration(h3, a)
            boundary = H + k * F
            q1, s1 = qq_link(q, RULING, boundary, 1)
            q2, s2 = qq_link(q1, RULING, s1.data["boundary_new"], 0)
            assert q2.form == q.form
            assert q2.canonical == q.canonical
            assert s2.data["boundary_new"] == boundary

    def test_double_link_from_mult_zero(self):
        q = quadric_fibration(2, 1)
        q1, s1 = qq_link(q, RULING, H, 0)
        q2, s2 = qq_link(q1, RULING, s1.data["boundary_new"], 1)
        assert q2.form == q.form
        assert s2.data["boundary_new"] == H

    def test_anticanonical_cube_preserved(self):
        q = quadric_fibration(-1, 2)
        q1, _ = qq_link(q, RULING, H, 1)
        assert anticanonical_cube(q1) == anticanonical_cube(q)

    def test_not_a_ruling(self):
        q = quadric_fibration(-4, 3)
        with pytest.raises(NotARuling):
            qq_link(q, CurveData(genus=0, hits={"H": 1, "F": 1}), H, 1)
        with pytest.raises(NotARuling):
            qq_link(q, CurveData(genus=0, hits={"H": 2, "F": 0}), H, 1)


class TestFiberType:
    def test_table(self):
        assert fiber_type(False, False, None) is FiberType.SMOOTH
        assert fiber_type(False, True, None) is FiberType.REDUCIBLE
        assert fiber_type(True, False, None) is FiberType.SMOOTH
        assert fiber_type(True, True, True) is FiberType.NON_REDUCED
        assert fiber_type(True, True, False) is FiberType.REDUCIBLE

    def test_exhaustive_nine_cases(self):
        consistent = 0
        for t in (False, True):
            for meets in (False, True):
                for eq in (None, False, True):
                    try:
                        result = fiber_type(t, meets, eq)
                    except InconsistentFlags:
                        assert eq is True and (not t or not meets)
                        continue
                    consistent += 1
                    if not meets:
                        assert result is FiberType.SMOOTH
                    elif t and eq is True:
                        assert result is FiberType.NON_REDUCED
                    else:
                        assert result is FiberType.REDUCIBLE
        assert consistent == 9

    def test_inconsistent_flags(self):
        with pytest.raises(InconsistentFlags):
            fiber_type(False, False, True)
        with pytest.raises(InconsistentFlags):
            fiber_type(True, False, True)


class TestCommuteBlowups:
    def test_point_off_curve(self):
        q = quadric_fibration(-4, 3)
        curve = CurveData(genus=0, hits={"H": 1, "F": 0})
        report = commute_blowups_check(q, curve, point_on_curve=False)
        assert report.ok and report.forms_match
        assert report.twist_degree == 0
        assert report.normal_degree_after == report.normal_degree_before

    def test_point_on_curve(self):
        q = quadric_fibration(-4, 3)
        curve = CurveData(genus=0, hits={"H": 1, "F": 0})
        report = commute_blowups_check(q, curve, point_on_curve=True)
        assert report.ok and report.forms_match
        assert report.twist_degree == 1
        assert report.normal_degree_after == report.normal_degree_before - 2

    def test_vertex_blowup_recovers_ruling_degree(self):
        # A ruling through the blown-up cone vertex: downstairs its normal
        # degree is 0, upstairs it is -2, the difference being one rank-2
        # twist.
        q = quadric_fibration(-4, 3)
        ruling = CurveData(genus=0, hits={"H": 1, "F": 0})
        report = commute_blowups_check(q, ruling, point_on_curve=True)
        assert report.normal_degree_before == 0
        assert report.normal_degree_after == -2
        assert report.normal_degree_before == (
            report.normal_degree_after + 2 * report.twist_degree
        )

    def test_on_p2_bundle_with_genus(self):
        p = p2_bundle(0, 1, 2)
        curve = CurveData(genus=1, hits={"xi": 3, "F": 2})
        for on in (False, True):
            report = commute_blowups_check(p, curve, point_on_curve=on)
            assert report.ok
