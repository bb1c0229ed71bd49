import pytest

from quadlink.chow import DivisorClass
from quadlink.errors import (
    DegreeUnderflow,
    IncompleteCurveData,
    PatternMismatch,
)
from quadlink.models import (
    CurveData,
    CurvePattern,
    FiberPattern,
    PointData,
    PointPattern,
    anticanonical_cube,
    blow_up_curve,
    blow_up_point,
    contract,
    elementary_transform,
    hirzebruch,
    normal_degree,
    p2_bundle,
    pushforward,
    quadric_fibration,
    smooth_quadric_fiber,
    strict_transform,
)

D = DivisorClass


class TestConstructors:
    def test_p2_bundle_examples(self):
        p = p2_bundle(0, 0, 1)
        xi = D.unit("xi")
        assert p.triple(xi, xi, xi) == 1
        assert anticanonical_cube(p) == 54
        assert p2_bundle(0, 0, 0).triple(xi, xi, xi) == 0

    def test_twist_normalization(self):
        assert p2_bundle(1, 1, 2).kind.twists == (0, 0, 1)
        assert p2_bundle(5, 3, 4).kind.twists == (0, 1, 2)
        assert p2_bundle(2, 0, 1).kind.twists == (0, 1, 2)

    def test_subbundle_restriction_table(self):
        # (restriction of one sub-bundle to the other) squared on the
        # (0, 1, d) bundles.
        xi, f = D.unit("xi"), D.unit("F")
        for d in range(1, 7):
            p = p2_bundle(0, 1, d)
            for i in {1, d}:
                a = xi - (d + 1 - i) * f
                b = xi - i * f
                assert p.triple(a, a, b) == -(d + 1 - i)

    def test_quadric_values(self):
        q = quadric_fibration(-4, 3)
        h, f = D.unit("H"), D.unit("F")
        assert q.triple(h, h, f) == 2
        assert q.triple(h, h, h) == -4
        assert anticanonical_cube(q) == 40

    def test_fiber_degenerate(self):
        for model in (p2_bundle(2, 3, 4), quadric_fibration(7, -2)):
            f = model.fiber
            for g in model.generators:
                assert model.triple(f, f, D.unit(g)) == 0


class TestBlowUps:
    def test_point_blowup_constants(self):
        q = quadric_fibration(-4, 3)
        x = blow_up_point(q, PointData())
        e = D.unit("E1")
        assert x.triple(e, e, e) == 1
        assert x.canonical.coeff("E1") == 2
        assert anticanonical_cube(x) == anticanonical_cube(q) - 8

    def test_point_strict_transform(self):
        # Boundary through the center drops by one exceptional.
        assert strict_transform(D.unit("H"), 1, "E1") == D({"H": 1, "E1": -1})

    def test_curve_blowup_all_zero_hits(self):
        q = quadric_fibration(0, 0)
        c = CurveData(genus=0, hits={"H": 0, "F": 0})
        x = blow_up_curve(q, c)
        e = D.unit("E1")
        assert x.triple(e, e, e) == 2  # E^3 = 2 - (-K.C) = 2
        h = D.unit("H")
        assert x.triple(h, h, h) == 0
        assert x.triple(h, h, e) == 0

    def test_singular_fiber_ruling_identities(self):
        # Blow up a ruling of a singular fiber: the boundary is doubled
        # along it, the fiber is reduced.
        q = quadric_fibration(-4, 3)
        r = CurveData(genus=0, hits={"H": 1, "F": 0}, name="r")
        assert normal_degree(q, r) == 0
        x = blow_up_curve(q, r)
        dh = strict_transform(D.unit("H"), 2, "E1")
        df = strict_transform(D.unit("F"), 1, "E1")
        assert x.triple(dh, dh, df) == -2
        assert x.triple(dh, df, df) == -1

    def test_missing_hits(self):
        q = quadric_fibration(0, 0)
        with pytest.raises(IncompleteCurveData):
            blow_up_curve(q, CurveData(genus=0, hits={"H": 1}))

    def test_normal_degree_shift_under_point_blowup(self):
        # A line through the blown-up point: the normal bundle twists down
        # by one point of degree 1, i.e. its total degree drops by 2.
        p = p2_bundle(0, 0, 0)
        line = CurveData(genus=0, hits={"xi": 1, "F": 0})
        before = normal_degree(p, line)
        x = blow_up_point(p, PointData())
        after = normal_degree(
            x, CurveData(genus=0, hits={"xi": 1, "F": 0, "E1": 1})
        )
        assert after == before - 2


class TestContract:
    def test_point_roundtrip(self):
        q = quadric_fibration(2, 1)
        x = blow_up_point(q, PointData())
        back = contract(x, D.unit("E1"), PointPattern())
        assert back.form == q.form
        assert back.canonical == q.canonical

    def test_curve_roundtrip(self):
        q = quadric_fibration(2, 1)
        c = CurveData(genus=0, hits={"H": 1, "F": 0})
        x = blow_up_curve(q, c)
        back = contract(x, D.unit("E1"), CurvePattern(expected_cube=0))
        assert back.form == q.form

    def test_unknown_cube_rejected(self):
        q = quadric_fibration(2, 1)
        x = blow_up_point(q, PointData())
        with pytest.raises(PatternMismatch):
            contract(x, 5 * D.unit("E1"), PointPattern())
        with pytest.raises(PatternMismatch):
            contract(x, D.unit("E1"), CurvePattern(expected_cube=5))

    def test_fiber_contraction_yields_quadric(self):
        # Blow up a ruling, contract the fiber transform: quadric again.
        q = quadric_fibration(-4, 3)
        r = CurveData(genus=0, hits={"H": 1, "F": 0})
        x = blow_up_curve(q, r)
        e = D.unit("E1")
        exc = D.unit("F") - e
        basis = {"H": D.unit("H") - e, "F": D.unit("F")}
        q2 = contract(x, exc, FiberPattern(), basis, "F")
        assert q2.form.value("H", "H", "F") == 2
        assert anticanonical_cube(q2) == 40

    def test_pullback_condition_enforced(self):
        q = quadric_fibration(-4, 3)
        r = CurveData(genus=0, hits={"H": 1, "F": 0})
        x = blow_up_curve(q, r)
        e = D.unit("E1")
        bad_basis = {"H": D.unit("H"), "F": D.unit("F")}  # H is not a pullback
        with pytest.raises(PatternMismatch):
            contract(x, D.unit("F") - e, FiberPattern(), bad_basis, "F")

    def test_pushforward_decomposition(self):
        q = quadric_fibration(-4, 3)
        r = CurveData(genus=0, hits={"H": 1, "F": 0})
        x = blow_up_curve(q, r)
        e = D.unit("E1")
        exc = D.unit("F") - e
        basis = {"H": D.unit("H") - e, "F": D.unit("F")}
        pushed, gamma = pushforward(x, basis, exc, D.unit("H") - e)
        assert (pushed, gamma) == (D.unit("H"), 0)
        pushed, gamma = pushforward(x, basis, exc, D.unit("F"))
        assert (pushed, gamma) == (D.unit("F"), 0)
        pushed, gamma = pushforward(x, basis, exc, e)
        assert (pushed, gamma) == (D.unit("F"), -1)


class TestSurfaces:
    def test_elementary_transform_directions(self):
        assert elementary_transform(hirzebruch(3), False).degree == 2
        assert elementary_transform(hirzebruch(3), True).degree == 4
        assert elementary_transform(smooth_quadric_fiber(), True).degree == 1

    def test_degree_underflow(self):
        with pytest.raises(DegreeUnderflow):
            elementary_transform(hirzebruch(0), False)

    def test_k_squared_preserved(self):
        for d in range(4):
            s = hirzebruch(d)
            t = elementary_transform(s, True)
            assert s.pair(s.canonical, s.canonical) == 8
            assert t.pair(t.canonical, t.canonical) == 8
