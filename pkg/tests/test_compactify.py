import json

import pytest

from quadlink.chow import DivisorClass
from quadlink.compactify import (
    P2State,
    boundary_coefficient,
    classify_quadric,
    commuting_square_check,
    decrease_degree,
    decrease_type,
    euler_number,
    euler_solver,
    hodge_diamond,
    normalize,
    normalize_p2,
    normalize_quadric_nonnormal,
    normalize_quadric_normal,
    nonnormal_section_data,
    p2_state,
    quadric_state,
    recognize_standard_quadric,
    singularity_label,
    type_from_label,
    type_of,
)
from quadlink.errors import (
    DegreeZero,
    LatticeError,
    NotA3,
    NotStandard,
    ParityViolation,
    TypeZero,
    UndeterminedClassification,
)
from quadlink.models import anticanonical_cube, quadric_fibration

D = DivisorClass


def normal_state(m, d=None, **kw):
    kw.setdefault("fiber_is_cone", True)
    kw.setdefault("other_fibers_smooth", True)
    return quadric_state(normal=True, type_m=m, degree=d, **kw)


class TestClassify:
    def test_normal_is_a3(self):
        assert classify_quadric(normal_state(0, 0)).is_a3

    def test_smooth_fiber_is_not_a3(self):
        st = normal_state(0, 0, fiber_is_cone=False)
        v = classify_quadric(st)
        assert v.kind == "not_a3" and "fiber_is_cone" in v.failed

    def test_nonnormal_is_a3(self):
        assert classify_quadric(quadric_state(normal=False)).is_a3

    def test_missing_flags_undetermined(self):
        st = quadric_state(normal=True, type_m=0, degree=0)
        v = classify_quadric(st)
        assert v.kind == "undetermined"
        assert set(v.missing) == {"fiber_is_cone", "other_fibers_smooth"}

    def test_h12_nonzero_fails(self):
        st = normal_state(0, 0, h12=1)
        assert "h12" in classify_quadric(st).failed

    def test_lattice_condition_checked(self):
        st = normal_state(0, 0)
        broken = type(st)(
            model=st.model,
            boundary=D({"H": 1, "F": 0}) + D({"H": 1}),  # 2H is not H + kF
            normal=True,
            type_m=0,
            embedding=st.embedding,
            fiber_is_cone=True,
            other_fibers_smooth=True,
        )
        assert "boundary-halves-anticanonical" in classify_quadric(broken).failed


class TestNumerics:
    def test_euler_solver_unique(self):
        assert euler_solver() == frozenset({(0, 0, 3)})

    def test_euler_solver_smooth_only_empty(self):
        assert euler_solver(eu_df_options=(4,)) == frozenset()

    def test_euler_solver_relaxed(self):
        assert (0, 0, 4) in euler_solver(euler_budget=8)

    def test_hodge_diamond(self):
        d = hodge_diamond(0)
        assert d[0] == (1,) and d[2] == (0, 2, 0) and d[3] == (0, 0, 0, 0)
        assert euler_number(d) == 6
        assert euler_number(hodge_diamond(1)) == 4
        assert euler_number(hodge_diamond(2)) == 2

    def test_labels(self):
        assert singularity_label(0) == "Hirzebruch"
        assert singularity_label(1) == "blown-Hirzebruch"
        assert singularity_label(2) == "2A1"
        assert singularity_label(3) == "A3"
        assert singularity_label(4) == "D4"
        assert singularity_label(7) == "D7"
        for m in range(8):
            assert type_from_label(singularity_label(m)) == m

    def test_type_of(self):
        assert type_of(normal_state(0, 2)) == 0
        assert type_of(normal_state(1, 1)) == 1
        assert type_of(normal_state(4)) == 4


class TestTypeAndDegreeSteps:
    def test_decrease_type_m1_branches(self):
        st = normal_state(1, 3)
        out_disjoint, _ = decrease_type(st, meets_sigma_transform=False)
        assert (out_disjoint.type_m, out_disjoint.degree) == (0, 2)
        out_meeting, _ = decrease_type(st, meets_sigma_transform=True)
        assert (out_meeting.type_m, out_meeting.degree) == (0, 3)

    def test_decrease_type_m4_gives_a3_label(self):
        st = normal_state(4, 1)
        out, _ = decrease_type(st)
        assert out.type_m == 3
        assert out.embedding.surface.label == "A3"

    def test_decrease_type_rejects_type_zero(self):
        with pytest.raises(TypeZero):
            decrease_type(normal_state(0, 0))

    def test_decrease_degree(self):
        st = normal_state(0, 3)
        out, steps = decrease_degree(st)
        assert len(steps) == 2
        assert (out.type_m, out.degree) == (0, 2)

    def test_decrease_degree_to_zero(self):
        st = normal_state(0, 4)
        count = 0
        while st.degree > 0:
            st, steps = decrease_degree(st)
            count += len(steps)
        assert count == 2 * 4
        assert st.degree == 0

    def test_decrease_degree_rejects_zero(self):
        with pytest.raises(DegreeZero):
            decrease_degree(normal_state(0, 0))

    def test_classification_preserved_by_steps(self):
        st = normal_state(2, 2)
        st, _ = decrease_type(st)
        assert classify_quadric(st).is_a3
        st, _ = decrease_type(st)
        assert classify_quadric(st).is_a3
        st, _ = decrease_degree(st)
        assert classify_quadric(st).is_a3


class TestRecognizer:
    def test_standard_model(self):
        st = normal_state(0, 0)
        blow_down, projection = recognize_standard_quadric(st)
        assert blow_down.kind == "blow_down_q3"
        assert projection.kind == "projection_vertex"
        assert boundary_coefficient(st.model, st.boundary) == 3
        assert anticanonical_cube(st.model) == 40
        assert st.model.triple(st.boundary, st.boundary, st.boundary) == -4

    def test_cube_32_rejected_by_name(self):
        st = normal_state(0, 0, h12=1)  # (-K)^3 = 32
        with pytest.raises(NotStandard) as err:
            recognize_standard_quadric(st)
        assert err.value.identity == "anticanonical-cube"

    def test_wrong_degree_precondition(self):
        with pytest.raises(NotStandard) as err:
            recognize_standard_quadric(normal_state(0, 1))
        assert err.value.identity == "boundary-degree"


class TestNormalizeP2:
    @pytest.mark.parametrize(
        "deg,e,d,expected_steps",
        [(1, -1, 0, 1), (0, 0, 0, 2), (4, -2, 0, 1), (3, 1, 2, 6)],
    )
    def test_step_counts(self, deg, e, d, expected_steps):
        cert = normalize_p2(p2_state(degree=deg, e=e, boundary_degree=d))
        assert cert.step_count == expected_steps
        assert cert.final == "StandardP3"
        last = cert.steps[-1]
        assert last["kind"] == "blow_down_p3"

    def test_recognized_form(self):
        cert = normalize_p2(p2_state(degree=4, e=-2, boundary_degree=0))
        assert cert.steps[-1]["data" if False else "state_after"]
        n_check = [c for c in cert.steps[-1]["checks"] if c["name"] == "degree-form"]
        assert n_check and n_check[0]["passed"]

    def test_parity_violation(self):
        with pytest.raises(ParityViolation):
            normalize_p2(p2_state(degree=1, e=0, boundary_degree=0))
        with pytest.raises(ParityViolation):
            # even deg + e but odd boundary degree
            normalize_p2(p2_state(degree=2, e=0, boundary_degree=1))

    def test_twists_input(self):
        cert = normalize_p2(p2_state(twists=(0, 0, 1), e=-1, boundary_degree=0))
        assert cert.step_count == 1


class TestNormalizeQuadric:
    @pytest.mark.parametrize("d", range(6))
    def test_normal_m0_step_count(self, d):
        cert = normalize_quadric_normal(normal_state(0, d))
        assert cert.step_count == 2 * d + 2
        assert cert.final == "StandardQ3"

    @pytest.mark.parametrize("m", range(1, 6))
    def test_normal_positive_type(self, m):
        cert = normalize_quadric_normal(normal_state(m))
        assert cert.final == "StandardQ3"
        # default boundary degree 1 collapses to 0 when the type reaches 0
        assert cert.step_count == m + 2 * 0 + 2

    def test_measure_strictly_decreases(self):
        cert = normalize_quadric_normal(normal_state(3, 2))
        measures = []
        for entry in cert.steps:
            state = entry["state_after"]
            if "type" in state and state["type"] is not None:
                measures.append((state["type"], state["degree"]))
        assert all(a > b for a, b in zip(measures, measures[1:]) if a != b)
        assert measures[0] > measures[-1]

    def test_not_a3_raises(self):
        with pytest.raises(NotA3):
            normalize_quadric_normal(normal_state(0, 0, fiber_is_cone=False))

    def test_undetermined_raises(self):
        with pytest.raises(UndeterminedClassification) as err:
            normalize_quadric_normal(quadric_state(normal=True, type_m=0, degree=0))
        assert "fiber_is_cone" in err.value.missing

    def test_nonnormal_default(self):
        st = quadric_state(normal=False)
        cert = normalize_quadric_nonnormal(st)
        assert cert.final == "StandardP3"
        assert cert.steps[0]["kind"] == "qp"
        # 1 section link + bundle pipeline (d_P = 1, one subspace link, blow-down)
        assert cert.step_count == 4

    def test_nonnormal_section_is_forced(self):
        st = quadric_state(normal=False)
        s = nonnormal_section_data(st)
        kind = st.model.kind
        assert s.hits["H"] == kind.h_cube + 2 * kind.a - 4
        assert s.hits["F"] == 1

    def test_nonnormal_boundary_becomes_sub_bundle(self):
        st = quadric_state(normal=False, a_rel=0)
        cert = normalize_quadric_nonnormal(st)
        first = cert.steps[0]
        new_boundary = first["state_after"]["boundary"]
        assert new_boundary.get("xi") == "1"

    def test_nonnormal_parity_validation(self):
        with pytest.raises(ParityViolation):
            quadric_state(normal=False, a_rel=1, p_side_degree=0)

    def test_normalize_dispatch(self):
        assert normalize(normal_state(0, 0)).final == "StandardQ3"
        assert normalize(quadric_state(normal=False)).final == "StandardP3"


class TestCommutingSquare:
    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_square_commutes(self, m):
        report = commuting_square_check(normal_state(m, 2))
        assert report.ok
        assert report.m_route_ruling_first == m - 1
        assert report.m_route_section_first == m - 1
        assert report.dictionaries_equal

    def test_degenerate_input_flagged(self):
        report = commuting_square_check(normal_state(2), meets_transversally=False)
        assert not report.ok and not report.consistent_input


class TestCertificates:
    def test_replay_reproduces_states(self):
        # Re-run the recorded centers from the initial descriptor and check
        # every intermediate model and boundary class.
        from quadlink.links import qq_link
        from quadlink.models import CurveData

        st = normal_state(2, 2)
        cert = normalize_quadric_normal(st)
        model = st.model
        boundary = st.boundary
        for entry in cert.steps:
            if entry["kind"] != "qq":
                continue
            mult = int(entry["center"]["mult"])
            ruling = CurveData(genus=0, hits={"H": 1, "F": 0})
            model, step = qq_link(model, ruling, boundary, mult)
            boundary = step.data["boundary_new"]
            snap = entry["state_after"]["model"]
            assert int(snap["h_cube"]) == model.kind.h_cube
            assert int(snap["a"]) == model.kind.a
            snap_boundary = {g: int(v) for g, v in entry["state_after"]["boundary"].items()}
            assert snap_boundary == boundary.to_dict()

    def test_certificates_are_deterministic(self):
        from quadlink.cli import canonical_json

        for maker in (
            lambda: normalize_quadric_normal(normal_state(2, 1)),
            lambda: normalize_quadric_nonnormal(quadric_state(normal=False)),
            lambda: normalize_p2(p2_state(degree=3, e=1, boundary_degree=2)),
        ):
            a = canonical_json(maker().to_jsonable())
            b = canonical_json(maker().to_jsonable())
            assert a == b

    def test_certificate_checks_all_pass(self):
        cert = normalize_quadric_normal(normal_state(3, 1))
        for entry in cert.steps:
            for check in entry["checks"]:
                assert check["passed"], (entry["kind"], check)
