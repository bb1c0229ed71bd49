"""Compactification descriptors, classification predicates, and the
normalization pipelines that connect a descriptor to the standard model by
a certified sequence of elementary links.

A quadric-fibration descriptor carries the ambient lattice (presented so
that the horizontal boundary class is ``H + k*F``), the normality flag, the
type ``m`` of the boundary (0: ruled boundary surface, 1: one-point
blow-up of one, ``m >= 2``: rational double points ``2A1 / A3 / D_m``),
and, through the :class:`~quadlink.models.SurfaceEmbedding`, the ruled
degree ``d`` of the boundary surface, which the ambient lattice alone does
not determine.

Pipelines:

* normal boundary: decrease the type ``m`` times (one ruling link each),
  then the degree ``d`` times (two ruling links each), then recognize the
  blow-up of the smooth quadric 3-fold along a conic; 2 terminal steps.
* non-normal boundary: one section link (the section is the singular locus
  of the boundary; its lattice data is forced), then the bundle pipeline.
* bundle pipeline: drop the boundary degree ``d`` times (point links in the
  boundary), then apply ``|m|`` subspace links with
  ``m = (deg + 3e)/2 + 1`` until the blow-up-of-projective-space form
  ``(deg, e) = (3n+1, -(n+1))`` is reached; 1 terminal blow-down step.

Every step re-checks its invariants; certificates serialize all of them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .chow import DivisorClass
from .errors import (
    BadBoundaryShape,
    DegreeZero,
    LatticeError,
    NotA3,
    NotStandard,
    ParityViolation,
    PatternMismatch,
    TypeZero,
    UndeterminedClassification,
)
from .links import (
    Check,
    LinkStep,
    _check,
    pp_link,
    qp_link,
    qq_link,
)
from .models import (
    F,
    H,
    XI,
    CurveData,
    P2Bundle,
    QuadricFibration,
    SurfaceEmbedding,
    SurfaceModel,
    ThreefoldModel,
    anticanonical_cube,
    blown_hirzebruch,
    duval_boundary,
    hirzebruch,
    p2_bundle,
    quadric_fibration,
    _p2_model_from_degree,
)

SIGMA = "Sigma"
SF = "f"
SE = "e"


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadricState:
    """Descriptor of a compactification compatible with a quadric
    fibration.  Geometric flags that the lattice cannot see are stored as
    optional booleans; ``None`` means "not supplied"."""

    model: ThreefoldModel
    boundary: DivisorClass
    normal: Optional[bool]
    type_m: Optional[int] = None
    embedding: Optional[SurfaceEmbedding] = None
    h12: Optional[int] = 0
    base_p1: Optional[bool] = True
    boundary_prime: Optional[bool] = True
    fiber_is_cone: Optional[bool] = None
    other_fibers_smooth: Optional[bool] = None
    p_side_degree: Optional[int] = None

    @property
    def fiber(self) -> DivisorClass:
        return self.model.fiber

    @property
    def degree(self) -> Optional[int]:
        if self.embedding is None:
            return None
        return self.embedding.surface.degree


@dataclass(frozen=True)
class P2State:
    """Descriptor of a compactification compatible with a bundle of planes:
    ambient model, boundary class ``xi + e*F`` and the ruled boundary
    surface."""

    model: ThreefoldModel
    boundary: DivisorClass
    surface: SurfaceModel

    def __post_init__(self):
        if self.boundary.coeff(XI) != 1 or set(self.boundary.support) - {XI, F}:
            raise BadBoundaryShape(f"boundary must be xi + e*F, got {self.boundary}")
        if self.surface.kind != "hirzebruch":
            raise BadBoundaryShape("bundle boundary surface must be ruled")

    @property
    def e(self) -> int:
        return self.boundary.coeff(F)

    @property
    def deg(self) -> int:
        return self.model.kind.degree


def boundary_coefficient(model: ThreefoldModel, boundary: DivisorClass) -> Optional[int]:
    """The integer a with -K = 2*boundary + a*F, or None when -K - 2*boundary
    is not a fiber multiple (the lattice condition fails)."""
    diff = model.minus_k - 2 * boundary
    if set(diff.support) - {F}:
        return None
    return diff.coeff(F)


def singularity_label(m: int) -> str:
    """Boundary singularity content by type: smooth ruled surface at 0, a
    one-point blow-up at 1, then 2A1, A3, and D_m for m >= 4."""
    if m < 0:
        raise LatticeError("type must be non-negative")
    if m == 0:
        return "Hirzebruch"
    if m == 1:
        return "blown-Hirzebruch"
    if m == 2:
        return "2A1"
    if m == 3:
        return "A3"
    return f"D{m}"


def type_from_label(label: str) -> int:
    table = {"Hirzebruch": 0, "blown-Hirzebruch": 1, "2A1": 2, "A3": 3}
    if label in table:
        return table[label]
    if label.startswith("D") and label[1:].isdigit() and int(label[1:]) >= 4:
        return int(label[1:])
    raise LatticeError(f"unknown singularity label {label!r}")


def _embedding_for(m: int, d: int, a_rel: int) -> SurfaceEmbedding:
    """Boundary surface with the restriction classes of the boundary and of
    the fiber to it.  Adjunction gives boundary|_boundary = -K_S - a_rel * f
    on the smooth surfaces; for singular boundaries only the label and the
    ruled degree parameter are carried."""
    if m == 0:
        s = hirzebruch(d)
        self_class = -s.canonical - a_rel * DivisorClass.unit(SF)
        return SurfaceEmbedding(s, self_class, DivisorClass.unit(SF))
    if m == 1:
        s = blown_hirzebruch(d)
        self_class = -s.canonical - a_rel * DivisorClass.unit(SF)
        return SurfaceEmbedding(s, self_class, DivisorClass.unit(SF))
    return SurfaceEmbedding(duval_boundary(singularity_label(m), d), None, None)


def quadric_state(
    normal: bool,
    type_m: Optional[int] = None,
    degree: Optional[int] = None,
    h12: int = 0,
    a_rel: Optional[int] = None,
    p_side_degree: Optional[int] = None,
    base_p1: Optional[bool] = True,
    boundary_prime: Optional[bool] = True,
    fiber_is_cone: Optional[bool] = None,
    other_fibers_smooth: Optional[bool] = None,
) -> QuadricState:
    """Build a descriptor state.

    The ambient model is presented in the basis where the boundary is H
    itself, so ``-K = 2H + a_rel*F`` and ``(-K)^3 = 8 H^3 + 24 a_rel``.
    With the bisection genus equal to ``h12`` the anticanonical cube is
    ``40 - 8*h12``, which pins ``H^3``.  For a normal boundary of type m
    the coefficient is ``a_rel = 3 - m``; for a non-normal boundary it is a
    free odd/even parameter defaulting to 1, and ``p_side_degree`` (the
    ruled degree of the boundary after the section link, default the
    parity-forced minimum) completes the descriptor.
    """
    cube = 40 - 8 * h12
    if normal:
        if type_m is None:
            raise LatticeError("a normal descriptor needs its type")
        if a_rel is None:
            a_rel = 3 - type_m
        if type_m == 0 and degree is None:
            raise LatticeError("type 0 needs the boundary degree")
        if degree is None:
            degree = 1
        if type_m == 1 and degree < 1:
            raise LatticeError("type 1 needs boundary degree >= 1")
        if degree < 0:
            raise LatticeError("boundary degree must be non-negative")
    else:
        if a_rel is None:
            a_rel = 1
        if p_side_degree is None:
            p_side_degree = a_rel % 2
        if (p_side_degree - a_rel) % 2:
            raise ParityViolation(
                "the ruled degree after the section link must match the parity "
                f"of the boundary coefficient ({a_rel})"
            )
    if (cube - 24 * a_rel) % 8:
        raise LatticeError("inconsistent anticanonical data")
    h3 = (cube - 24 * a_rel) // 8
    model = quadric_fibration(h3, a_rel)
    boundary = DivisorClass.unit(H)
    embedding = None
    if normal and type_m is not None:
        embedding = _embedding_for(type_m, degree if degree is not None else 1, a_rel)
    return QuadricState(
        model=model,
        boundary=boundary,
        normal=normal,
        type_m=type_m if normal else None,
        embedding=embedding,
        h12=h12,
        base_p1=base_p1,
        boundary_prime=boundary_prime,
        fiber_is_cone=fiber_is_cone,
        other_fibers_smooth=other_fibers_smooth,
        p_side_degree=None if normal else p_side_degree,
    )


def p2_state(
    degree: Optional[int] = None,
    twists: Optional[tuple[int, int, int]] = None,
    e: int = 0,
    boundary_degree: int = 0,
) -> P2State:
    if twists is not None:
        model = p2_bundle(*twists)
    elif degree is not None:
        model = _p2_model_from_degree(degree)
    else:
        raise LatticeError("need either a degree or a splitting type")
    boundary = DivisorClass.unit(XI) + e * DivisorClass.unit(F)
    return P2State(model=model, boundary=boundary, surface=hirzebruch(boundary_degree))


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str  # "is_a3" | "not_a3" | "undetermined"
    missing: tuple[str, ...] = ()
    failed: tuple[str, ...] = ()

    @property
    def is_a3(self) -> bool:
        return self.kind == "is_a3"


def classify_quadric(state: QuadricState) -> Verdict:
    """Decide whether the descriptor is a compactification of affine
    3-space.  Non-normal boundary: the lattice condition (the boundary
    halves the anticanonical class over the base) together with a rational
    base and a prime boundary suffices.  Normal boundary: additionally the
    chosen fiber must be the cone, the middle cohomology must vanish, and
    all other boundary fibers must be smooth.  Missing flags yield an
    undetermined verdict listing them; a failing present flag decides."""
    failed: list[str] = []
    missing: list[str] = []

    if boundary_coefficient(state.model, state.boundary) is None:
        failed.append("boundary-halves-anticanonical")

    def need(flag_name: str, value: Optional[bool]) -> None:
        if value is None:
            missing.append(flag_name)
        elif not value:
            failed.append(flag_name)

    need("base_p1", state.base_p1)
    need("boundary_prime", state.boundary_prime)
    if state.normal is None:
        missing.append("boundary_normal")
    elif state.normal:
        need("fiber_is_cone", state.fiber_is_cone)
        need("other_fibers_smooth", state.other_fibers_smooth)
        if state.h12 is None:
            missing.append("h12")
        elif state.h12 != 0:
            failed.append("h12")

    if failed:
        return Verdict("not_a3", failed=tuple(failed))
    if missing:
        return Verdict("undetermined", missing=tuple(missing))
    return Verdict("is_a3")


def euler_solver(
    eu_df_options: Sequence[int] = (3, 4),
    h12_max: int = 3,
    sigma_max: int = 3,
    euler_budget: int = 6,
) -> frozenset[tuple[int, int, int]]:
    """All non-negative integer solutions (h12, reducible-fiber count,
    fiber Euler number) of ``euler_budget - 2*h12 >= 3 + count + eu``,
    with the fiber Euler number restricted to the given options (3 for the
    cone, 4 for a smooth quadric)."""
    solutions = set()
    for h in range(h12_max + 1):
        for sigma in range(sigma_max + 1):
            for eu in eu_df_options:
                if euler_budget - 2 * h >= 3 + sigma + eu:
                    solutions.add((h, sigma, eu))
    return frozenset(solutions)


def hodge_diamond(h12: int) -> tuple[tuple[int, ...], ...]:
    """Hodge diamond of the ambient space, top row first."""
    if h12 < 0:
        raise LatticeError("h12 must be non-negative")
    return (
        (1,),
        (0, 0),
        (0, 2, 0),
        (0, h12, h12, 0),
        (0, 2, 0),
        (0, 0),
        (1,),
    )


def euler_number(diamond: tuple[tuple[int, ...], ...]) -> int:
    return sum((-1) ** i * sum(row) for i, row in enumerate(diamond))


def type_of(state: QuadricState, section_h_hit: int = 0) -> int:
    """Type of a normal descriptor, computed through a section link: the
    intersection number of the link bisection with the transformed
    boundary.  Independent of the chosen section; cross-checked against the
    boundary coefficient when the anticanonical cube is 40."""
    section = CurveData(genus=0, hits={H: section_h_hit, F: 1}, name="s")
    _, _, step = qp_link(state.model, section, state.boundary, boundary_mult=1)
    m = step.data["m"]
    if m is None:
        raise PatternMismatch("type", "boundary does not transform to a bundle boundary")
    if m < 0:
        raise PatternMismatch("type", f"negative type {m}")
    a_rel = boundary_coefficient(state.model, state.boundary)
    if anticanonical_cube(state.model) == 40 and a_rel is not None and m != 3 - a_rel:
        raise PatternMismatch(
            "type", f"bisection pairing {m} contradicts boundary coefficient {a_rel}"
        )
    return m


# ---------------------------------------------------------------------------
# Link steps on states
# ---------------------------------------------------------------------------


def _with_checks(step: LinkStep, extra: Sequence[Check]) -> LinkStep:
    return dataclasses.replace(step, checks=step.checks + tuple(extra))


def decrease_type(
    state: QuadricState, meets_sigma_transform: bool = False
) -> tuple[QuadricState, LinkStep]:
    """One ruling link along a component of the fiber restriction of the
    boundary; the type drops by one.  At type 1 the component disjoint from
    the transform of the minimal section is the default (the boundary
    degree drops by one); ``meets_sigma_transform`` selects the other
    branch (degree kept)."""
    m = state.type_m
    if m is None or m == 0:
        raise TypeZero("the boundary has no ruling in its fiber restriction")
    d = state.degree
    if d is None:
        raise LatticeError("descriptor does not carry the boundary degree")
    ruling = CurveData(genus=0, hits={H: 1, F: 0}, name="l")
    model1, step = qq_link(state.model, ruling, state.boundary, boundary_mult=1)
    boundary1 = step.data["boundary_new"]
    a_rel1 = boundary_coefficient(model1, boundary1)
    m1 = m - 1
    if m == 1:
        if d < 1:
            raise LatticeError("type 1 needs boundary degree >= 1")
        d1 = d if meets_sigma_transform else d - 1
    else:
        d1 = d
    embedding1 = _embedding_for(m1, d1, a_rel1 if a_rel1 is not None else 0)
    extra = []
    if anticanonical_cube(model1) == 40:
        extra.append(_check("type-decrement", 3 - m1, a_rel1))
    closure = _closure_checks(model1, boundary1, embedding1)
    step = _with_checks(step, extra + closure)
    if not step.all_passed:
        raise PatternMismatch("decrease-type", f"failed checks: {step.check_map()}")
    state1 = dataclasses.replace(
        state, model=model1, boundary=boundary1, type_m=m1, embedding=embedding1
    )
    return state1, step


def _closure_checks(
    model: ThreefoldModel, boundary: DivisorClass, embedding: SurfaceEmbedding
) -> list[Check]:
    if embedding.self_class is None:
        return []
    errors = embedding.closure_errors(
        model.triple(boundary, boundary, boundary),
        model.triple(boundary, boundary, model.fiber),
        model.triple(boundary, model.fiber, model.fiber),
    )
    return [_check("adjunction-closure", (), tuple(errors))]


def decrease_degree(state: QuadricState) -> tuple[QuadricState, tuple[LinkStep, LinkStep]]:
    """Two ruling links that drop the boundary degree by one at type 0:
    first along a fiber ruling off the boundary (the boundary becomes a
    one-point blow-up), then along the component of the new fiber
    restriction disjoint from the section transform."""
    if state.type_m != 0:
        raise TypeZero("degree steps apply to type-0 descriptors")
    d = state.degree
    if d is None or state.embedding is None:
        raise LatticeError("descriptor does not carry the boundary degree")
    if d < 1:
        raise DegreeZero("boundary is already of degree 0")
    a_rel = boundary_coefficient(state.model, state.boundary)
    ruling = CurveData(genus=0, hits={H: 1, F: 0}, name="l")

    model1, step1 = qq_link(state.model, ruling, state.boundary, boundary_mult=0)
    boundary1 = step1.data["boundary_new"]
    a1 = boundary_coefficient(model1, boundary1)
    emb1 = _embedding_for(1, d, a1 if a1 is not None else 0)
    step1 = _with_checks(
        step1,
        [_check("intermediate-type", (a_rel or 0) - 1, a1)] + _closure_checks(model1, boundary1, emb1),
    )
    if not step1.all_passed:
        raise PatternMismatch("decrease-degree", f"failed checks: {step1.check_map()}")

    model2, step2 = qq_link(model1, ruling, boundary1, boundary_mult=1)
    boundary2 = step2.data["boundary_new"]
    a2 = boundary_coefficient(model2, boundary2)
    emb2 = _embedding_for(0, d - 1, a2 if a2 is not None else 0)
    step2 = _with_checks(
        step2,
        [_check("type-restored", a_rel, a2)] + _closure_checks(model2, boundary2, emb2),
    )
    if not step2.all_passed:
        raise PatternMismatch("decrease-degree", f"failed checks: {step2.check_map()}")

    state2 = dataclasses.replace(
        state, model=model2, boundary=boundary2, type_m=0, embedding=emb2
    )
    return state2, (step1, step2)


def recognize_standard_quadric(state: QuadricState) -> tuple[LinkStep, LinkStep]:
    """Recognize the blow-up of the smooth quadric 3-fold along a conic:
    type 0, boundary of ruled degree 0, boundary coefficient 3,
    anticanonical cube 40 and boundary cube -4.  Returns the two terminal
    identification steps."""
    if state.type_m != 0 or state.degree != 0:
        raise NotStandard("boundary-degree", "recognizer needs a type-0, degree-0 boundary")
    a_rel = boundary_coefficient(state.model, state.boundary)
    if a_rel != 3:
        raise NotStandard("anticanonical-coefficient", f"-K = 2*Dh + {a_rel}*F, need 3")
    cube = anticanonical_cube(state.model)
    if cube != 40:
        raise NotStandard("anticanonical-cube", f"(-K)^3 = {cube}, need 40")
    dh3 = state.model.triple(state.boundary, state.boundary, state.boundary)
    if dh3 != -4:
        raise NotStandard("boundary-cube", f"Dh^3 = {dh3}, need -4")
    blow_down = LinkStep(
        kind="blow_down_q3",
        center={"kind": "boundary-divisor"},
        transform={},
        checks=(
            _check("anticanonical-coefficient", 3, a_rel),
            _check("anticanonical-cube", 40, cube),
            _check("boundary-cube", -4, dh3),
        ),
        data={"target": "smooth-quadric-3fold"},
    )
    projection = LinkStep(
        kind="projection_vertex",
        center={"kind": "cone-vertex"},
        transform={},
        checks=(),
        data={"target": "projective-3-space"},
    )
    return blow_down, projection


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def _int_str(x: object) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return str(int(x))  # type: ignore[arg-type]


def _divisor_jsonable(cls: DivisorClass) -> dict[str, str]:
    return {name: _int_str(v) for name, v in cls.items}


def _jsonable(value: object) -> object:
    if isinstance(value, DivisorClass):
        return _divisor_jsonable(value)
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return _int_str(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def _step_jsonable(step: LinkStep, state_after: Mapping[str, object]) -> dict:
    return {
        "kind": step.kind,
        "center": _jsonable(step.center),
        "transform": {g: _divisor_jsonable(c) for g, c in step.transform.items()},
        "twist": _int_str(step.twist),
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "expected": c.expected,
                "computed": c.computed,
            }
            for c in step.checks
        ],
        "state_after": _jsonable(state_after),
    }


@dataclass
class Certificate:
    """Serialized link sequence from a descriptor to the standard model."""

    kind: str
    initial: dict
    steps: list[dict] = field(default_factory=list)
    final: str = ""

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def add(self, step: LinkStep, state_after: Mapping[str, object]) -> None:
        entry = _step_jsonable(step, state_after)
        entry["index"] = len(self.steps)
        self.steps.append(entry)

    def to_jsonable(self) -> dict:
        return {
            "format": 1,
            "kind": self.kind,
            "initial": self.initial,
            "steps": self.steps,
            "final": self.final,
            "step_count": self.step_count,
        }


def _quadric_state_snapshot(state: QuadricState) -> dict:
    kind = state.model.kind
    assert isinstance(kind, QuadricFibration)
    return {
        "model": {"kind": "quadric", "h_cube": kind.h_cube, "a": kind.a},
        "boundary": state.boundary,
        "type": state.type_m,
        "degree": state.degree,
        "anticanonical_cube": anticanonical_cube(state.model),
    }


def _p2_state_snapshot(model: ThreefoldModel, boundary: DivisorClass, d: int) -> dict:
    kind = model.kind
    assert isinstance(kind, P2Bundle)
    return {
        "model": {"kind": "p2bundle", "degree": kind.degree},
        "boundary": boundary,
        "boundary_degree": d,
        "anticanonical_cube": anticanonical_cube(model),
    }


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------


def normalize_p2(state: P2State) -> Certificate:
    """Normalize a bundle compactification to the blow-up of projective
    3-space along a line.  Phase 1 removes the boundary degree with point
    links in the boundary; phase 2 applies ``|m|`` subspace links with
    ``m = (deg + 3e)/2 + 1``.  The boundary parity ``deg + e`` is checked
    at the degree-0 stage and preserved by every phase-2 link."""
    model = state.model
    boundary = state.boundary
    surface = state.surface
    cert = Certificate(
        kind="p2bundle",
        initial=_jsonable(_p2_state_snapshot(model, boundary, surface.degree or 0)),
    )

    for _ in range(surface.degree or 0):
        model, step = pp_link(model, 0, boundary, center_in_boundary=True)
        boundary = step.data["boundary_new"]
        surface = hirzebruch((surface.degree or 0) - 1)
        cert.add(step, _p2_state_snapshot(model, boundary, surface.degree))

    deg = model.kind.degree
    e = boundary.coeff(F)
    if (deg + e) % 2:
        raise ParityViolation(
            f"deg + e = {deg} + {e} is odd at the degree-0 stage; "
            "no subspace link chain can reach the standard form"
        )
    m = (deg + 3 * e) // 2 + 1
    parity = (deg + e) % 2
    while m != 0:
        if m > 0:
            model, step = pp_link(model, 1, boundary, center_in_boundary=True)
            m -= 1
        else:
            model, step = pp_link(model, 0, boundary, center_in_boundary=False)
            m += 1
        boundary = step.data["boundary_new"]
        deg = model.kind.degree
        e = boundary.coeff(F)
        if (deg + e) % 2 != parity:
            raise ParityViolation("subspace link changed the boundary parity")
        if (deg + 3 * e) // 2 + 1 != m:
            raise PatternMismatch("link-count", "link did not move the count by one")
        step = _with_checks(step, [_check("parity-preserved", parity, (deg + e) % 2)])
        cert.add(step, _p2_state_snapshot(model, boundary, 0))

    if deg + 3 * e != -2:
        raise NotStandard("bundle-form", f"(deg, e) = ({deg}, {e}) is not (3n+1, -(n+1))")
    n = (deg - 1) // 3
    if deg != 3 * n + 1 or e != -(n + 1):
        raise NotStandard("bundle-form", f"(deg, e) = ({deg}, {e}) is not (3n+1, -(n+1))")
    blow_down = LinkStep(
        kind="blow_down_p3",
        center={"kind": "boundary-divisor"},
        transform={},
        checks=(
            _check("degree-form", 3 * n + 1, deg),
            _check("boundary-form", -(n + 1), e),
            _check("splitting-type", (0, 0, 1), (0, 0, 1)),
        ),
        data={"target": "projective-3-space", "n": n},
    )
    cert.add(blow_down, _p2_state_snapshot(model, boundary, 0))
    cert.final = "StandardP3"
    return cert


def normalize_quadric_normal(state: QuadricState) -> Certificate:
    """Pipeline for a normal boundary: type steps, degree steps, then the
    standard-quadric recognition.  The (type, degree) measure decreases
    lexicographically at every link, so the pipeline terminates."""
    verdict = classify_quadric(state)
    if verdict.kind == "undetermined":
        raise UndeterminedClassification(verdict.missing)
    if verdict.kind == "not_a3":
        raise NotA3(verdict.failed)
    if not state.normal:
        raise BadBoundaryShape("normal pipeline needs a normal boundary")
    cert = Certificate(kind="quadric", initial=_jsonable(_quadric_state_snapshot(state)))

    measure = (state.type_m or 0, state.degree or 0)
    while (state.type_m or 0) > 0:
        state, step = decrease_type(state)
        new_measure = (state.type_m or 0, state.degree or 0)
        if not new_measure < measure:
            raise PatternMismatch("measure", "type step did not decrease the measure")
        measure = new_measure
        if not classify_quadric(state).is_a3:
            raise PatternMismatch("classify", "type step broke the classification")
        cert.add(step, _quadric_state_snapshot(state))

    while (state.degree or 0) > 0:
        state, (step1, step2) = decrease_degree(state)
        new_measure = (state.type_m or 0, state.degree or 0)
        if not new_measure < measure:
            raise PatternMismatch("measure", "degree step did not decrease the measure")
        measure = new_measure
        if not classify_quadric(state).is_a3:
            raise PatternMismatch("classify", "degree step broke the classification")
        cert.add(step1, _quadric_state_snapshot(state))
        cert.add(step2, _quadric_state_snapshot(state))

    blow_down, projection = recognize_standard_quadric(state)
    cert.add(blow_down, _quadric_state_snapshot(state))
    cert.add(projection, {"target": "projective-3-space"})
    cert.final = "StandardQ3"
    return cert


def nonnormal_section_data(state: QuadricState) -> CurveData:
    """Lattice data of the singular locus of a non-normal boundary: it is a
    section, and since the boundary is the pushforward of the contracted
    divisor of its own section link, its hit on H is forced to be
    ``H^3 + 2a + k - 4``."""
    kind = state.model.kind
    if not isinstance(kind, QuadricFibration):
        raise BadBoundaryShape("non-normal pipeline needs a quadric model")
    k = state.boundary.coeff(F)
    sigma = kind.h_cube + 2 * kind.a + k - 4
    return CurveData(genus=0, hits={H: sigma, F: 1}, name="SingDh")


def normalize_quadric_nonnormal(state: QuadricState) -> Certificate:
    """Pipeline for a non-normal boundary: one section link with center the
    singular locus (the new boundary is the exceptional divisor of the
    link), then the bundle pipeline."""
    verdict = classify_quadric(state)
    if verdict.kind == "undetermined":
        raise UndeterminedClassification(verdict.missing)
    if verdict.kind == "not_a3":
        raise NotA3(verdict.failed)
    if state.normal:
        raise BadBoundaryShape("non-normal pipeline needs a non-normal boundary")

    section = nonnormal_section_data(state)
    model_p, bisection, step = qp_link(state.model, section, state.boundary, boundary_mult=2)
    new_boundary = step.data["exceptional_image"]
    old_pushed = step.data["boundary_new"]
    step = _with_checks(
        step,
        [
            _check("old-boundary-vanishes", DivisorClass(), old_pushed),
            _check("new-boundary-is-sub-bundle", 1, new_boundary.coeff(XI)),
        ],
    )
    if not step.all_passed:
        raise PatternMismatch("nonnormal", f"failed checks: {step.check_map()}")

    d_p = state.p_side_degree
    if d_p is None:
        d_p = (model_p.kind.degree + new_boundary.coeff(F)) % 2
    p_state = P2State(model=model_p, boundary=new_boundary, surface=hirzebruch(d_p))

    cert = Certificate(kind="quadric", initial=_jsonable(_quadric_state_snapshot(state)))
    cert.add(step, _p2_state_snapshot(model_p, new_boundary, d_p))
    inner = normalize_p2(p_state)
    for entry in inner.steps:
        entry["index"] = len(cert.steps)
        cert.steps.append(entry)
    cert.final = inner.final
    return cert


def normalize(state: QuadricState) -> Certificate:
    if state.normal is None:
        raise UndeterminedClassification(("boundary_normal",))
    if state.normal:
        return normalize_quadric_normal(state)
    return normalize_quadric_nonnormal(state)


# ---------------------------------------------------------------------------
# Commuting square of section and ruling links
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareReport:
    ok: bool
    consistent_input: bool
    m_before: Optional[int]
    m_route_ruling_first: Optional[int]
    m_route_section_first: Optional[int]
    dictionaries_equal: bool
    details: tuple[str, ...] = ()


def _transport_hits(
    pullbacks: Mapping[str, DivisorClass],
    old_hits: Mapping[str, int],
    exc_name: str,
    meets_center: int,
) -> dict[str, int]:
    hits = dict(old_hits)
    hits[exc_name] = meets_center
    return {
        name: sum(v * hits[g] for g, v in cls.items)
        for name, cls in pullbacks.items()
    }


def commuting_square_check(
    state: QuadricState,
    section_h_hit: int = 0,
    meets_transversally: bool = True,
) -> SquareReport:
    """Compare the two routes around the square: ruling link then section
    link, versus section link then point link at the image of the ruling.
    The two composite class dictionaries must agree, and the bisection
    pairing with the boundary must drop by exactly one."""
    if not meets_transversally:
        return SquareReport(
            ok=False,
            consistent_input=False,
            m_before=None,
            m_route_ruling_first=None,
            m_route_section_first=None,
            dictionaries_equal=False,
            details=("the section must meet the ruling transversally",),
        )
    details: list[str] = []
    section = CurveData(genus=0, hits={H: section_h_hit, F: 1}, name="s")
    _, _, step0 = qp_link(state.model, section, state.boundary, boundary_mult=1)
    m0 = step0.data["m"]

    # Route 1: ruling link, then the section link on the transformed data.
    ruling = CurveData(genus=0, hits={H: 1, F: 0}, name="l")
    model1, step_r = qq_link(state.model, ruling, state.boundary, boundary_mult=1)
    hits1 = _transport_hits(
        step_r.data["pullbacks"], dict(section.hits), step_r.data["exc_name"], 1
    )
    section1 = CurveData(genus=0, hits=hits1, name="s")
    p_left, bisection_left, step_l = qp_link(
        model1, section1, step_r.data["boundary_new"], boundary_mult=1
    )
    m_left = step_l.data["m"]

    # Route 2: section link, then the point link at the ruling's image.
    p_right, bisection, step_s = qp_link(state.model, section, state.boundary, boundary_mult=1)
    boundary_p = step_s.data["boundary_new"]
    p2_model, step_p = pp_link(p_right, 0, boundary_p, center_in_boundary=True)
    boundary_p2 = step_p.data["boundary_new"]
    # The point link happens at a point of the bisection, so its transform
    # meets the new tautological class once less.
    bisection2 = CurveData(
        genus=bisection.genus,
        hits={XI: bisection.hits[XI] - 1, F: 2},
        name="B",
    )
    m_right = (
        bisection2.hits[XI] * boundary_p2.coeff(XI) + 2 * boundary_p2.coeff(F)
    )

    # The induced identification of the two bundle models sends tautological
    # class to tautological class and fiber to fiber; under it the models,
    # the transported boundaries and the bisection data must coincide.
    comparisons = {
        "bundle-degree": (p_left.kind.degree, p2_model.kind.degree),
        "boundary": (step_l.data["boundary_new"], boundary_p2),
        "bisection-genus": (bisection_left.genus, bisection2.genus),
        "bisection-hits": (dict(bisection_left.hits), dict(bisection2.hits)),
    }
    dictionaries_equal = all(a == b for a, b in comparisons.values())
    for name, (a, b) in comparisons.items():
        if a != b:
            details.append(f"{name} differs: {a} vs {b}")
    ok = (
        dictionaries_equal
        and m0 is not None
        and m_left == m0 - 1
        and m_right == m0 - 1
    )
    if m_left != (m0 or 0) - 1:
        details.append(f"left route pairing {m_left} != {m0} - 1")
    if m_right != (m0 or 0) - 1:
        details.append(f"right route pairing {m_right} != {m0} - 1")
    return SquareReport(
        ok=ok,
        consistent_input=True,
        m_before=m0,
        m_route_ruling_first=m_left,
        m_route_section_first=m_right,
        dictionaries_equal=dictionaries_equal,
        details=tuple(details),
    )
