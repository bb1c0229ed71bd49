"""Elementary links between fibered 3-fold models.

Each link is blow-up-then-contract over the base: the engine performs the
blow-up on the trilinear form, certifies the contraction against a class
pattern, and returns the new model together with a :class:`LinkStep` that
records the transform, the center data and every invariant check.

Basis conventions (each one makes the tracked boundary classes integral):

* ``pp``: the new tautological class pulls back to ``xi - E``; blowing up a
  line inside the boundary is followed by the degree +1 twist, so the two
  center choices act on ``(deg, e)`` as ``(deg-1, e+1)`` (point off the
  boundary) and ``(deg+1, e-1)`` (line in the boundary).
* ``qp``: the new tautological class pulls back to ``H - E``; the divisor
  swept by the rulings through the section has class ``H - 2E + cF`` where
  ``c`` is pinned by requiring the complement to pair to zero against it.
* ``qq``: the new relative hyperplane class is anchored to the transformed
  boundary, ``H' := (boundary transform) - k F'`` for ``boundary = H + kF``;
  for a center inside the boundary this is the strict-transform convention
  ``H' = H - E`` and it makes the double link along corresponding rulings
  the identity on forms and boundary classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .chow import DivisorClass, TrilinearForm
from .errors import (
    BadBoundaryShape,
    InconsistentFlags,
    NotARuling,
    NotASection,
    PatternMismatch,
)
from .models import (
    F,
    H,
    XI,
    CurveData,
    CurvePattern,
    FiberPattern,
    P2Bundle,
    PointData,
    PointPattern,
    QuadricFibration,
    ThreefoldModel,
    _p2_model_from_degree,
    anticanonical_cube,
    blow_up_curve,
    blow_up_point,
    contract,
    pushforward,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: str
    computed: str


@dataclass(frozen=True)
class LinkStep:
    """One elementary link: kind, center data, the induced map on classes
    (total-transform pushforward, old generator to new class), the basis
    twist applied afterwards, and the recorded invariant checks."""

    kind: str
    center: Mapping[str, object]
    transform: Mapping[str, DivisorClass]
    twist: int = 0
    checks: tuple[Check, ...] = ()
    data: Mapping[str, object] = field(default_factory=dict)

    def check_map(self) -> dict[str, bool]:
        return {c.name: c.passed for c in self.checks}

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name: str, expected: object, computed: object) -> Check:
    return Check(name, expected == computed, str(expected), str(computed))


def _require_p2(model: ThreefoldModel) -> P2Bundle:
    if not isinstance(model.kind, P2Bundle) or model.generators != (XI, F):
        raise BadBoundaryShape("expected a P2-bundle model on basis (xi, F)")
    return model.kind


def _require_quadric(model: ThreefoldModel) -> QuadricFibration:
    if not isinstance(model.kind, QuadricFibration) or model.generators != (H, F):
        raise BadBoundaryShape("expected a quadric-fibration model on basis (H, F)")
    return model.kind


def _boundary_coords(boundary: DivisorClass, lead: str) -> int:
    """Validate ``boundary = lead + k*F`` and return k."""
    if boundary.coeff(lead) != 1 or set(boundary.support) - {lead, F}:
        raise BadBoundaryShape(f"boundary must be {lead} + k*F, got {boundary}")
    return boundary.coeff(F)


def _twist_p2_class(cls: DivisorClass, t: int) -> DivisorClass:
    """Basis change xi -> xi + tF on classes written in the (xi, F) basis."""
    return DivisorClass({XI: cls.coeff(XI), F: cls.coeff(F) - t * cls.coeff(XI)})


def twist_p2(model: ThreefoldModel, t: int) -> ThreefoldModel:
    """Re-present a P2-bundle model in the basis xi -> xi + tF."""
    kind = _require_p2(model)
    if t == 0:
        return model
    return _p2_model_from_degree(
        kind.degree + 3 * t,
        twists=None,
        history=model.history + (f"twist({t})",),
    )


def p2_canonical_presentation(model: ThreefoldModel) -> tuple[ThreefoldModel, int]:
    """Twist a P2-bundle model so its degree lies in {0, 1, 2}; returns the
    model and the twist used.  Two link-produced bundle models describe the
    same variety iff their canonical presentations have equal forms."""
    kind = _require_p2(model)
    residue = kind.degree % 3
    t = (residue - kind.degree) // 3
    return twist_p2(model, t), t


# ---------------------------------------------------------------------------
# Links between P2-bundles
# ---------------------------------------------------------------------------


def pp_link(
    P: ThreefoldModel,
    n: int,
    boundary: DivisorClass,
    center_in_boundary: bool,
) -> tuple[ThreefoldModel, LinkStep]:
    """Link with center a linear subspace of dimension n (0 or 1) in a
    fiber.  The degree drops by n+1 before the twist convention; the
    boundary transform and the containment of the new center both flip
    exactly when the old center was off the boundary."""
    kind = _require_p2(P)
    if n not in (0, 1):
        raise BadBoundaryShape("center must be a point (n=0) or a line (n=1)")
    e_bd = _boundary_coords(boundary, XI)

    if n == 0:
        center: Mapping[str, object] = {"kind": "point", "in_boundary": center_in_boundary}
        widetilde = blow_up_point(P, PointData(name="p"))
        pattern: object = CurvePattern(expected_cube=-1)
    else:
        line = CurveData(genus=0, hits={XI: 1, F: 0}, name="L")
        center = {"kind": "line", "in_boundary": center_in_boundary}
        widetilde = blow_up_curve(P, line)
        pattern = PointPattern()
    e_name = widetilde.generators[-1]
    e_unit = DivisorClass.unit(e_name)
    exc = DivisorClass.unit(F) - e_unit
    new_basis = {XI: DivisorClass.unit(XI) - e_unit, F: DivisorClass.unit(F)}

    P1 = contract(widetilde, exc, pattern, new_basis, F)

    mult = 1 if center_in_boundary else 0
    strict = boundary - mult * e_unit
    pushed, gamma = pushforward(widetilde, new_basis, exc, strict)
    new_center_mult = -gamma
    new_in_boundary = bool(new_center_mult)

    transform = {
        g: pushforward(widetilde, new_basis, exc, DivisorClass.unit(g))[0]
        for g in P.generators
    }

    twist = 1 if (n == 1 and center_in_boundary) else 0
    if twist:
        P1 = twist_p2(P1, twist)
        pushed = _twist_p2_class(pushed, twist)
        transform = {g: _twist_p2_class(cls, twist) for g, cls in transform.items()}

    new_kind = P1.kind
    checks = (
        _check("degree-drop", kind.degree - (n + 1) + 3 * twist, new_kind.degree),
        _check("boundary-shape", 1, pushed.coeff(XI)),
        _check("center-containment-flips", not center_in_boundary, new_in_boundary),
        _check("boundary-e", e_bd + (0 if center_in_boundary else 1) - twist, pushed.coeff(F)),
    )
    step = LinkStep(
        kind="pp",
        center=dict(center),
        transform=transform,
        twist=twist,
        checks=checks,
        data={
            "boundary_new": pushed,
            "new_center_in_boundary": new_in_boundary,
            "degree_new": new_kind.degree,
            "exc_name": e_name,
            "pullbacks": new_basis,
        },
    )
    if not step.all_passed:
        raise PatternMismatch("pp-link", f"failed checks: {step.check_map()}")
    return P1, step


# ---------------------------------------------------------------------------
# Quadric fibration -> P2-bundle and back
# ---------------------------------------------------------------------------


def qp_link(
    Q: ThreefoldModel,
    s: CurveData,
    boundary: DivisorClass,
    boundary_mult: int = 1,
) -> tuple[ThreefoldModel, CurveData, LinkStep]:
    """Link with center a section of the quadric fibration.  The result is
    a P2-bundle, the other contraction lands on a bisection B whose genus
    is read off the lattice; the class of the contracted divisor is pinned
    by the pullback condition."""
    _require_quadric(Q)
    if s.genus != 0:
        raise NotASection("a section of a rational base is rational")
    if s.hits.get(F) != 1:
        raise NotASection("a section meets every fiber once")
    k_bd = _boundary_coords(boundary, H)

    widetilde = blow_up_curve(Q, s)
    e_name = widetilde.generators[-1]
    e_unit = DivisorClass.unit(e_name)
    v_xi = DivisorClass.unit(H) - e_unit
    f_unit = DivisorClass.unit(F)

    # exc = H - 2E + cF; c is the unique shift making exc.v.v vanish.
    exc0 = DivisorClass.unit(H) - 2 * e_unit
    a0 = widetilde.triple(exc0, v_xi, v_xi)
    a1 = widetilde.triple(f_unit, v_xi, v_xi)
    if a1 == 0 or a0 % a1:
        raise NotASection("no integral ruling-divisor class over this center")
    c = -a0 // a1
    exc = exc0 + c * f_unit

    k_exc2 = widetilde.triple(widetilde.canonical, exc, exc)
    if (2 - k_exc2) % 2 or k_exc2 > 2:
        raise NotASection(f"K.E^2 = {k_exc2} is not 2 - 2g for a genus g >= 0")
    genus = (2 - k_exc2) // 2

    new_basis = {XI: v_xi, F: f_unit}
    P = contract(
        widetilde, exc, CurvePattern(expected_cube=None, genus=genus), new_basis, F
    )

    beta = -widetilde.triple(v_xi, exc, exc)
    bisection = CurveData(genus=genus, hits={XI: beta, F: 2}, name="B")

    strict = boundary - boundary_mult * e_unit
    pushed, gamma = pushforward(widetilde, new_basis, exc, strict)
    mult_b = -gamma
    m: Optional[int] = None
    if mult_b == 0 and pushed.coeff(XI) == 1:
        m = beta * pushed.coeff(XI) + 2 * pushed.coeff(F)

    exc_image, _ = pushforward(widetilde, new_basis, exc, e_unit)

    cube = anticanonical_cube(Q)
    checks = (
        _check("bisection-genus", (40 - cube) // 8 if (40 - cube) % 8 == 0 else None, genus),
        _check("new-degree", P.kind.degree, widetilde.triple(v_xi, v_xi, v_xi)),
        _check("exceptional-image-shape", 1, exc_image.coeff(XI)),
    )
    transform = {
        g: pushforward(widetilde, new_basis, exc, DivisorClass.unit(g))[0]
        for g in Q.generators
    }
    step = LinkStep(
        kind="qp",
        center={"kind": "section", "hits": dict(s.hits), "mult": boundary_mult},
        transform=transform,
        checks=checks,
        data={
            "boundary_new": pushed,
            "boundary_mult_along_bisection": mult_b,
            "exceptional_image": exc_image,
            "m": m,
            "genus": genus,
            "exc_name": e_name,
            "pullbacks": new_basis,
            "exc_class": exc,
        },
    )
    if not step.all_passed:
        raise PatternMismatch("qp-link", f"failed checks: {step.check_map()}")
    return P, bisection, step


def inverse_qp_link(
    P: ThreefoldModel,
    bisection: CurveData,
    tracked: Optional[Mapping[str, tuple[DivisorClass, int]]] = None,
) -> tuple[ThreefoldModel, LinkStep]:
    """Link with center a bisection of a P2-bundle; inverse of
    :func:`qp_link`.  The contracted divisor is the strict transform of the
    sub-bundle through the bisection, whose class is again pinned by the
    lattice; the result is a quadric fibration with
    ``(-K)^3 = 40 - 8 * genus(B)``."""
    kind = _require_p2(P)
    if bisection.hits.get(F) != 2:
        raise PatternMismatch("bisection", "center must meet every fiber twice")
    beta = bisection.hits.get(XI)
    if beta is None:
        raise PatternMismatch("bisection", "need the intersection with xi")
    g = bisection.genus
    sigma_s = beta - kind.degree - g - 1

    widetilde = blow_up_curve(P, bisection)
    e_name = widetilde.generators[-1]
    e_unit = DivisorClass.unit(e_name)
    f_unit = DivisorClass.unit(F)
    exc = DivisorClass.unit(XI) + sigma_s * f_unit - e_unit
    v_h = 2 * DivisorClass.unit(XI) + 2 * sigma_s * f_unit - e_unit
    new_basis = {H: v_h, F: f_unit}

    Q = contract(widetilde, exc, CurvePattern(expected_cube=None, genus=0), new_basis, F)

    cube = anticanonical_cube(Q)
    checks = (
        _check("anticanonical-cube", 40 - 8 * g, cube),
        _check("relative-hyperplane-square", 2, Q.form.value(H, H, F)),
    )
    data: dict[str, object] = {
        "exc_name": e_name,
        "pullbacks": new_basis,
        "sub_bundle_shift": sigma_s,
        "exc_class": exc,
        "tracked": {},
    }
    if tracked:
        pushed_tracked = {}
        for name, (cls, mult) in tracked.items():
            strict = cls - mult * e_unit
            pushed, gamma = pushforward(widetilde, new_basis, exc, strict)
            pushed_tracked[name] = pushed
        data["tracked"] = pushed_tracked
    transform = {
        g_: pushforward(widetilde, new_basis, exc, DivisorClass.unit(g_))[0]
        for g_ in P.generators
    }
    step = LinkStep(
        kind="inverse_qp",
        center={"kind": "bisection", "hits": dict(bisection.hits), "genus": g},
        transform=transform,
        checks=checks,
        data=data,
    )
    if not step.all_passed:
        raise PatternMismatch("inverse-qp-link", f"failed checks: {step.check_map()}")
    return Q, step


def cube_from_genera(pa_bisection: int, pa_base: int) -> int:
    """Anticanonical cube of a quadric fibration in terms of the arithmetic
    genera of the link bisection and of the base curve."""
    return 40 - (8 * pa_bisection + 32 * pa_base)


# ---------------------------------------------------------------------------
# Links between quadric fibrations
# ---------------------------------------------------------------------------


def qq_link(
    Q: ThreefoldModel,
    ruling: CurveData,
    boundary: DivisorClass,
    boundary_mult: int,
) -> tuple[ThreefoldModel, LinkStep]:
    """Link with center a ruling of a fiber.  The strict transform of the
    fiber through the ruling is contracted onto a ruling of the new model,
    and the old exceptional divisor becomes the new fiber at the same base
    point.  ``boundary_mult`` is the multiplicity of the boundary along the
    center (1 when the ruling lies in the boundary)."""
    _require_quadric(Q)
    if ruling.genus != 0:
        raise NotARuling("rulings are rational")
    if ruling.hits.get(F) != 0:
        raise NotARuling("a ruling lies in a fiber")
    if ruling.hits.get(H) != 1:
        raise NotARuling("a ruling meets the relative hyperplane class once")
    k = _boundary_coords(boundary, H)

    widetilde = blow_up_curve(Q, ruling)
    e_name = widetilde.generators[-1]
    e_unit = DivisorClass.unit(e_name)
    f_unit = DivisorClass.unit(F)
    exc = f_unit - e_unit
    base_h = DivisorClass.unit(H) - e_unit

    strict = boundary - boundary_mult * e_unit
    raw_basis = {H: base_h, F: f_unit}
    raw_pushed, gamma = pushforward(widetilde, raw_basis, exc, strict)
    shift = raw_pushed.coeff(F) - k
    v_h = base_h + shift * f_unit
    new_basis = {H: v_h, F: f_unit}

    Q1 = contract(widetilde, exc, FiberPattern(), new_basis, F)

    pushed, gamma2 = pushforward(widetilde, new_basis, exc, strict)
    fiber_image, _ = pushforward(widetilde, new_basis, exc, e_unit)
    checks = (
        _check("boundary-anchored", boundary, pushed),
        _check("exceptional-becomes-fiber", DivisorClass.unit(F), fiber_image),
        _check("relative-hyperplane-square", 2, Q1.form.value(H, H, F)),
    )
    transform = {
        g: pushforward(widetilde, new_basis, exc, DivisorClass.unit(g))[0]
        for g in Q.generators
    }
    step = LinkStep(
        kind="qq",
        center={"kind": "ruling", "hits": dict(ruling.hits), "mult": boundary_mult},
        transform=transform,
        checks=checks,
        data={
            "boundary_new": pushed,
            "fiber_new_from_exceptional": True,
            "boundary_contains_new_center": bool(-gamma2),
            "exc_name": e_name,
            "pullbacks": new_basis,
            "exc_class": exc,
        },
    )
    if not step.all_passed:
        raise PatternMismatch("qq-link", f"failed checks: {step.check_map()}")
    return Q1, step


# ---------------------------------------------------------------------------
# Fiber-type decision table
# ---------------------------------------------------------------------------


class FiberType(enum.Enum):
    SMOOTH = "smooth"
    REDUCIBLE = "reducible"
    NON_REDUCED = "non-reduced"


def fiber_type(
    t_in_sigma: bool,
    b_meets_fiber_of_h: bool,
    e_equals_h_on_fiber: Optional[bool] = None,
) -> FiberType:
    """Restriction type of the boundary to the fiber over a base point.

    Over a point with smooth fiber the restriction is smooth iff the
    bisection misses the boundary there, reducible otherwise.  Over a point
    with singular fiber the non-reduced case occurs exactly when the swept
    divisor agrees with the boundary on that fiber; this flag is only
    meaningful there, and implies the meeting flag.  ``None`` means the
    degeneracy is not asserted."""
    if e_equals_h_on_fiber:
        if not t_in_sigma:
            raise InconsistentFlags("divisor equality on the fiber needs a singular fiber")
        if not b_meets_fiber_of_h:
            raise InconsistentFlags("divisor equality on the fiber implies meeting")
    if not b_meets_fiber_of_h:
        return FiberType.SMOOTH
    if t_in_sigma and e_equals_h_on_fiber:
        return FiberType.NON_REDUCED
    return FiberType.REDUCIBLE


# ---------------------------------------------------------------------------
# Commutation of point and curve blow-ups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommuteReport:
    ok: bool
    forms_match: bool
    twist_degree: int
    normal_degree_before: int
    normal_degree_after: int
    details: tuple[str, ...] = ()


def commute_blowups_check(
    model: ThreefoldModel, curve: CurveData, point_on_curve: bool
) -> CommuteReport:
    """Blow up a point then the curve's strict transform, and the curve then
    the fiber over the point; check that the two forms agree under the
    generator dictionary, and report how the curve's normal bundle twisted.

    The twist degree is 1 exactly when the point lies on the curve (the
    normal bundle changes by a degree-1 twist, so its total degree moves by
    2, the rank)."""
    details: list[str] = []
    x1 = blow_up_point(model, PointData(name="p"))
    e_pt = x1.generators[-1]
    hits1 = dict(curve.hits)
    hits1[e_pt] = 1 if point_on_curve else 0
    strict_curve = CurveData(genus=curve.genus, hits=hits1, name=curve.name)
    xa = blow_up_curve(x1, strict_curve)
    e_c = xa.generators[-1]

    x2 = blow_up_curve(model, curve)
    e_cb = x2.generators[-1]
    if point_on_curve:
        fiber_hits = {g: 0 for g in model.generators}
        fiber_hits[e_cb] = -1
        xb = blow_up_curve(x2, CurveData(genus=0, hits=fiber_hits, name="f_p"))
        e_f = xb.generators[-1]
        dictionary = {g: DivisorClass.unit(g) for g in model.generators}
        dictionary[e_cb] = DivisorClass.unit(e_c) + DivisorClass.unit(e_pt)
        dictionary[e_f] = DivisorClass.unit(e_pt)
    else:
        xb = blow_up_point(x2, PointData(name="p"))
        e_f = xb.generators[-1]
        dictionary = {g: DivisorClass.unit(g) for g in model.generators}
        dictionary[e_cb] = DivisorClass.unit(e_c)
        dictionary[e_f] = DivisorClass.unit(e_pt)

    forms_match = True
    gens_b = xb.generators
    for i in range(len(gens_b)):
        for j in range(i, len(gens_b)):
            for k in range(j, len(gens_b)):
                lhs = xb.form.value(gens_b[i], gens_b[j], gens_b[k])
                rhs = xa.triple(
                    dictionary[gens_b[i]], dictionary[gens_b[j]], dictionary[gens_b[k]]
                )
                if lhs != rhs:
                    forms_match = False
                    details.append(
                        f"{gens_b[i]}.{gens_b[j]}.{gens_b[k]}: {lhs} != {rhs}"
                    )

    from .models import normal_degree  # local import to avoid cycle noise

    deg_before = normal_degree(model, curve)
    deg_after = normal_degree(x1, strict_curve)
    twist = 1 if point_on_curve else 0
    degree_ok = deg_after == deg_before - 2 * twist
    if not degree_ok:
        details.append(f"normal degree moved {deg_before} -> {deg_after}")
    return CommuteReport(
        ok=forms_match and degree_ok,
        forms_match=forms_match,
        twist_degree=twist,
        normal_degree_before=deg_before,
        normal_degree_after=deg_after,
        details=tuple(details),
    )
