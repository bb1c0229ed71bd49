"""Replay of the named identity corpus.

Every entry in ``data/corpus.json`` states a setup recipe, an expected
value and a provenance tag (``stated``: taken from the source material;
``derived``: computed by an independent route; ``trivial``: immediate).
The runner rebuilds each setup through the engine and compares.  A
manifest of anchors makes the corpus auditable: every anchor must be
covered and no entry may reference an unknown anchor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional

from .chow import DivisorClass
from .compactify import (
    euler_number,
    euler_solver,
    hodge_diamond,
    quadric_state,
    recognize_standard_quadric,
    boundary_coefficient,
)
from .errors import InconsistentFlags
from .exprs import evaluate_text
from .links import cube_from_genera, fiber_type, inverse_qp_link, pp_link
from .models import (
    F,
    XI,
    CurveData,
    ThreefoldModel,
    anticanonical_cube,
    blow_up_curve,
    hirzebruch,
    p2_bundle,
    quadric_fibration,
    strict_transform,
    _p2_model_from_degree,
)


def _build_model(spec: Mapping) -> ThreefoldModel:
    if "quadric" in spec:
        h3, a = spec["quadric"]
        return quadric_fibration(h3, a)
    if "p2" in spec:
        return p2_bundle(*spec["p2"])
    if "p2_degree" in spec:
        return _p2_model_from_degree(spec["p2_degree"])
    raise ValueError(f"unknown model spec {spec!r}")


def _classes(spec: Optional[Mapping]) -> dict[str, DivisorClass]:
    if not spec:
        return {}
    return {name: DivisorClass(coeffs) for name, coeffs in spec.items()}


def _run_check(check: Mapping) -> str:
    kind = check["kind"]
    if kind == "expr":
        model = _build_model(check["model"])
        return str(evaluate_text(check["expr"], model, _classes(check.get("classes"))))
    if kind == "surface_expr":
        surf_spec = check["surface"]
        surface = hirzebruch(surf_spec["hirzebruch"])
        return str(evaluate_text(check["expr"], surface))
    if kind == "curve_blowup_expr":
        model = _build_model(check["model"])
        curve = CurveData(genus=check["curve"]["genus"], hits=check["curve"]["hits"])
        blown = blow_up_curve(model, curve)
        exc = blown.generators[-1]
        classes = {}
        for name, coeffs in check["classes"].items():
            mult = check.get("mults", {}).get(name, 0)
            classes[name] = strict_transform(DivisorClass(coeffs), mult, exc)
        return str(evaluate_text(check["expr"], blown, classes))
    if kind == "anticanonical_cube":
        return str(anticanonical_cube(_build_model(check["model"])))
    if kind == "cube_from_genera":
        return str(cube_from_genera(check["b"], check["c"]))
    if kind == "inverse_qp_cube":
        model = p2_bundle(*check["p2"])
        bis = check["bisection"]
        curve = CurveData(genus=bis["genus"], hits={XI: bis["xi"], F: bis["f"]}, name="B")
        q, _ = inverse_qp_link(model, curve)
        return str(anticanonical_cube(q))
    if kind == "pp_case":
        model = _p2_model_from_degree(check["degree"])
        boundary = DivisorClass.unit(XI) + check["e"] * DivisorClass.unit(F)
        new_model, step = pp_link(model, check["n"], boundary, check["in_boundary"])
        b = step.data["boundary_new"]
        return (
            f"deg={new_model.kind.degree},e={b.coeff(F)},"
            f"center_in_boundary={step.data['new_center_in_boundary']}"
        )
    if kind == "fiber_type":
        try:
            result = fiber_type(check["t_in_sigma"], check["meets"], check["equals"])
        except InconsistentFlags:
            return "inconsistent"
        return result.value
    if kind == "line_link_count":
        d, e = check["degree"], check["e"]
        if (d + 3 * e) % 2:
            return "non-integral"
        return str((d + 3 * e) // 2 + 1)
    if kind == "line_link_parity":
        model = _p2_model_from_degree(check["degree"])
        boundary = DivisorClass.unit(XI) + check["e"] * DivisorClass.unit(F)
        parity = (check["degree"] + check["e"]) % 2
        for n, in_b in ((1, True), (0, False)):
            new_model, step = pp_link(model, n, boundary, in_b)
            b = step.data["boundary_new"]
            if (new_model.kind.degree + b.coeff(F)) % 2 != parity:
                return f"changed by n={n}"
        return "preserved"
    if kind == "hodge_euler":
        return str(euler_number(hodge_diamond(check["h12"])))
    if kind == "euler_consistency":
        # With vanishing middle cohomology forced, the bisection genus and
        # the diamond give the same Euler number.
        return str(euler_number(hodge_diamond(check["pa_b"])))
    if kind == "euler_solver":
        solutions = euler_solver(euler_budget=check.get("budget", 6))
        return ";".join(",".join(map(str, s)) for s in sorted(solutions))
    if kind == "standard_recognizer":
        state = quadric_state(
            normal=True, type_m=0, degree=0,
            fiber_is_cone=True, other_fibers_smooth=True,
        )
        recognize_standard_quadric(state)
        a = boundary_coefficient(state.model, state.boundary)
        cube = anticanonical_cube(state.model)
        dh3 = state.model.triple(state.boundary, state.boundary, state.boundary)
        return f"a={a},cube={cube},dh3={dh3}"
    raise ValueError(f"unknown check kind {kind!r}")


@dataclass(frozen=True)
class EntryResult:
    name: str
    anchor: str
    provenance: str
    expected: str
    computed: str
    passed: bool
    error: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" [{self.error}]" if self.error else ""
        return (
            f"{status} {self.name} ({self.anchor}): "
            f"expected {self.expected}, computed {self.computed}{tail}"
        )

    def to_jsonable(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "provenance": self.provenance,
            "expected": self.expected,
            "computed": self.computed,
            "status": "pass" if self.passed else "fail",
            "error": self.error,
        }


@dataclass(frozen=True)
class CorpusReport:
    results: tuple[EntryResult, ...]
    manifest_checked: bool
    missing_anchors: tuple[str, ...] = ()
    unknown_anchors: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            all(r.passed for r in self.results)
            and not self.missing_anchors
            and not self.unknown_anchors
        )

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        passed = sum(r.passed for r in self.results)
        lines.append(f"{passed}/{len(self.results)} entries passed")
        if self.manifest_checked:
            if self.missing_anchors:
                lines.append("uncovered anchors: " + ", ".join(self.missing_anchors))
            if self.unknown_anchors:
                lines.append("unknown anchors: " + ", ".join(self.unknown_anchors))
            if not self.missing_anchors and not self.unknown_anchors:
                lines.append("anchor manifest fully covered")
        return "\n".join(lines)

    def to_jsonable(self) -> dict:
        return {
            "format": 1,
            "entries": [r.to_jsonable() for r in self.results],
            "ok": self.ok,
            "manifest_checked": self.manifest_checked,
            "missing_anchors": list(self.missing_anchors),
            "unknown_anchors": list(self.unknown_anchors),
        }


def load_corpus() -> dict:
    data = resources.files(__package__).joinpath("data/corpus.json").read_text()
    return json.loads(data)


def run_corpus(name_filter: Optional[str] = None) -> CorpusReport:
    """Run every corpus entry (or those whose name contains the filter) and
    report expected versus computed values.  The anchor manifest is checked
    on unfiltered runs."""
    corpus = load_corpus()
    results = []
    seen_anchors = set()
    for entry in corpus["entries"]:
        if name_filter and name_filter not in entry["name"]:
            continue
        seen_anchors.add(entry["anchor"])
        try:
            computed = _run_check(entry["check"])
            error = None
        except Exception as exc:  # noqa: BLE001 - failures are data here
            computed = "<error>"
            error = f"{type(exc).__name__}: {exc}"
        results.append(
            EntryResult(
                name=entry["name"],
                anchor=entry["anchor"],
                provenance=entry["provenance"],
                expected=entry["expected"],
                computed=computed,
                passed=(computed == entry["expected"]),
                error=error,
            )
        )
    manifest_checked = name_filter is None
    missing: tuple[str, ...] = ()
    unknown: tuple[str, ...] = ()
    if manifest_checked:
        manifest = set(corpus["anchors"])
        missing = tuple(sorted(manifest - seen_anchors))
        unknown = tuple(sorted(seen_anchors - manifest))
    return CorpusReport(
        results=tuple(results),
        manifest_checked=manifest_checked,
        missing_anchors=missing,
        unknown_anchors=unknown,
    )
