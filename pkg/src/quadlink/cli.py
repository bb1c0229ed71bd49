"""Command-line front door.

Subcommands::

    quadlink eval      --model FILE --expr STR [--json]
    quadlink info      --model FILE [--json]
    quadlink classify  --descriptor FILE [--json]
    quadlink normalize --descriptor FILE [--out FILE] [--json]
    quadlink verify    [--filter STR] [--json]

Exit codes: 0 success, 1 corpus/engine failure, 2 expression or input
parse error, 3 degree mismatch, 4 descriptor is not an affine-3-space
compactification, 5 classification undetermined (missing flags listed).

All integers and rationals in JSON output are rendered as strings, and
certificate JSON is canonical (sorted keys, no timestamps), so repeated
runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Mapping, Optional

from .chow import DivisorClass
from .compactify import (
    Certificate,
    P2State,
    QuadricState,
    classify_quadric,
    normalize,
    normalize_p2,
    p2_state,
    quadric_state,
    type_from_label,
    _jsonable,
)
from .errors import (
    DegreeMismatch,
    ExprSyntaxError,
    LatticeError,
    NotA3,
    UndeterminedClassification,
    UnknownName,
)
from .exprs import evaluate_text
from .models import ThreefoldModel, anticanonical_cube, p2_bundle, quadric_fibration
from .models import _p2_model_from_degree
from .verify import run_corpus


class InputError(Exception):
    """Malformed model or descriptor file."""


def canonical_json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _as_int(data: Mapping, key: str, where: str) -> int:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: field {key!r} must be an integer")
    try:
        return int(value)
    except ValueError as exc:
        raise InputError(f"{where}: field {key!r} must be an integer") from exc


def load_model_file(path: str) -> tuple[ThreefoldModel, dict[str, DivisorClass]]:
    data = _load_json(path)
    kind = data.get("kind")
    if kind == "quadric":
        model = quadric_fibration(_as_int(data, "h_cube", path), _as_int(data, "a", path))
    elif kind == "p2bundle":
        if "twists" in data:
            twists = data["twists"]
            if not (isinstance(twists, list) and len(twists) == 3):
                raise InputError(f"{path}: twists must be a list of three integers")
            model = p2_bundle(*(int(t) for t in twists))
        elif "degree" in data:
            model = _p2_model_from_degree(_as_int(data, "degree", path))
        else:
            raise InputError(f"{path}: p2bundle needs twists or a degree")
    else:
        raise InputError(f"{path}: kind must be 'quadric' or 'p2bundle'")
    classes = {}
    for name, coeffs in (data.get("classes") or {}).items():
        if not isinstance(coeffs, dict):
            raise InputError(f"{path}: class {name!r} must map generators to integers")
        classes[name] = DivisorClass({g: int(v) for g, v in coeffs.items()})
    return model, classes


def load_descriptor(path: str) -> QuadricState | P2State:
    data = _load_json(path)
    kind = data.get("kind")
    if kind == "quadric":
        normal = data.get("boundary_normal")
        if not isinstance(normal, bool):
            raise InputError(f"{path}: boundary_normal must be true or false")
        type_m: Optional[int] = None
        if "type_m" in data and "singularity" in data:
            raise InputError(f"{path}: give type_m or singularity, not both")
        if "type_m" in data:
            type_m = _as_int(data, "type_m", path)
        elif "singularity" in data:
            try:
                type_m = type_from_label(str(data["singularity"]))
            except LatticeError as exc:
                raise InputError(f"{path}: {exc}") from exc
        degree = _as_int(data, "hirzebruch_degree", path) if "hirzebruch_degree" in data else None
        if normal and type_m == 0 and degree is None:
            raise InputError(f"{path}: type 0 needs hirzebruch_degree")
        if not normal and type_m is not None:
            raise InputError(f"{path}: a non-normal boundary has no type")
        try:
            return quadric_state(
                normal=normal,
                type_m=type_m,
                degree=degree,
                h12=_as_int(data, "h12", path) if "h12" in data else 0,
                a_rel=_as_int(data, "boundary_coefficient", path)
                if "boundary_coefficient" in data
                else None,
                p_side_degree=_as_int(data, "p_side_degree", path)
                if "p_side_degree" in data
                else None,
                base_p1=data.get("base_p1", True),
                boundary_prime=data.get("boundary_prime", True),
                fiber_is_cone=data.get("fiber_is_cone"),
                other_fibers_smooth=data.get("other_fibers_smooth"),
            )
        except LatticeError as exc:
            raise InputError(f"{path}: {exc}") from exc
    if kind == "p2bundle":
        twists = None
        if "twists" in data:
            raw = data["twists"]
            if not (isinstance(raw, list) and len(raw) == 3):
                raise InputError(f"{path}: twists must be a list of three integers")
            twists = tuple(int(t) for t in raw)
        degree = _as_int(data, "degree", path) if "degree" in data else None
        if twists is None and degree is None:
            raise InputError(f"{path}: p2bundle needs twists or a degree")
        try:
            return p2_state(
                degree=degree,
                twists=twists,
                e=_as_int(data, "e", path) if "e" in data else 0,
                boundary_degree=_as_int(data, "boundary_degree", path)
                if "boundary_degree" in data
                else 0,
            )
        except LatticeError as exc:
            raise InputError(f"{path}: {exc}") from exc
    raise InputError(f"{path}: kind must be 'quadric' or 'p2bundle'")


def cmd_eval(args: argparse.Namespace) -> int:
    model, classes = load_model_file(args.model)
    try:
        value = evaluate_text(args.expr, model, classes)
    except ExprSyntaxError as exc:
        print(f"parse error at offset {exc.offset}: expected {exc.expected}", file=sys.stderr)
        return 2
    except (DegreeMismatch, UnknownName) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.json:
        sys.stdout.write(canonical_json({"expr": args.expr, "value": str(value)}))
    else:
        print(value)
    return 0


def cmd_info(args: argparse.Namespace) -> int:
    model, classes = load_model_file(args.model)
    mk = model.minus_k
    if args.json:
        payload = {
            "generators": list(model.generators),
            "form": {
                ".".join(key): str(v) for key, v in model.form.entries
            },
            "minus_k": {g: str(v) for g, v in mk.items},
            "anticanonical_cube": str(anticanonical_cube(model)),
            "classes": {n: {g: str(v) for g, v in c.items} for n, c in classes.items()},
        }
        sys.stdout.write(canonical_json(payload))
        return 0
    print("generators:", ", ".join(model.generators))
    print("form entries:")
    for key, v in model.form.entries:
        print(f"  {'.'.join(key)} = {v}")
    print("-K =", mk)
    print("(-K)^3 =", anticanonical_cube(model))
    for name, cls in classes.items():
        print(f"{name} = {cls}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    state = load_descriptor(args.descriptor)
    if isinstance(state, P2State):
        # A bundle descriptor with a boundary of the sub-bundle shape is a
        # compactification of affine 3-space; nothing further to check.
        verdict_kind, detail = "is_a3", ()
    else:
        verdict = classify_quadric(state)
        verdict_kind = verdict.kind
        detail = verdict.missing if verdict.kind == "undetermined" else verdict.failed
    if args.json:
        sys.stdout.write(canonical_json({"verdict": verdict_kind, "detail": list(detail)}))
    else:
        print(verdict_kind if not detail else f"{verdict_kind}: {', '.join(detail)}")
    if verdict_kind == "not_a3":
        return 4
    if verdict_kind == "undetermined":
        return 5
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    state = load_descriptor(args.descriptor)
    try:
        certificate: Certificate
        if isinstance(state, P2State):
            certificate = normalize_p2(state)
        else:
            certificate = normalize(state)
    except NotA3 as exc:
        print(f"not an affine-3-space descriptor: {', '.join(exc.failed)}", file=sys.stderr)
        return 4
    except UndeterminedClassification as exc:
        print(f"undetermined; missing flags: {', '.join(exc.missing)}", file=sys.stderr)
        return 5
    payload = canonical_json(certificate.to_jsonable())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_corpus(args.filter)
    if args.json:
        sys.stdout.write(canonical_json(report.to_jsonable()))
    else:
        print(report.text())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadlink",
        description="Exact intersection-lattice engine and elementary-link normalizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a divisor-class expression on a model")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--expr", required=True)
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_info = sub.add_parser("info", help="print a model's generators and form")
    p_info.add_argument("--model", required=True)
    p_info.add_argument("--json", action="store_true")
    p_info.set_defaults(func=cmd_info)

    p_classify = sub.add_parser("classify", help="classify a compactification descriptor")
    p_classify.add_argument("--descriptor", required=True)
    p_classify.add_argument("--json", action="store_true")
    p_classify.set_defaults(func=cmd_classify)

    p_norm = sub.add_parser("normalize", help="emit a link-sequence certificate")
    p_norm.add_argument("--descriptor", required=True)
    p_norm.add_argument("--out")
    p_norm.add_argument("--json", action="store_true")
    p_norm.set_defaults(func=cmd_normalize)

    p_verify = sub.add_parser("verify", help="run the identity corpus")
    p_verify.add_argument("--filter")
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
