"""Models of 3-folds fibered over the projective line, boundary surfaces,
and the blow-up/contraction engine that transports intersection forms.

Conventions
-----------
* A ``P^2``-bundle model has generators ``("xi", "F")`` with
  ``xi^2.F = 1``, ``xi^3 = deg`` (the degree of an associated rank-3
  bundle) and ``-K = 3 xi - (deg - 2) F``.  Its anticanonical cube is 54
  for every degree.
* A quadric-fibration model has generators ``("H", "F")`` with
  ``H^2.F = 2`` and ``-K = 2 H + a F``, so ``(-K)^3 = 8 H^3 + 24 a``.
* Blowing up a smooth curve ``C`` of genus ``g`` appends a generator ``E``
  with ``E^3 = (2 - 2g) - (-K.C)`` (minus the degree of the normal
  bundle), ``(pullback D).E^2 = -(D.C)`` and
  ``(pullback D1).(pullback D2).E = 0``; the canonical class gains ``+E``.
* Blowing up a point appends ``E`` with ``E^3 = 1``, all mixed products
  zero, and canonical ``+2E``.
* Contractions are certified by pattern tags, never by cone computations:
  the candidate exceptional class must have the numerical shape of a
  point/curve blow-down and the complementary basis must pair to zero
  against it, which pins the pullback sublattice exactly.

All models are immutable; operations return new values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .chow import DivisorClass, GeneratorLabel, SurfacePairing, TrilinearForm
from .errors import (
    DegreeUnderflow,
    IncompleteCurveData,
    LatticeError,
    PatternMismatch,
    UnknownGenerator,
)

XI = "xi"
H = "H"
F = "F"


# ---------------------------------------------------------------------------
# 3-fold models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class P2Bundle:
    """Projectivization of a rank-3 bundle over the line; ``twists`` is the
    splitting type when known (links only determine the degree)."""

    degree: int
    twists: Optional[tuple[int, int, int]] = None


@dataclass(frozen=True)
class QuadricFibration:
    h_cube: int
    a: int


@dataclass(frozen=True)
class BlowUp:
    parent: "ThreefoldModel"
    center: str


ModelKind = Union[P2Bundle, QuadricFibration, BlowUp]


@dataclass(frozen=True)
class ThreefoldModel:
    """A 3-fold fibered over the line: generators, cubic form, canonical
    class, fiber class and construction history."""

    kind: ModelKind
    form: TrilinearForm
    canonical: DivisorClass
    fiber: DivisorClass
    labels: tuple[GeneratorLabel, ...] = ()
    history: tuple[str, ...] = ()

    @property
    def generators(self) -> tuple[str, ...]:
        return self.form.generators

    @property
    def minus_k(self) -> DivisorClass:
        return -self.canonical

    def triple(self, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> int:
        return self.form.triple(a, b, c)

    @property
    def is_p2_bundle(self) -> bool:
        return isinstance(self.kind, P2Bundle)

    @property
    def is_quadric(self) -> bool:
        return isinstance(self.kind, QuadricFibration)

    def unit(self, name: str) -> DivisorClass:
        if name not in self.generators:
            raise UnknownGenerator(f"{name!r} is not a generator")
        return DivisorClass.unit(name)


def anticanonical_cube(model: ThreefoldModel) -> int:
    """Cube of the anticanonical class."""
    mk = model.minus_k
    return model.triple(mk, mk, mk)


def _base_labels(names: Sequence[str]) -> tuple[GeneratorLabel, ...]:
    return tuple(GeneratorLabel(n, "basis") for n in names)


def p2_bundle(a: int, b: int, c: int) -> ThreefoldModel:
    """Bundle model for the projectivization of O(a)+O(b)+O(c).

    Twisting by a line bundle does not change the variety, so twists are
    normalized: sorted ascending with minimum 0.  This makes model equality
    decidable.
    """
    raw = tuple(sorted((a, b, c)))
    twists = tuple(t - raw[0] for t in raw)
    model = _p2_model_from_degree(sum(twists), twists=twists)  # type: ignore[arg-type]
    return model


def _p2_model_from_degree(
    degree: int,
    twists: Optional[tuple[int, int, int]] = None,
    history: tuple[str, ...] = (),
) -> ThreefoldModel:
    form = TrilinearForm((XI, F), {(XI, XI, XI): degree, (XI, XI, F): 1})
    canonical = DivisorClass({XI: -3, F: degree - 2})
    model = ThreefoldModel(
        kind=P2Bundle(degree=degree, twists=twists),
        form=form,
        canonical=canonical,
        fiber=DivisorClass.unit(F),
        labels=_base_labels((XI, F)),
        history=history or (f"p2_bundle(degree={degree}, twists={twists})",),
    )
    _validate_p2(model)
    return model


def _validate_p2(model: ThreefoldModel) -> None:
    xi = DivisorClass.unit(XI)
    f = DivisorClass.unit(F)
    if model.triple(xi, xi, f) != 1:
        raise LatticeError("P2 bundle needs xi^2.F = 1")
    if model.triple(f, f, xi) != 0 or model.triple(f, f, f) != 0:
        raise LatticeError("fiber class must be triple-degenerate")
    if anticanonical_cube(model) != 54:
        raise LatticeError("P2 bundle over the line must have (-K)^3 = 54")


def quadric_fibration(h3: int, a: int) -> ThreefoldModel:
    """Quadric-fibration model with ``H^3 = h3`` and ``-K = 2H + aF``."""
    form = TrilinearForm((H, F), {(H, H, H): h3, (H, H, F): 2})
    canonical = DivisorClass({H: -2, F: -a})
    model = ThreefoldModel(
        kind=QuadricFibration(h_cube=h3, a=a),
        form=form,
        canonical=canonical,
        fiber=DivisorClass.unit(F),
        labels=_base_labels((H, F)),
        history=(f"quadric_fibration(h3={h3}, a={a})",),
    )
    _validate_quadric(model)
    return model


def _validate_quadric(model: ThreefoldModel) -> None:
    h = DivisorClass.unit(H)
    f = DivisorClass.unit(F)
    if model.triple(h, h, f) != 2:
        raise LatticeError("quadric fibration needs H^2.F = 2")
    if model.triple(f, f, h) != 0 or model.triple(f, f, f) != 0:
        raise LatticeError("fiber class must be triple-degenerate")


# ---------------------------------------------------------------------------
# Centers of blow-ups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveData:
    """A smooth curve presented by lattice data: its genus, its intersection
    number with every generator (``hits``), and the multiplicities of any
    tracked divisors along it (``mults``, used for strict transforms)."""

    genus: int
    hits: Mapping[str, int]
    mults: Mapping[str, int] = field(default_factory=dict)
    name: str = "C"

    def __post_init__(self):
        object.__setattr__(self, "hits", dict(self.hits))
        object.__setattr__(self, "mults", dict(self.mults))
        if self.genus < 0:
            raise LatticeError("genus must be non-negative")
        for m in self.mults.values():
            if m < 0:
                raise LatticeError("multiplicities must be non-negative")


@dataclass(frozen=True)
class PointData:
    """A point center; only the multiplicities of tracked divisors matter."""

    mults: Mapping[str, int] = field(default_factory=dict)
    name: str = "p"

    def __post_init__(self):
        object.__setattr__(self, "mults", dict(self.mults))
        for m in self.mults.values():
            if m < 0:
                raise LatticeError("multiplicities must be non-negative")


def curve_degree(model: ThreefoldModel, cls: DivisorClass, curve: CurveData) -> int:
    """Intersection number of a divisor class with the curve."""
    total = 0
    for g, x in cls.items:
        if g not in curve.hits:
            raise IncompleteCurveData(f"no intersection number with {g!r}")
        total += x * curve.hits[g]
    return total


def normal_degree(model: ThreefoldModel, curve: CurveData) -> int:
    """Degree of the curve's normal bundle: (-K.C) - 2 + 2g."""
    return curve_degree(model, model.minus_k, curve) - 2 + 2 * curve.genus


def _next_exceptional_name(gens: Sequence[str]) -> str:
    i = 1
    existing = set(gens)
    while f"E{i}" in existing:
        i += 1
    return f"E{i}"


def blow_up_curve(model: ThreefoldModel, curve: CurveData) -> ThreefoldModel:
    """Blow up along a smooth curve; extends the form by the rules above."""
    gens = model.generators
    for g in curve.hits:
        if g not in gens:
            raise UnknownGenerator(f"hit on unknown generator {g!r}")
    missing = [g for g in gens if g not in curve.hits]
    if missing:
        raise IncompleteCurveData(f"missing hits for {missing}")
    e = _next_exceptional_name(gens)
    entries = dict(model.form._table)
    for g in gens:
        if curve.hits[g]:
            entries[(g, e, e)] = -curve.hits[g]
    deg_n = normal_degree(model, curve)
    if deg_n:
        entries[(e, e, e)] = -deg_n
    form = TrilinearForm(gens + (e,), entries)
    return ThreefoldModel(
        kind=BlowUp(parent=model, center=f"curve:{curve.name}"),
        form=form,
        canonical=model.canonical + DivisorClass.unit(e),
        fiber=model.fiber,
        labels=model.labels + (GeneratorLabel(e, "exceptional"),),
        history=model.history + (f"blow_up_curve({curve.name}, g={curve.genus})",),
    )


def blow_up_point(model: ThreefoldModel, point: PointData) -> ThreefoldModel:
    """Blow up at a point: E^3 = 1, canonical gains 2E."""
    gens = model.generators
    e = _next_exceptional_name(gens)
    entries = dict(model.form._table)
    entries[(e, e, e)] = 1
    form = TrilinearForm(gens + (e,), entries)
    return ThreefoldModel(
        kind=BlowUp(parent=model, center=f"point:{point.name}"),
        form=form,
        canonical=model.canonical + 2 * DivisorClass.unit(e),
        fiber=model.fiber,
        labels=model.labels + (GeneratorLabel(e, "exceptional"),),
        history=model.history + (f"blow_up_point({point.name})",),
    )


def strict_transform(pullback: DivisorClass, mult: int, exc_name: str) -> DivisorClass:
    """Class of a strict transform: pullback minus multiplicity times E."""
    return pullback - mult * DivisorClass.unit(exc_name)


# ---------------------------------------------------------------------------
# Contractions, certified by pattern tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointPattern:
    """Blow-down of a plane to a smooth point: E^3 = 1, K.E^2 = 2 and all
    products with the complementary sublattice vanish."""


@dataclass(frozen=True)
class CurvePattern:
    """Blow-down onto a smooth curve of the given genus; ``expected_cube``
    pins E^3 (minus the normal degree of the target curve) when known."""

    expected_cube: Optional[int] = None
    genus: int = 0


@dataclass(frozen=True)
class FiberPattern:
    """Blow-down of a fiber component onto a ruling: a rational
    CurvePattern with E^3 = 0, and the center must lie in a fiber."""


LinkPatternTag = Union[PointPattern, CurvePattern, FiberPattern]


def _solve_exact(
    columns: Sequence[DivisorClass], target: DivisorClass, gens: Sequence[str]
) -> Optional[list[Fraction]]:
    """Solve sum x_i * columns[i] = target exactly; None if inconsistent.

    Requires the columns to be linearly independent (which the unimodularity
    check guarantees where it matters)."""
    rows = list(gens)
    n = len(columns)
    a = [[Fraction(col.coeff(g)) for col in columns] + [Fraction(target.coeff(g))] for g in rows]
    pivot_row = 0
    pivot_cols: list[int] = []
    for col in range(n):
        pr = None
        for r in range(pivot_row, len(rows)):
            if a[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        a[pivot_row], a[pr] = a[pr], a[pivot_row]
        pv = a[pivot_row][col]
        a[pivot_row] = [x / pv for x in a[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[pivot_row])]
        pivot_cols.append(col)
        pivot_row += 1
    if len(pivot_cols) != n:
        return None
    for r in range(pivot_row, len(rows)):
        if a[r][n] != 0:
            return None
    solution = [Fraction(0)] * n
    for i, col in enumerate(pivot_cols):
        solution[col] = a[i][n]
    return solution


def _det_exact(columns: Sequence[DivisorClass], gens: Sequence[str]) -> Fraction:
    n = len(columns)
    if n != len(gens):
        raise ValueError("determinant needs a square system")
    a = [[Fraction(col.coeff(g)) for col in columns] for g in gens]
    det = Fraction(1)
    for col in range(n):
        pr = None
        for r in range(col, n):
            if a[r][col] != 0:
                pr = r
                break
        if pr is None:
            return Fraction(0)
        if pr != col:
            a[col], a[pr] = a[pr], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        a[col] = [x / pv for x in a[col]]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def pushforward(
    model: ThreefoldModel,
    new_basis: Mapping[str, DivisorClass],
    exc: DivisorClass,
    cls: DivisorClass,
) -> tuple[DivisorClass, int]:
    """Decompose ``cls = sum x_i (pullback of b_i) + gamma * exc`` and return
    the pushed-forward class ``sum x_i b_i`` together with ``gamma``.

    The decomposition must be integral, otherwise the claimed basis does not
    span the lattice."""
    names = list(new_basis)
    cols = [new_basis[n] for n in names] + [exc]
    sol = _solve_exact(cols, cls, model.generators)
    if sol is None:
        raise PatternMismatch("decomposition", f"cannot decompose {cls}")
    for x in sol:
        if x.denominator != 1:
            raise PatternMismatch("integrality", f"non-integral decomposition of {cls}")
    pushed = DivisorClass()
    for name, x in zip(names, sol[:-1]):
        pushed = pushed + int(x) * DivisorClass.unit(name)
    return pushed, int(sol[-1])


def contract(
    model: ThreefoldModel,
    exc: DivisorClass,
    pattern: LinkPatternTag,
    new_basis: Optional[Mapping[str, DivisorClass]] = None,
    fiber_name: str = F,
) -> ThreefoldModel:
    """Contract the divisor class ``exc``.

    With ``new_basis=None`` this undoes the model's own last blow-up (the
    round trip is the identity on forms).  Otherwise ``new_basis`` names the
    pullback sublattice; legality is checked purely on the lattice:

    * ``exc . v . w = 0`` for all v, w in the new basis (pullback property);
    * the new basis together with ``exc`` spans the lattice unimodularly;
    * ``exc`` has the numerical shape demanded by ``pattern``;
    * the canonical class descends integrally with the right discrepancy.
    """
    if new_basis is None:
        return _contract_roundtrip(model, exc, pattern)

    gens = model.generators
    names = list(new_basis)
    cols = [new_basis[n] for n in names] + [exc]
    if len(cols) != len(gens):
        raise PatternMismatch("rank", "basis plus exceptional must span the lattice")
    det = _det_exact(cols, gens)
    if det not in (1, -1):
        raise PatternMismatch("unimodular", f"basis change has determinant {det}")

    for i in range(len(names)):
        for j in range(i, len(names)):
            if model.triple(exc, cols[i], cols[j]) != 0:
                raise PatternMismatch(
                    "pullback", f"exc.{names[i]}.{names[j]} != 0: not a pullback sublattice"
                )

    exc3 = model.triple(exc, exc, exc)
    k_exc2 = model.triple(model.canonical, exc, exc)
    if isinstance(pattern, PointPattern):
        discrepancy = 2
        if exc3 != 1:
            raise PatternMismatch("exc-cube", f"point blow-down needs E^3 = 1, got {exc3}")
        if k_exc2 != 2:
            raise PatternMismatch("k-exc", f"point blow-down needs K.E^2 = 2, got {k_exc2}")
        for i, name in enumerate(names):
            if model.triple(cols[i], exc, exc) != 0:
                raise PatternMismatch("exc-square", f"{name}.E^2 != 0 for point blow-down")
    elif isinstance(pattern, (CurvePattern, FiberPattern)):
        discrepancy = 1
        genus = pattern.genus if isinstance(pattern, CurvePattern) else 0
        expected_cube = (
            pattern.expected_cube if isinstance(pattern, CurvePattern) else 0
        )
        if k_exc2 != 2 - 2 * genus:
            raise PatternMismatch(
                "k-exc", f"curve blow-down of genus {genus} needs K.E^2 = {2 - 2 * genus}, got {k_exc2}"
            )
        if expected_cube is not None and exc3 != expected_cube:
            raise PatternMismatch("exc-cube", f"expected E^3 = {expected_cube}, got {exc3}")
        if isinstance(pattern, FiberPattern):
            if fiber_name not in new_basis:
                raise PatternMismatch("fiber", "fiber pattern needs the fiber in the new basis")
            if model.triple(exc, exc, new_basis[fiber_name]) != 0:
                raise PatternMismatch("fiber", "center of a fiber blow-down must lie in a fiber")
    else:  # pragma: no cover - exhaustive by type
        raise PatternMismatch("pattern", f"unknown pattern {pattern!r}")

    k_new, gamma = pushforward(model, new_basis, exc, model.canonical - discrepancy * exc)
    if gamma != 0:
        raise PatternMismatch("canonical", "canonical class does not descend")

    entries: dict[tuple[str, str, str], int] = {}
    for i in range(len(names)):
        for j in range(i, len(names)):
            for k in range(j, len(names)):
                v = model.triple(cols[i], cols[j], cols[k])
                if v:
                    entries[(names[i], names[j], names[k])] = v
    form = TrilinearForm(tuple(names), entries)

    if new_basis.get(fiber_name, None) != model.fiber:
        raise PatternMismatch("fiber", "contraction must preserve the fiber class")

    return _typed_model(form, k_new, fiber_name, model.history)


def _typed_model(
    form: TrilinearForm,
    canonical: DivisorClass,
    fiber_name: str,
    history: tuple[str, ...],
) -> ThreefoldModel:
    names = form.generators
    fiber = DivisorClass.unit(fiber_name)
    if XI in names:
        degree = form.value(XI, XI, XI)
        model = ThreefoldModel(
            kind=P2Bundle(degree=degree, twists=None),
            form=form,
            canonical=canonical,
            fiber=fiber,
            labels=_base_labels(names),
            history=history + (f"contract -> p2_bundle(degree={degree})",),
        )
        if canonical != DivisorClass({XI: -3, F: degree - 2}):
            raise PatternMismatch("canonical", "canonical class is not of P2-bundle shape")
        _validate_p2(model)
        return model
    if H in names:
        h3 = form.value(H, H, H)
        if canonical.coeff(H) != -2:
            raise PatternMismatch("canonical", "canonical class is not of quadric shape")
        a = -canonical.coeff(F)
        if canonical != DivisorClass({H: -2, F: -a}):
            raise PatternMismatch("canonical", "canonical class is not of quadric shape")
        model = ThreefoldModel(
            kind=QuadricFibration(h_cube=h3, a=a),
            form=form,
            canonical=canonical,
            fiber=fiber,
            labels=_base_labels(names),
            history=history + (f"contract -> quadric_fibration(h3={h3}, a={a})",),
        )
        _validate_quadric(model)
        return model
    raise PatternMismatch("basis", f"cannot type a model on basis {names}")


def _contract_roundtrip(
    model: ThreefoldModel, exc: DivisorClass, pattern: LinkPatternTag
) -> ThreefoldModel:
    if not isinstance(model.kind, BlowUp):
        raise PatternMismatch("roundtrip", "model is not a blow-up")
    e = model.generators[-1]
    if exc != DivisorClass.unit(e):
        raise PatternMismatch("roundtrip", "can only peel off the last exceptional divisor")
    exc3 = model.triple(exc, exc, exc)
    if isinstance(pattern, PointPattern) and exc3 != 1:
        raise PatternMismatch("exc-cube", f"point blow-down needs E^3 = 1, got {exc3}")
    if isinstance(pattern, CurvePattern) and pattern.expected_cube is not None:
        if exc3 != pattern.expected_cube:
            raise PatternMismatch("exc-cube", f"expected E^3 = {pattern.expected_cube}, got {exc3}")
    if isinstance(pattern, FiberPattern) and exc3 != 0:
        raise PatternMismatch("exc-cube", f"fiber blow-down needs E^3 = 0, got {exc3}")
    return model.kind.parent


# ---------------------------------------------------------------------------
# Surfaces
# ---------------------------------------------------------------------------

SIGMA = "Sigma"
SF = "f"
SE = "e"
RULING = "r"


@dataclass(frozen=True)
class SurfaceModel:
    """A boundary surface with its exact pairing.

    Kinds: ``hirzebruch`` (ruled surface of the given degree),
    ``blown_hirzebruch`` (its blow-up at a point off the minimal section),
    ``quadric_smooth`` (degree-0 ruled surface appearing as a smooth fiber),
    ``quadric_cone`` (pairing has the half-integral ruling class), and
    ``duval`` (singular boundary; carries only its label and the ruled
    degree parameter of the underlying chain)."""

    kind: str
    degree: Optional[int]
    pairing: Optional[SurfacePairing]
    canonical: Optional[DivisorClass]
    label: Optional[str] = None

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        if self.pairing is None:
            raise LatticeError(f"surface of kind {self.kind!r} has no pairing")
        return self.pairing.pair(a, b)


def hirzebruch(d: int) -> SurfaceModel:
    """Ruled surface of degree d: Sigma^2 = -d, Sigma.f = 1, f^2 = 0."""
    if d < 0:
        raise DegreeUnderflow("no ruled surface of negative degree")
    pairing = SurfacePairing(
        (SIGMA, SF), {(SIGMA, SIGMA): -d, (SIGMA, SF): 1}
    )
    canonical = DivisorClass({SIGMA: -2, SF: -(d + 2)})
    return SurfaceModel("hirzebruch", d, pairing, canonical)


def smooth_quadric_fiber() -> SurfaceModel:
    """The degree-0 ruled surface in its role as a smooth quadric fiber."""
    base = hirzebruch(0)
    return SurfaceModel("quadric_smooth", 0, base.pairing, base.canonical)


def blown_hirzebruch(d: int) -> SurfaceModel:
    """Blow-up of the degree-d ruled surface at a point off the minimal
    section; generators Sigma, f, e with e^2 = -1.  K^2 = 7."""
    if d < 1:
        raise DegreeUnderflow("blown ruled surface needs degree >= 1")
    pairing = SurfacePairing(
        (SIGMA, SF, SE),
        {(SIGMA, SIGMA): -d, (SIGMA, SF): 1, (SE, SE): -1},
    )
    canonical = DivisorClass({SIGMA: -2, SF: -(d + 2), SE: 1})
    return SurfaceModel("blown_hirzebruch", d, pairing, canonical)


def quadric_cone() -> SurfaceModel:
    """The quadric cone; its ruling class r has r.r = 1/2 and the hyperplane
    class is 2r."""
    pairing = SurfacePairing(
        (RULING,), {(RULING, RULING): Fraction(1, 2)}, note="hyperplane = 2*r"
    )
    canonical = DivisorClass({RULING: -4})
    return SurfaceModel("quadric_cone", None, pairing, canonical)


def duval_boundary(label: str, degree: int) -> SurfaceModel:
    """Boundary surface with a rational-double-point label; no pairing is
    tracked, only the label and the ruled degree parameter carried through
    the pipeline."""
    return SurfaceModel("duval", degree, None, None, label=label)


def elementary_transform(surface: SurfaceModel, on_minimal_section: bool) -> SurfaceModel:
    """Elementary transform of a ruled surface: blow up a point, contract
    the old fiber through it.  Off the minimal section the degree drops by
    one, on it the degree rises by one.  K^2 = 8 is preserved.

    On the degree-0 surface the two rulings are symmetric, so transforming
    off the section is rejected; the caller must say which ruling class
    plays the fiber."""
    if surface.kind not in ("hirzebruch", "quadric_smooth"):
        raise LatticeError("elementary transform needs a ruled surface")
    d = surface.degree or 0
    if on_minimal_section:
        return hirzebruch(d + 1)
    if d == 0:
        raise DegreeUnderflow("transform off the section at degree 0 is a basis swap")
    return hirzebruch(d - 1)


@dataclass(frozen=True)
class SurfaceEmbedding:
    """A boundary surface together with the classes of the boundary's and
    the fiber's restriction to it; ``None`` classes on singular surfaces."""

    surface: SurfaceModel
    self_class: Optional[DivisorClass]
    fiber_class: Optional[DivisorClass]

    def closure_errors(
        self,
        boundary_cube: int,
        boundary_sq_fiber: int,
        boundary_fiber_sq: int,
    ) -> list[str]:
        """Adjunction-closure: restriction pairings must reproduce the
        ambient triple products of the boundary with itself and the fiber."""
        if self.self_class is None or self.fiber_class is None:
            return []
        errors = []
        if self.surface.pair(self.self_class, self.self_class) != boundary_cube:
            errors.append("selfclass-squared")
        if self.surface.pair(self.self_class, self.fiber_class) != boundary_sq_fiber:
            errors.append("selfclass-fiber")
        if self.surface.pair(self.fiber_class, self.fiber_class) != boundary_fiber_sq:
            errors.append("fiber-squared")
        return errors
