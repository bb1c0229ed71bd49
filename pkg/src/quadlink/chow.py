"""Exact arithmetic of divisor classes and intersection forms.

A divisor class is a finitely supported integer vector over named lattice
generators.  A :class:`TrilinearForm` stores the symmetric cubic intersection
form of a 3-fold on unordered generator triples and extends it multilinearly;
a :class:`SurfacePairing` does the same for the bilinear form of a surface,
with exact rational entries (the quadric cone's ruling class pairs with
itself to 1/2, everything Cartier pairs integrally).

Coefficients are plain Python integers, so long chains of transformations
cannot overflow, and no floating point appears anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Literal, Mapping, Union

from .errors import UnknownGenerator

Origin = Literal["basis", "exceptional", "pulled_back"]


@dataclass(frozen=True)
class GeneratorLabel:
    """A named lattice generator together with how it arose."""

    name: str
    origin: Origin = "basis"


CoeffsLike = Union[Mapping[str, int], Iterable[tuple[str, int]]]


def _normalized_items(coeffs: CoeffsLike) -> tuple[tuple[str, int], ...]:
    pairs = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    merged: dict[str, int] = {}
    for name, value in pairs:
        merged[name] = merged.get(name, 0) + int(value)
    return tuple(sorted((n, v) for n, v in merged.items() if v != 0))


@dataclass(frozen=True, init=False)
class DivisorClass:
    """Integer combination of named generators, e.g. ``H + 3*F``.

    Immutable; two classes are equal iff they agree coefficient-wise.
    """

    items: tuple[tuple[str, int], ...]

    def __init__(self, coeffs: CoeffsLike = ()):
        object.__setattr__(self, "items", _normalized_items(coeffs))

    @classmethod
    def unit(cls, name: str) -> "DivisorClass":
        return cls({name: 1})

    def coeff(self, name: str) -> int:
        for n, v in self.items:
            if n == name:
                return v
        return 0

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items

    def to_dict(self) -> dict[str, int]:
        return dict(self.items)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return DivisorClass(tuple(self.items) + tuple(other.items))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple((n, -v) for n, v in self.items))

    def __mul__(self, k: int) -> "DivisorClass":
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(tuple((n, k * v) for n, v in self.items))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.items:
            return "0"
        parts = []
        for n, v in self.items:
            if v == 1:
                term = n
            elif v == -1:
                term = f"-{n}"
            else:
                term = f"{v}*{n}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out


ZERO = DivisorClass()


def _sorted_triple(g1: str, g2: str, g3: str) -> tuple[str, str, str]:
    a, b, c = sorted((g1, g2, g3))
    return (a, b, c)


@dataclass(frozen=True, init=False)
class TrilinearForm:
    """Symmetric integer trilinear form on a finite generator set.

    Entries are stored on sorted triples only and extended by multilinearity
    at query time, so there is no symmetrization bookkeeping to get wrong.
    """

    generators: tuple[str, ...]
    entries: tuple[tuple[tuple[str, str, str], int], ...]

    def __init__(
        self,
        generators: Iterable[str],
        entries: Mapping[tuple[str, str, str], int],
    ):
        gens = tuple(generators)
        gen_set = set(gens)
        if len(gen_set) != len(gens):
            raise ValueError("generator names must be unique")
        table: dict[tuple[str, str, str], int] = {}
        for key, value in entries.items():
            k = _sorted_triple(*key)
            for g in k:
                if g not in gen_set:
                    raise UnknownGenerator(f"{g!r} is not a generator")
            v = int(value)
            if k in table and table[k] != v:
                raise ValueError(f"conflicting entries for triple {k}")
            if v != 0:
                table[k] = v
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "entries", tuple(sorted(table.items())))

    @cached_property
    def _table(self) -> dict[tuple[str, str, str], int]:
        return dict(self.entries)

    def _check_known(self, cls: DivisorClass) -> None:
        for name in cls.support:
            if name not in self._gen_set:
                raise UnknownGenerator(f"{name!r} is not a generator")

    @cached_property
    def _gen_set(self) -> frozenset[str]:
        return frozenset(self.generators)

    def value(self, g1: str, g2: str, g3: str) -> int:
        for g in (g1, g2, g3):
            if g not in self._gen_set:
                raise UnknownGenerator(f"{g!r} is not a generator")
        return self._table.get(_sorted_triple(g1, g2, g3), 0)

    def triple(self, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> int:
        """Multilinear extension of the form to three divisor classes."""
        for cls in (a, b, c):
            self._check_known(cls)
        total = 0
        for ga, xa in a.items:
            for gb, xb in b.items:
                partial = xa * xb
                for gc, xc in c.items:
                    v = self._table.get(_sorted_triple(ga, gb, gc), 0)
                    if v:
                        total += partial * xc * v
        return total


def triple(form: TrilinearForm, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> int:
    return form.triple(a, b, c)


def _sorted_pair(g1: str, g2: str) -> tuple[str, str]:
    a, b = sorted((g1, g2))
    return (a, b)


@dataclass(frozen=True, init=False)
class SurfacePairing:
    """Symmetric bilinear pairing on a surface lattice, exact rationals.

    Denominators are only ever 2, and only on the quadric cone's ruling
    class; everything Cartier pairs integrally.  ``note`` records the scale
    convention when one is needed.
    """

    generators: tuple[str, ...]
    entries: tuple[tuple[tuple[str, str], Fraction], ...]
    note: str

    def __init__(
        self,
        generators: Iterable[str],
        entries: Mapping[tuple[str, str], Fraction | int],
        note: str = "",
    ):
        gens = tuple(generators)
        gen_set = set(gens)
        table: dict[tuple[str, str], Fraction] = {}
        for key, value in entries.items():
            k = _sorted_pair(*key)
            for g in k:
                if g not in gen_set:
                    raise UnknownGenerator(f"{g!r} is not a generator")
            v = Fraction(value)
            if k in table and table[k] != v:
                raise ValueError(f"conflicting entries for pair {k}")
            if v != 0:
                table[k] = v
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "entries", tuple(sorted(table.items())))
        object.__setattr__(self, "note", note)

    @cached_property
    def _table(self) -> dict[tuple[str, str], Fraction]:
        return dict(self.entries)

    @cached_property
    def _gen_set(self) -> frozenset[str]:
        return frozenset(self.generators)

    def value(self, g1: str, g2: str) -> Fraction:
        for g in (g1, g2):
            if g not in self._gen_set:
                raise UnknownGenerator(f"{g!r} is not a generator")
        return self._table.get(_sorted_pair(g1, g2), Fraction(0))

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        """Bilinear extension of the pairing to two divisor classes."""
        for cls in (a, b):
            for name in cls.support:
                if name not in self._gen_set:
                    raise UnknownGenerator(f"{name!r} is not a generator")
        total = Fraction(0)
        for ga, xa in a.items:
            for gb, xb in b.items:
                v = self._table.get(_sorted_pair(ga, gb), None)
                if v is not None:
                    total += xa * xb * v
        return total


def pair(p: SurfacePairing, a: DivisorClass, b: DivisorClass) -> Fraction:
    return p.pair(a, b)
