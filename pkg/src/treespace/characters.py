"""Characters of symmetric groups, indexed by cycle type."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping

from treespace.perm import (
    LabelPermutation,
    Partition,
    class_size,
    parse_partition,
    partition_key,
    partitions,
)


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Integer class function on ``Σ_m``; ``values`` keyed by decreasing partitions."""

    m: int
    values: tuple[tuple[Partition, int], ...]

    @classmethod
    def from_mapping(cls, m: int, values: Mapping[Partition, int]) -> Character:
        keys = partitions(m)
        missing = [p for p in keys if p not in values]
        if missing:
            raise CharacterError(f"missing classes {missing}")
        return cls(m, tuple((p, int(values[p])) for p in keys))

    @classmethod
    def from_function(cls, m: int, f: Callable[[Partition], int]) -> Character:
        return cls.from_mapping(m, {p: f(p) for p in partitions(m)})

    def __getitem__(self, p: Partition) -> int:
        for q, v in self.values:
            if q == p:
                return v
        raise KeyError(p)

    def as_dict(self) -> dict[Partition, int]:
        return dict(self.values)

    def table(self) -> dict[str, int]:
        return {partition_key(p): v for p, v in self.values}

    @classmethod
    def from_table(cls, m: int, table: Mapping[str, int]) -> Character:
        return cls.from_mapping(m, {parse_partition(k): v for k, v in table.items()})

    @property
    def degree(self) -> int:
        return self[(1,) * self.m] if self.m else self[()]

    def _check(self, other: Character) -> None:
        if self.m != other.m:
            raise CharacterError(f"characters of Σ_{self.m} and Σ_{other.m}")

    def __add__(self, other: Character) -> Character:
        self._check(other)
        return Character(self.m, tuple((p, v + other[p]) for p, v in self.values))

    def __sub__(self, other: Character) -> Character:
        self._check(other)
        return Character(self.m, tuple((p, v - other[p]) for p, v in self.values))

    def __mul__(self, other: Character) -> Character:
        self._check(other)
        return Character(self.m, tuple((p, v * other[p]) for p, v in self.values))

    def __neg__(self) -> Character:
        return Character(self.m, tuple((p, -v) for p, v in self.values))


def sign_of_type(p: Partition) -> int:
    return -1 if sum(x - 1 for x in p) % 2 else 1


def trivial(m: int) -> Character:
    return Character.from_function(m, lambda p: 1)


def sign_character(m: int) -> Character:
    return Character.from_function(m, sign_of_type)


def regular(m: int) -> Character:
    return Character.from_function(m, lambda p: factorial(m) if all(x == 1 for x in p) else 0)


def tensor_sign(chi: Character) -> Character:
    return chi * sign_character(chi.m)


def restrict(chi: Character) -> Character:
    """``Σ_m -> Σ_{m-1}``, the subgroup fixing one point."""
    if chi.m < 1:
        raise CharacterError("nothing to restrict")
    return Character.from_function(chi.m - 1, lambda p: chi[tuple(sorted(p + (1,), reverse=True))])


def induce(chi: Character) -> Character:
    """``Σ_m -> Σ_{m+1}`` by the fixed-point formula.

    A permutation of cycle type p contributes once per fixed point, each
    time with χ evaluated on p with that fixed point removed.
    """
    def value(p: Partition) -> int:
        fixed = p.count(1)
        if not fixed:
            return 0
        q = list(p)
        q.remove(1)
        return fixed * chi[tuple(q)]

    return Character.from_function(chi.m + 1, value)


def induce_by_cosets(chi: Character) -> Character:
    """Induction from the defining formula, summing over all of ``Σ_{m+1}``.

    Brute force; kept as an independent check of :func:`induce`.
    """
    from treespace.perm import all_permutations, representative

    m = chi.m
    size = m + 1
    group = list(all_permutations(range(size), size))

    def value(p: Partition) -> int:
        g = representative(p, list(range(size)), size)
        total = 0
        for x in group:
            h = x.compose(g).compose(x.inverse())
            if h(m) == m:
                total += chi[h.cycle_type(range(m))] if m else chi[()]
        return Fraction(total, factorial(m))

    vals = {p: value(p) for p in partitions(size)}
    if any(v.denominator != 1 for v in vals.values()):
        raise CharacterError("non-integral induced value")
    return Character.from_mapping(size, {p: int(v) for p, v in vals.items()})


def inner_product(a: Character, b: Character) -> Fraction:
    a._check(b)
    total = sum(class_size(p) * a[p] * b[p] for p in partitions(a.m))
    return Fraction(total, factorial(a.m))


def equal(a: Character, b: Character) -> bool:
    return a.m == b.m and a.values == b.values


def mismatches(a: Character, b: Character) -> list[str]:
    a._check(b)
    return [partition_key(p) for p, v in a.values if v != b[p]]


def character_of(m: int, trace: Callable[[LabelPermutation], int], points, size: int) -> Character:
    """Character of ``Σ_m`` acting through permutations of ``points``."""
    from treespace.perm import representative

    points = list(points)
    if len(points) != m:
        raise CharacterError("point count does not match the group")
    return Character.from_function(m, lambda p: trace(representative(p, points, size)))
