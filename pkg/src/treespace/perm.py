"""Permutations of small label sets and integer partitions (cycle types)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence


Partition = tuple[int, ...]


@dataclass(frozen=True)
class LabelPermutation:
    """A bijection of ``{0, 1, ..., len(images) - 1}``.

    ``images[i]`` is the image of ``i``.  Permutations of ``{1..n}`` are
    represented as permutations of ``{0..n}`` fixing 0.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection of 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, size: int) -> LabelPermutation:
        return cls(tuple(range(size)))

    @classmethod
    def from_mapping(cls, size: int, mapping: Mapping[int, int]) -> LabelPermutation:
        """Permutation of ``0..size-1`` moving only the keys of ``mapping``."""
        imgs = list(range(size))
        for k, v in mapping.items():
            imgs[k] = v
        return cls(tuple(imgs))

    @classmethod
    def from_cycles(cls, size: int, cycles: Iterable[Sequence[int]]) -> LabelPermutation:
        imgs = list(range(size))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a] = b
        return cls(tuple(imgs))

    @classmethod
    def transposition(cls, size: int, i: int, j: int) -> LabelPermutation:
        return cls.from_mapping(size, {i: j, j: i})

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: LabelPermutation) -> LabelPermutation:
        """``self ∘ other``: apply ``other`` first."""
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return LabelPermutation(tuple(self.images[other.images[i]] for i in range(len(self))))

    def inverse(self) -> LabelPermutation:
        inv = [0] * len(self)
        for i, v in enumerate(self.images):
            inv[v] = i
        return LabelPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self, support: Iterable[int] | None = None) -> Partition:
        """Cycle type restricted to ``support`` (default: all points).

        ``support`` must be a union of cycles.
        """
        if support is None:
            cyc = self.cycles()
        else:
            sup = set(support)
            cyc = [c for c in self.cycles() if c[0] in sup]
            if sum(len(c) for c in cyc) != len(sup):
                raise ValueError("support is not invariant")
        return tuple(sorted((len(c) for c in cyc), reverse=True))

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    # Count inversions via cycle decomposition of the sorting permutation.
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    seen = [False] * len(seq)
    parity = 0
    for i in range(len(seq)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        parity += length - 1
    return -1 if parity % 2 else 1


@lru_cache(maxsize=None)
def partitions(m: int) -> tuple[Partition, ...]:
    """All integer partitions of ``m`` in decreasing form, reverse-lexicographic."""
    if m == 0:
        return ((),)

    def gen(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(m, m))


def partition_key(p: Partition) -> str:
    """``(3, 1)`` -> ``"3+1"``."""
    return "+".join(str(x) for x in p)


def parse_partition(key: str) -> Partition:
    return tuple(sorted((int(x) for x in key.split("+")), reverse=True))


def class_size(p: Partition) -> int:
    """Number of permutations of cycle type ``p``."""
    from math import factorial
    m = sum(p)
    denom = 1
    for length in set(p):
        k = p.count(length)
        denom *= length ** k * factorial(k)
    return factorial(m) // denom


def representative(p: Partition, points: Sequence[int], size: int) -> LabelPermutation:
    """Canonical permutation of cycle type ``p`` on ``points``.

    Cycles are laid out consecutively on ``points`` in the given order; every
    point of ``0..size-1`` outside ``points`` is fixed.
    """
    if sum(p) != len(points):
        raise ValueError("partition does not match the number of points")
    cycles = []
    pos = 0
    for length in p:
        cycles.append(tuple(points[pos:pos + length]))
        pos += length
    return LabelPermutation.from_cycles(size, [c for c in cycles if len(c) > 1])


def all_permutations(points: Sequence[int], size: int) -> Iterator[LabelPermutation]:
    """Every permutation of ``points``, as permutations of ``0..size-1``."""
    for perm in itertools.permutations(points):
        yield LabelPermutation.from_mapping(size, dict(zip(points, perm)))
