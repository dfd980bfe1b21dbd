"""Integral (co)homology of chain complexes and traces of group actions on it."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from treespace.characters import Character, character_of
from treespace.complexes import OrientedComplex, SimplicialMap, induced_simplicial_map
from treespace.intmat import IntMatrix, integer_kernel_basis, kernel_basis, rref, smith_normal_form
from treespace.perm import LabelPermutation


class HomologyError(ValueError):
    pass


@dataclass
class ChainComplex:
    """Free chain complex: ``sizes[k]`` = rank of C_k, ``boundary[k]``: C_k -> C_{k-1}.

    In a reduced complex ``boundary[0]`` is the augmentation ``C_0 -> Z``.
    """

    sizes: list[int]
    boundary: list[IntMatrix]
    reduced: bool = False
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return len(self.sizes) - 1

    def d(self, k: int) -> IntMatrix:
        if 0 <= k <= self.top:
            return self.boundary[k]
        rows = self.sizes[k - 1] if 0 <= k - 1 <= self.top else 0
        cols = self.sizes[k] if 0 <= k <= self.top else 0
        return IntMatrix(rows, cols, {})

    def smith(self, k: int):
        if k not in self._ranks:
            self._ranks[k] = smith_normal_form(self.d(k))
        return self._ranks[k]

    def check(self) -> list[int]:
        return [k for k in range(1, self.top + 1) if not (self.d(k - 1) @ self.d(k)).is_zero()]


def chain_complex(c: OrientedComplex, reduced: bool = True) -> ChainComplex:
    key = ("chain", reduced)
    cache = _cache(c)
    if key not in cache:
        bd = list(c.boundary)
        if reduced and c.simplices:
            f0 = len(c.simplices[0])
            bd[0] = IntMatrix(1, f0, {0: {j: 1 for j in range(f0)}} if f0 else {})
        cache[key] = ChainComplex(list(c.f_vector), bd, reduced)
    return cache[key]


def _cache(c) -> dict:
    cache = getattr(c, "_homology_cache", None)
    if cache is None:
        cache = {}
        c._homology_cache = cache
    return cache


@dataclass(frozen=True)
class DegreeHomology:
    degree: int
    betti: int
    torsion: tuple[int, ...]
    cycle_basis: tuple[dict, ...] | None = None


@dataclass(frozen=True)
class HomologyResult:
    reduced: bool
    degrees: tuple[DegreeHomology, ...]

    def betti(self, k: int) -> int:
        for d in self.degrees:
            if d.degree == k:
                return d.betti
        return 0

    def torsion(self, k: int) -> tuple[int, ...]:
        for d in self.degrees:
            if d.degree == k:
                return d.torsion
        return ()

    @property
    def betti_numbers(self) -> dict[int, int]:
        return {d.degree: d.betti for d in self.degrees}

    def is_torsion_free(self) -> bool:
        return all(not d.torsion for d in self.degrees)

    def nonzero_degrees(self) -> list[int]:
        return [d.degree for d in self.degrees if d.betti or d.torsion]

    def concentrated_in(self, k: int) -> bool:
        return self.nonzero_degrees() in ([k], [])


def chain_homology(cc: ChainComplex, cycle_basis: bool = False, check: bool = True) -> HomologyResult:
    if check:
        bad = cc.check()
        if bad:
            raise HomologyError(f"boundary of boundary is nonzero in degrees {bad}")
    out = []
    for k in range(cc.top + 1):
        rk = cc.smith(k).rank
        above = cc.smith(k + 1)
        betti = cc.sizes[k] - rk - above.rank
        basis = None
        if cycle_basis and k == cc.top:
            basis = tuple(integer_kernel_basis(cc.d(k)))
        out.append(DegreeHomology(k, betti, above.torsion, basis))
    return HomologyResult(cc.reduced, tuple(out))


def homology(c: OrientedComplex, reduced: bool = True, cycle_basis: bool = False) -> HomologyResult:
    """Betti numbers and torsion of every degree via Smith normal form.

    With ``cycle_basis`` the top degree carries a Z-basis of its cycles,
    which is the top homology since nothing lies above it.
    """
    if c.is_empty():
        return HomologyResult(reduced, ())
    return chain_homology(chain_complex(c, reduced), cycle_basis=cycle_basis)


# -- group actions on homology -------------------------------------------------


class HomologyAction:
    """Traces of chain maps on ``H_k`` of a chain complex, computed over Q.

    ``H_k ⊗ Q = Z_k / B_k``, so the trace is ``tr(Z_k) - tr(B_k)``.  Both
    subspaces get row-reduced bases in which coordinates are read off a
    fixed set of columns.
    """

    def __init__(self, cc: ChainComplex, k: int):
        self.cc = cc
        self.k = k
        self.cycles, self.cycle_cols = kernel_basis(cc.d(k))
        above = cc.d(k + 1)
        self.bounds, self.bound_cols = rref(above.columns()[j] for j in sorted(above.columns()))

    @property
    def rank(self) -> int:
        return len(self.cycles) - len(self.bounds)

    def trace(self, chain_map: dict) -> int:
        """``chain_map`` sends a simplex id to ``(target id, sign)`` in degree k."""
        total = Fraction(0)
        for vec, col in zip(self.cycles, self.cycle_cols):
            total += _pushed_entry(vec, chain_map, col)
        for vec, col in zip(self.bounds, self.bound_cols):
            total -= _pushed_entry(vec, chain_map, col)
        if total.denominator != 1:
            raise HomologyError(f"non-integral trace {total}")
        return int(total)


def _pushed_entry(vec: dict, chain_map: dict, col: int) -> Fraction:
    """Entry ``col`` of the image of ``vec`` under a signed permutation."""
    total = Fraction(0)
    for j, x in vec.items():
        t, s = chain_map[j]
        if t == col:
            total += s * x
    return total


def _degree_map(m: SimplicialMap, k: int) -> dict:
    return {j: (t, s) for j, (t, s) in enumerate(zip(m.targets[k], m.signs[k]))}


def homology_action(c: OrientedComplex, k: int, reduced: bool = True) -> HomologyAction:
    key = ("action", k, reduced)
    cache = _cache(c)
    if key not in cache:
        cache[key] = HomologyAction(chain_complex(c, reduced), k)
    return cache[key]


def action_trace(c: OrientedComplex, sigma: LabelPermutation, k: int, check: bool = True) -> int:
    """Trace of a label permutation on reduced ``H_k(c)``.

    ``check`` insists that reduced homology is free and concentrated in
    degree k.
    """
    if check:
        h = homology(c)
        if not (h.concentrated_in(k) and h.is_torsion_free()):
            raise HomologyError(f"homology is not free and concentrated in degree {k}")
    act = homology_action(c, k)
    return act.trace(_degree_map(induced_simplicial_map(c, sigma), k))


def lefschetz_trace(c: OrientedComplex, sigma: LabelPermutation, k: int) -> int:
    """Same trace through the Hopf trace formula on chains.

    Valid only when reduced homology is concentrated in degree k.
    """
    m = induced_simplicial_map(c, sigma)
    alt = sum((-1) ** j * m.trace(j) for j in range(c.dim + 1)) - 1
    return (-1) ** k * alt


def homology_character(
    c: OrientedComplex,
    k: int,
    points: Sequence[int],
    method: str = "basis",
) -> Character:
    """Character of the permutations of ``points`` on reduced ``H_k(c)``."""
    size = c.n + 1
    if method == "basis":
        act = homology_action(c, k)
        trace = lambda g: act.trace(_degree_map(induced_simplicial_map(c, g), k))  # noqa: E731
    elif method == "lefschetz":
        trace = lambda g: lefschetz_trace(c, g, k)  # noqa: E731
    else:
        raise ValueError(f"unknown method {method!r}")
    return character_of(len(points), trace, points, size)
