"""The pair (T_{n+1}, X) and the Whitehouse extension of Lie_n to Σ_{n+1}.

``X`` is the part of ``T_{n+1}`` avoiding the open stars of the n+1 vertices
``v_{0i}`` (the edges cutting off the cherry {0, i}).  The long exact
sequence of the pair gives

    0 -> H_{n-2}(T_{n+1}) -> H_{n-2}(T_{n+1}, X) -> H~_{n-3}(X) -> 0

and this module certifies it over the integers, then checks the matching
identity of Σ_{n+1}-characters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from treespace.characters import (
    Character,
    induce,
    mismatches,
    restrict,
    tensor_sign,
)
from treespace.complexes import (
    TREE_SPACE,
    OrientedComplex,
    _assemble,
    build_tree_complex,
)
from treespace.homology import (
    ChainComplex,
    HomologyResult,
    chain_complex,
    chain_homology,
    homology,
    homology_character,
)
from treespace.intmat import IntMatrix, integer_kernel_basis, lattice_index_report, rank
from treespace.perm import LabelPermutation, all_permutations
from treespace.superlie import ORDINARY, lie_character, lie_matrix
from treespace.trees import clade_key


class WhitehouseError(ValueError):
    pass


def cherry_vertex(n: int, i: int) -> tuple[int, ...]:
    """Vertex ``v_{0i}`` of ``T_n``, stored by its 0-free side."""
    return clade_key(set(range(1, n + 1)) - {i})


@dataclass
class PairComplex:
    """``X ⊂ T_{n+1}`` with the quotient chain complex ``C(T_{n+1}) / C(X)``.

    ``inclusion[k][i]`` is the ambient id of the i-th k-simplex of X and
    ``relative_ids[k]`` lists the ambient ids outside X, in order.
    """

    n: int
    ambient: OrientedComplex
    sub: OrientedComplex
    inclusion: list[list[int]]
    relative_ids: list[list[int]]
    relative: ChainComplex = field(repr=False)

    def relative_boundary_squared_failures(self) -> list[int]:
        return self.relative.check()


def build_complement_subcomplex(n: int, ambient: OrientedComplex | None = None) -> PairComplex:
    if n < 2:
        raise WhitehouseError("the pair needs n >= 2")
    amb = ambient if ambient is not None else build_tree_complex(n + 1)
    if amb.space != TREE_SPACE or amb.n != n + 1:
        raise WhitehouseError("ambient must be T_{n+1}")
    stars = {cherry_vertex(n + 1, i) for i in range(1, n + 2)}
    levels, labels, inclusion, rel_ids = [], [], [], []
    for k, level in enumerate(amb.simplices):
        keep = [j for j, s in enumerate(level) if not stars.intersection(s)]
        kept = set(keep)
        rel_ids.append([j for j in range(len(level)) if j not in kept])
        if keep:
            levels.append([level[j] for j in keep])
            labels.append([amb.labels[k][j] for j in keep])
            inclusion.append(keep)
    sub = _assemble(TREE_SPACE, n + 1, levels, labels)

    sizes = [len(ids) for ids in rel_ids]
    bd = [IntMatrix(0, sizes[0], {})]
    for k in range(1, len(rel_ids)):
        bd.append(amb.boundary[k].submatrix(rel_ids[k - 1], rel_ids[k]))
    relative = ChainComplex(sizes, bd, reduced=False)
    return PairComplex(n, amb, sub, inclusion, rel_ids, relative)


def relative_homology(p: PairComplex) -> HomologyResult:
    """Homology of the quotient complex (reduced and unreduced agree when X is nonempty)."""
    return chain_homology(p.relative)


# -- exactness ---------------------------------------------------------------


@dataclass
class ExactnessReport:
    degree: int
    ranks: tuple[int, int, int]
    injective: bool
    image_saturated: bool
    composite_zero: bool
    surjective: bool
    image_factors: tuple[int, ...]
    connecting_factors: tuple[int, ...]
    diagnostics: list[str]

    @property
    def exact(self) -> bool:
        a, b, c = self.ranks
        return (self.injective and self.image_saturated and self.composite_zero
                and self.surjective and b == a + c and not self.diagnostics)

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "ranks": list(self.ranks),
            "injective": self.injective,
            "image_saturated": self.image_saturated,
            "composite_zero": self.composite_zero,
            "surjective": self.surjective,
            "exact": self.exact,
            "diagnostics": self.diagnostics,
        }


def _nonunit(factors) -> tuple[int, ...]:
    return tuple(f for f in factors if f != 1)


def exactness_check(p: PairComplex) -> ExactnessReport:
    """Certify the short exact sequence in degree ``n-2`` as integer lattices.

    ``j``: ambient top cycles projected onto the simplices outside X.  It
    must be injective with saturated image.  ``δ``: a relative top cycle,
    lifted by zero on X, has boundary in ``C_{n-3}(X)``; together with
    ``B_{n-3}(X)`` these must span a saturated lattice of the same rank as
    ``Z~_{n-3}(X)``, which then equals it.  With ``δ j = 0`` and
    ``rank(middle) = rank(left) + rank(right)``, the saturated image of ``j``
    is all of ``ker δ``.
    """
    top = p.n - 2
    amb, sub = p.ambient, p.sub
    if amb.dim != top:
        raise WhitehouseError("ambient dimension does not match")
    diag: list[str] = []

    # left: H_top(T_{n+1}) is the top cycle lattice
    left = integer_kernel_basis(amb.boundary[top])
    rel_pos = {j: i for i, j in enumerate(p.relative_ids[top])}
    projected = [{rel_pos[j]: x for j, x in z.items() if j in rel_pos} for z in left]
    mid_dim = len(p.relative_ids[top])
    image = lattice_index_report(projected, mid_dim)
    injective = image.rank == len(left)
    image_saturated = not _nonunit(image.factors)
    if not injective:
        diag.append(f"j has rank {image.rank} on {len(left)} cycles")
    if not image_saturated:
        diag.append(f"image of j has index factors {_nonunit(image.factors)}")

    # middle: relative top cycles
    middle = integer_kernel_basis(p.relative.d(top))
    if any(v for v in (p.relative.d(top).apply(z) for z in projected)):
        diag.append("projected ambient cycle is not a relative cycle")

    # right: reduced H_{top-1}(X)
    k = top - 1
    sub_cc = chain_complex(sub, reduced=True)
    sub_h = chain_homology(sub_cc)
    right = sub_h.betti(k)
    if not sub_h.is_torsion_free():
        diag.append(f"X has torsion {[(d.degree, d.torsion) for d in sub_h.degrees if d.torsion]}")
    if [d for d in sub_h.nonzero_degrees() if d != k]:
        diag.append(f"X has homology outside degree {k}: {sub_h.nonzero_degrees()}")

    # connecting map: ∂ of lifted relative cycles, expressed on X's k-simplices
    sub_pos = {j: i for i, j in enumerate(p.inclusion[k])} if k < len(p.inclusion) else {}
    amb_d = amb.boundary[top]
    rel_ids = p.relative_ids[top]
    lifted_boundaries = []
    leaked = False
    for z in middle:
        lift = {rel_ids[i]: x for i, x in z.items()}
        out = {}
        for r, x in amb_d.apply(lift).items():
            if r not in sub_pos:
                leaked = True
                continue
            out[sub_pos[r]] = x
        lifted_boundaries.append(out)
    if leaked:
        diag.append("boundary of a lifted relative cycle leaves X")
    sub_dim = len(sub.simplices[k]) if k <= sub.dim else 0
    sub_bounds = list(sub_cc.d(k + 1).columns().values()) if k + 1 <= sub.dim else []
    cycles_rank = sub_dim - sub_cc.smith(k).rank
    span = lattice_index_report(lifted_boundaries + sub_bounds, sub_dim)
    surjective = span.rank == cycles_rank and not _nonunit(span.factors) and not leaked
    if not surjective:
        diag.append(f"δ image plus boundaries: rank {span.rank} of {cycles_rank}, factors {_nonunit(span.factors)}")

    # δ∘j = 0: the lifted projection of an ambient cycle bounds in X
    composite_zero = True
    bounds_rank = rank(sub_cc.d(k + 1)) if k + 1 <= sub.dim else 0
    for z in projected:
        lift = {rel_ids[i]: x for i, x in z.items()}
        img = {sub_pos[r]: x for r, x in amb_d.apply(lift).items() if r in sub_pos}
        if img and lattice_index_report(sub_bounds + [img], sub_dim).rank != bounds_rank:
            composite_zero = False
            diag.append("δ∘j is nonzero")
            break

    return ExactnessReport(
        degree=top,
        ranks=(len(left), len(middle), right),
        injective=injective,
        image_saturated=image_saturated,
        composite_zero=composite_zero,
        surjective=surjective,
        image_factors=_nonunit(image.factors),
        connecting_factors=_nonunit(span.factors),
        diagnostics=diag,
    )


# -- characters --------------------------------------------------------------


def hat_lie_character(n: int, complex_: OrientedComplex | None = None, method: str = "basis") -> Character:
    """Sign-twisted Σ_{n+1}-character of ``H~_{n-3}(T_n)``.

    All of ``0..n`` is permuted.  The restriction to the stabilizer of a
    point is asserted to be ``χ(Lie_n)``.
    """
    if n < 3:
        raise WhitehouseError("hat-Lie is defined here for n >= 3")
    c = complex_ if complex_ is not None else build_tree_complex(n)
    chi = tensor_sign(homology_character(c, n - 3, range(n + 1), method=method))
    lie = lie_character(n, ORDINARY)
    bad = mismatches(restrict(chi), lie)
    if bad:
        raise WhitehouseError(f"restriction differs from Lie_{n} on classes {bad}")
    return chi


@dataclass
class CharacterCheck:
    n: int
    induced: Character
    lie_next: Character
    hat_lie: Character

    @property
    def failing_classes(self) -> list[str]:
        return mismatches(self.induced, self.lie_next + self.hat_lie)

    @property
    def ok(self) -> bool:
        return not self.failing_classes

    def rows(self) -> dict[str, dict[str, int]]:
        return {
            "induced": self.induced.table(),
            "lie_next": self.lie_next.table(),
            "hat_lie": self.hat_lie.table(),
        }


def whitehouse_character_check(n: int, method: str = "basis") -> CharacterCheck:
    """``Ind χ(Lie_n) = χ(Lie_{n+1}) + χ(hat-Lie_n)`` class by class."""
    return CharacterCheck(
        n,
        induce(lie_character(n, ORDINARY)),
        lie_character(n + 1, ORDINARY),
        hat_lie_character(n, method=method),
    )


def subcomplex_character(p: PairComplex) -> Character:
    """Σ_{n+1}-character of ``H~_{n-3}(X)``, permuting ``1..n+1``.

    Uses the trace formula on chains, which is valid once homology of X is
    known to sit in one degree.
    """
    h = homology(p.sub)
    k = p.n - 3
    if not h.concentrated_in(k):
        raise WhitehouseError(f"homology of X is not concentrated in degree {k}")
    return homology_character(p.sub, k, range(1, p.n + 2), method="lefschetz")


def tree_space_action_character(n: int, complex_: OrientedComplex | None = None) -> Character:
    """Untwisted Σ_{n+1}-character of ``H~_{n-3}(T_n)``.

    Matching it with :func:`subcomplex_character` identifies the point
    ``n+1`` of X with the root 0 of T_n.
    """
    c = complex_ if complex_ is not None else build_tree_complex(n)
    return homology_character(c, n - 3, range(n + 1))


# -- combinatorial checks ------------------------------------------------------


def star_overlaps(ambient: OrientedComplex) -> list[tuple]:
    """Simplices containing two distinct cherry vertices ``v_{0i}``."""
    m = ambient.n
    stars = {cherry_vertex(m, i) for i in range(1, m + 1)}
    return [s for level in ambient.simplices for s in level if len(stars.intersection(s)) > 1]


def closed_star_f_vector(c: OrientedComplex, vertex: tuple) -> tuple[int, ...]:
    """f-vector of the closed star of a vertex."""
    faces: list[set] = [set() for _ in range(c.dim + 1)]
    for k, level in enumerate(c.simplices):
        for s in level:
            if vertex in s:
                vs = list(s)
                for mask in range(1, 1 << len(vs)):
                    face = frozenset(v for b, v in enumerate(vs) if mask >> b & 1)
                    faces[len(face) - 1].add(face)
    return tuple(len(f) for f in faces if f)


def cone_f_vector(f: tuple[int, ...]) -> tuple[int, ...]:
    """f-vector of the cone on a complex."""
    out = [f[0] + 1]
    for k in range(1, len(f) + 1):
        out.append((f[k] if k < len(f) else 0) + f[k - 1])
    return tuple(out)


def contragredient_check(n: int = 3) -> bool:
    """Lie_n and its dual have equal characters, by explicit matrices.

    The dual acts by ``ρ(σ^{-1})^T``; it must be a representation and its
    traces must match those of ``ρ``.
    """
    labels = list(range(1, n + 1))
    group = list(all_permutations(labels, n + 1))

    def dual(g: LabelPermutation):
        m = lie_matrix(labels, g.inverse(), ORDINARY)
        return [list(r) for r in zip(*m)]

    def mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]

    def trace(m) -> int:
        return sum(m[i][i] for i in range(len(m)))

    for g in group:
        if trace(dual(g)) != trace(lie_matrix(labels, g, ORDINARY)):
            return False
        for h in group:
            if dual(g.compose(h)) != mul(dual(g), dual(h)):
                return False
    return True


def whitehouse_report(n: int, exactness: bool = True) -> dict[str, Any]:
    """Everything about the pair for one n, as a JSON-ready dict."""
    p = build_complement_subcomplex(n)
    rel = relative_homology(p)
    check = whitehouse_character_check(n)
    out: dict[str, Any] = {
        "n": n,
        "f_vector": {"ambient": list(p.ambient.f_vector), "sub": list(p.sub.f_vector),
                     "relative": list(p.relative.sizes)},
        "homology": {
            "ambient": _table(homology(p.ambient)),
            "sub": _table(homology(p.sub)),
            "relative": _table(rel),
        },
        "characters": check.rows(),
        "character_identity": check.ok,
        "failing_classes": check.failing_classes,
    }
    if exactness:
        out["exactness"] = [exactness_check(p).to_json()]
    return out


def _table(h: HomologyResult) -> dict[str, dict[str, Any]]:
    return {str(d.degree): {"betti": d.betti, "torsion": list(d.torsion)} for d in h.degrees}

