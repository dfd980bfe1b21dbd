"""The fundamental cycle of T_n with super-Lie coefficients, and its pairing with cochains.

Each binary tree X contributes ``<w_X> ⊗ c_X``: ``w_X`` orders the
internal edges and ``c_X`` is a super-Lie monomial in the non-root labels,
both defined by splitting X at its root node into Y and Z::

    w_X = ρ_Y w_Y ρ_Z w_Z            (ρ_Y omitted when Y is a single leaf)
    c_X = (-1)^{|Y|} [c_Y, c_Z],     c = x_i for a single leaf i.

The chain is stored against the complex's reference orientation, so each
term is multiplied by the sign of the permutation taking ``w_X`` to
canonical edge order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from treespace.complexes import (
    TREE_SPACE,
    OrientedComplex,
    build_tree_complex,
    induced_simplicial_map,
    simplex_tree,
    tree_simplex,
)
from treespace.perm import LabelPermutation, permutation_sign
from treespace.superlie import (
    SUPER,
    SuperLieElement,
    bracket,
    format_element,
    generator,
    normalize,
    permute_generators,
)
from treespace.trees import LabeledTree, TreeError, caterpillar, clade_key, rooted_shape, split_at_root


class CycleError(ValueError):
    pass


@dataclass(frozen=True)
class CycleTerm:
    tree: LabeledTree
    edge_word: tuple[tuple[int, ...], ...]  # clade keys in construction order
    coeff: SuperLieElement

    @property
    def orientation_sign(self) -> int:
        """Sign taking ``edge_word`` to the reference (sorted) edge order."""
        return permutation_sign(self.edge_word)

    def oriented_coeff(self) -> SuperLieElement:
        return self.orientation_sign * self.coeff


def cycle_term(t: LabeledTree, smaller_first: bool = True) -> CycleTerm:
    """Orientation word and coefficient of a binary tree.

    ``smaller_first=False`` takes the two root subtrees in the opposite
    order at every level; the oriented term must not change.
    """
    if t.n == 1:
        return CycleTerm(t, (), generator(SUPER, next(iter(t.labels))))
    if not t.is_binary():
        raise TreeError(f"cycle_term needs a binary tree, got {t}")
    y, z = split_at_root(t)
    if not smaller_first:
        y, z = z, y
    ty = cycle_term(y, smaller_first)
    tz = cycle_term(z, smaller_first)
    word: list[tuple[int, ...]] = []
    for part, sub in ((y, ty), (z, tz)):
        if part.n >= 2:
            word.append(clade_key(part.labels))
        word.extend(sub.edge_word)
    coeff = bracket(ty.coeff, tz.coeff)
    if y.n % 2:
        coeff = -coeff
    return CycleTerm(t, tuple(word), coeff)


class ModuleChain:
    """Chain on one degree of a tree complex with super-Lie coefficients."""

    def __init__(self, complex_: OrientedComplex, degree: int, coeffs: Mapping[int, SuperLieElement]):
        self.complex = complex_
        self.degree = degree
        self.coeffs = {i: e for i, e in sorted(coeffs.items()) if not e.is_zero()}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleChain):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)


def build_fundamental_cycle(n: int, complex_: OrientedComplex | None = None) -> ModuleChain:
    """Sum of all binary-tree terms, in reference orientation."""
    if n < 3:
        raise CycleError("the fundamental cycle lives on T_n for n >= 3")
    c = complex_ if complex_ is not None else build_tree_complex(n)
    if c.space != TREE_SPACE or c.n != n:
        raise CycleError("complex does not match")
    top = c.dim
    coeffs = {}
    for i in range(len(c.simplices[top])):
        term = cycle_term(simplex_tree(c, top, i))
        coeffs[i] = term.oriented_coeff()
    return ModuleChain(c, top, coeffs)


def boundary_of_module_chain(f: ModuleChain) -> ModuleChain:
    """Apply the integer boundary matrix entrywise to the coefficients.

    In degree 0 this is the augmentation, so the result lives on a single
    point (index 0) in degree -1.
    """
    c = f.complex
    if f.degree < 1:
        cols = {j: {0: 1} for j in range(len(c.simplices[0]))}
    else:
        cols = c.boundary[f.degree].columns()
    acc: dict[int, dict] = {}
    for j, e in f.coeffs.items():
        for i, s in cols.get(j, {}).items():
            bucket = acc.setdefault(i, {})
            for w, x in e._coeffs.items():
                bucket[w] = bucket.get(w, 0) + s * x
    out = {}
    labels = frozenset(range(1, c.n + 1))
    for i, bucket in acc.items():
        out[i] = SuperLieElement(SUPER, labels, bucket)
    return ModuleChain(c, f.degree - 1, out)


def act_on_chain(f: ModuleChain, sigma: LabelPermutation) -> ModuleChain:
    """Simplicial action on simplices combined with permuting generators."""
    if sigma(0) != 0:
        raise CycleError("only permutations fixing 0 act on super-Lie coefficients")
    m = induced_simplicial_map(f.complex, sigma)
    out = {}
    for j, e in f.coeffs.items():
        t, s = m.targets[f.degree][j], m.signs[f.degree][j]
        out[t] = s * permute_generators(e, sigma)
    return ModuleChain(f.complex, f.degree, out)


def verify_invariance(f: ModuleChain, sigma: LabelPermutation) -> bool:
    return act_on_chain(f, sigma) == f


def theta_eval(cochain: Mapping[int, int] | list[int], f: ModuleChain) -> SuperLieElement:
    """Pair an integer top cochain with the cycle: ``Σ f(X) c_X``."""
    values = dict(enumerate(cochain)) if isinstance(cochain, list) else dict(cochain)
    size = len(f.complex.simplices[f.degree])
    if any(not 0 <= j < size for j in values):
        raise CycleError("cochain is not supported on the chain's degree")
    total: dict = {}
    for j, x in values.items():
        if not x or j not in f.coeffs:
            continue
        for w, cw in f.coeffs[j]._coeffs.items():
            total[w] = total.get(w, 0) + x * cw
    return SuperLieElement(SUPER, range(1, f.complex.n + 1), total)


def caterpillar_cochain(c: OrientedComplex, sigma) -> dict[int, int]:
    """Indicator cochain of the caterpillar simplex γ_σ."""
    t = caterpillar(sigma)
    return {c.index(c.dim, tree_simplex(t)): 1}


def coboundary(c: OrientedComplex, k: int, g: Mapping[int, int]) -> dict[int, int]:
    """``δg`` for an integer k-cochain ``g``."""
    d = c.boundary[k + 1]
    out: dict[int, int] = {}
    for i, row in d.data.items():
        gi = g.get(i, 0)
        if not gi:
            continue
        for j, s in row.items():
            out[j] = out.get(j, 0) + s * gi
    return {j: v for j, v in out.items() if v}


# -- the n = 5 census -----------------------------------------------------------

# Rooted shapes of binary 5-trees and their coefficient patterns.
# Letters a..e name the leaves by position; the orientation word lists the
# internal edges from the root outwards.
SHAPE_PHI = "phi"
SHAPE_PSI = "psi"
SHAPE_OMEGA = "omega"


def shape_class(t: LabeledTree) -> str:
    """Classify a binary 5-tree as one of the three shapes."""
    if t.n != 5 or not t.is_binary():
        raise CycleError("shape classes are defined for binary 5-trees")
    kids = sorted(rooted_shape(t), key=len)
    leaf = ()
    if kids[0] == leaf:
        big = kids[1]
        # big has 4 leaves: either leaf + 3-subtree or 2 + 2
        if leaf in big:
            return SHAPE_PHI
        return SHAPE_OMEGA
    return SHAPE_PSI


def _subtrees(t: LabeledTree, node) -> list:
    return sorted(t.children(node), key=lambda k: (not isinstance(k, int), len(k) if not isinstance(k, int) else 0,
                                                   k if isinstance(k, int) else min(k)))


def shape_pattern(t: LabeledTree) -> tuple[int, tuple, tuple]:
    """``(sign, edge word, monomial)`` for a binary 5-tree read off its shape.

    The monomial is in the leaf labels; its sign and the word follow the
    three shape classes.
    """
    cls = shape_class(t)
    root = t.root_node
    kids = _subtrees(t, root)
    if cls == SHAPE_PHI:
        a, z = kids
        b, zz = _subtrees(t, z)
        c, dd = _subtrees(t, zz)
        d, e = _subtrees(t, dd)
        word = (clade_key(z), clade_key(zz), clade_key(dd))
        return 1, word, (a, (b, (c, (d, e))))
    if cls == SHAPE_PSI:
        ab, cde = sorted((k for k in kids), key=len)
        a, b = _subtrees(t, ab)
        c, de = _subtrees(t, cde)
        d, e = _subtrees(t, de)
        word = (clade_key(ab), clade_key(cde), clade_key(de))
        return -1, word, ((a, b), (c, (d, e)))
    a, z = kids
    bc, de = sorted(_subtrees(t, z), key=min)
    b, c = _subtrees(t, bc)
    d, e = _subtrees(t, de)
    word = (clade_key(z), clade_key(bc), clade_key(de))
    return -1, word, (a, ((b, c), (d, e)))


def f5_census(f: ModuleChain | None = None) -> dict:
    """Count the terms of F_5 by shape and check each against its shape pattern."""
    if f is None:
        f = build_fundamental_cycle(5)
    if f.complex.n != 5:
        raise CycleError("census is for n = 5")
    counts: Counter = Counter()
    mismatched = []
    for j, coeff in f.coeffs.items():
        t = simplex_tree(f.complex, f.degree, j)
        sign, word, mono = shape_pattern(t)
        expected = (sign * permutation_sign(word)) * normalize(mono, SUPER)
        counts[shape_class(t)] += 1
        if expected != coeff:
            mismatched.append(t.encoding)
    return {"total": len(f), "counts": dict(counts), "mismatched": mismatched}


def export_cycle(f: ModuleChain) -> list[dict]:
    """JSON-ready rows: tree, orientation sign, λ-coefficients and bracket text.

    At n = 5 each row also names its shape class.
    """
    rows = []
    for j, coeff in f.coeffs.items():
        t = simplex_tree(f.complex, f.degree, j)
        term = cycle_term(t)
        rows.append({
            "tree": t.encoding,
            "edge_word": [",".join(map(str, e)) for e in term.edge_word],
            "orientation_sign": term.orientation_sign,
            "coefficient": {",".join(map(str, w)): x for w, x in coeff.items()},
            "bracket": format_element(coeff),
        })
        if f.complex.n == 5:
            rows[-1]["shape"] = shape_class(t)
    return rows


def group_boundary_by_face(f: ModuleChain) -> dict[int, list[tuple[int, int]]]:
    """For each face: the (top simplex, incidence) pairs feeding it."""
    c = f.complex
    groups: dict[int, list[tuple[int, int]]] = {}
    for i, row in c.boundary[f.degree].data.items():
        groups[i] = sorted(row.items())
    return groups


def term_sum(terms: Iterable[SuperLieElement], labels) -> SuperLieElement:
    out = SuperLieElement.zero(SUPER, labels)
    for t in terms:
        out = out + t
    return out
