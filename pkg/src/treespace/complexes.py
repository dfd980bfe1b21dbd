"""Oriented simplicial complexes: the tree space T_n and the partition nerve.

A k-simplex of ``T_n`` is a tree with k+1 internal edges; its vertices are
the edges' bipartitions and its reference orientation lists them in
canonical edge order (sorted clade keys).  A k-simplex of the nerve is a
strict refinement chain of k+1 non-trivial partitions of ``{1..n}``, listed
coarsest first.  Simplices in each degree are numbered densely in the order
of their text encodings.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from treespace.intmat import IntMatrix
from treespace.perm import LabelPermutation, permutation_sign
from treespace.trees import LabeledTree, canonicalize, clade_key, enumerate_trees

log = logging.getLogger(__name__)

TREE_SPACE = "tree-space"
PARTITION_NERVE = "partition-nerve"
SCHEMA = 1

SetPartition = tuple[tuple[int, ...], ...]


class ComplexError(ValueError):
    pass


@dataclass
class OrientedComplex:
    """Finite simplicial complex with integer boundary matrices.

    ``simplices[k]`` lists k-simplices as tuples of vertex keys in reference
    order; ``boundary[k]`` maps k-chains to (k-1)-chains (``boundary[0]``
    has zero rows).  ``labels[k][i]`` is the text encoding of simplex i.
    """

    space: str
    n: int
    simplices: list[list[tuple]]
    boundary: list[IntMatrix]
    labels: list[list[str]]
    _index: list[dict] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = [{frozenset(s): i for i, s in enumerate(level)} for level in self.simplices]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def index(self, k: int, vertices: Iterable) -> int:
        return self._index[k][frozenset(vertices)]

    def find(self, k: int, vertices: Iterable) -> int | None:
        if k < 0 or k > self.dim:
            return None
        return self._index[k].get(frozenset(vertices))

    def is_empty(self) -> bool:
        return not self.simplices or not self.simplices[0]

    def boundary_squared_failures(self) -> list[int]:
        """Degrees k with ``∂_{k-1} ∂_k != 0``."""
        bad = []
        for k in range(2, self.dim + 1):
            if not (self.boundary[k - 1] @ self.boundary[k]).is_zero():
                bad.append(k)
        return bad

    def faces_closed(self) -> bool:
        for k in range(1, self.dim + 1):
            for s in self.simplices[k]:
                for i in range(len(s)):
                    if self.find(k - 1, s[:i] + s[i + 1:]) is None:
                        return False
        return True

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "space": self.space,
            "n": self.n,
            "f_vector": list(self.f_vector),
            "simplices": self.labels,
            "vertices": [[_vertex_text(self.space, v) for v in s] for s in self.simplices[0]] if self.simplices else [],
            "boundary": [[list(t) for t in self.boundary[k].triplets()] for k in range(1, self.dim + 1)],
        }


def _vertex_text(space: str, v) -> str:
    if space == TREE_SPACE:
        return ",".join(map(str, v))
    return partition_text(v)


@dataclass
class BoundaryDump:
    """Boundary data read back from a complex export."""

    space: str
    n: int
    f_vector: tuple[int, ...]
    boundary: list[IntMatrix]  # boundary[k-1] is ∂_k

    def boundary_squared_failures(self) -> list[int]:
        bad = []
        for k in range(2, len(self.boundary) + 1):
            if not (self.boundary[k - 2] @ self.boundary[k - 1]).is_zero():
                bad.append(k)
        return bad


def load_dump(payload: dict[str, Any]) -> BoundaryDump:
    if payload.get("schema") != SCHEMA:
        raise ComplexError(f"unsupported schema {payload.get('schema')!r}")
    f = tuple(int(x) for x in payload["f_vector"])
    mats = []
    for k, trip in enumerate(payload["boundary"], start=1):
        mats.append(IntMatrix.from_triplets(f[k - 1], f[k], [tuple(map(int, t)) for t in trip]))
    return BoundaryDump(payload["space"], int(payload["n"]), f, mats)


def read_dump(path: str) -> BoundaryDump:
    with open(path, encoding="utf-8") as fh:
        return load_dump(json.load(fh))


# -- construction -------------------------------------------------------------


def _assemble(space: str, n: int, levels: list[list[tuple]], labels: list[list[str]]) -> OrientedComplex:
    index = [{frozenset(s): i for i, s in enumerate(level)} for level in levels]
    boundary = [IntMatrix(0, len(levels[0]) if levels else 0, {})]
    for k in range(1, len(levels)):
        rows: dict[int, dict[int, int]] = {}
        below = index[k - 1]
        for j, s in enumerate(levels[k]):
            for i in range(len(s)):
                r = below[frozenset(s[:i] + s[i + 1:])]
                rows.setdefault(r, {})[j] = -1 if i % 2 else 1
        boundary.append(IntMatrix(len(levels[k - 1]), len(levels[k]), rows))
    return OrientedComplex(space, n, levels, boundary, labels, index)


def tree_simplex(t: LabeledTree) -> tuple:
    """Reference-ordered vertex tuple of a tree's simplex."""
    return tuple(clade_key(c) for c in sorted(t.clades, key=clade_key))


def build_tree_complex(n: int) -> OrientedComplex:
    """``T_n``: dimension n-3, vertices the one-edge trees."""
    if n < 3:
        log.warning("T_%d is empty", n)
        return OrientedComplex(TREE_SPACE, n, [], [], [])
    levels, labels = [], []
    for k in range(n - 2):
        trees = enumerate_trees(n, k + 1)
        levels.append([tree_simplex(t) for t in trees])
        labels.append([canonicalize(t) for t in trees])
    return _assemble(TREE_SPACE, n, levels, labels)


def simplex_tree(c: OrientedComplex, k: int, i: int) -> LabeledTree:
    if c.space != TREE_SPACE:
        raise ComplexError("not a tree complex")
    return LabeledTree(frozenset(range(1, c.n + 1)), frozenset(frozenset(v) for v in c.simplices[k][i]))


# -- partition lattice -------------------------------------------------------


def set_partitions(items: Sequence[int]) -> list[SetPartition]:
    """All set partitions of ``items``, blocks sorted, block tuples sorted."""
    items = list(items)
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for p in set_partitions(rest):
        out.append(tuple(sorted(((first,),) + p)))
        for b in range(len(p)):
            blocks = list(p)
            blocks[b] = tuple(sorted((first,) + blocks[b]))
            out.append(tuple(sorted(blocks)))
    return out


def refines(fine: SetPartition, coarse: SetPartition) -> bool:
    where = {}
    for bi, block in enumerate(coarse):
        for x in block:
            where[x] = bi
    return all(len({where[x] for x in block}) == 1 for block in fine)


def partition_text(p: SetPartition) -> str:
    return "|".join(",".join(map(str, b)) for b in p)


def nontrivial_partitions(n: int) -> list[SetPartition]:
    return sorted((p for p in set_partitions(range(1, n + 1)) if 1 < len(p) < n),
                  key=lambda p: (len(p), p))


def build_partition_nerve(n: int) -> OrientedComplex:
    """Nerve of the poset of non-trivial partitions of ``{1..n}``."""
    if n < 3:
        log.warning("partition nerve for n=%d is empty", n)
        return OrientedComplex(PARTITION_NERVE, n, [], [], [])
    parts = nontrivial_partitions(n)
    finer: dict[SetPartition, list[SetPartition]] = {
        p: [q for q in parts if len(q) > len(p) and refines(q, p)] for p in parts
    }
    chains: list[list[tuple]] = [[] for _ in range(n - 2)]

    def grow(chain: tuple) -> None:
        chains[len(chain) - 1].append(chain)
        for q in finer[chain[-1]]:
            grow(chain + (q,))

    for p in parts:
        grow((p,))
    levels, labels = [], []
    for level in chains:
        enc = sorted((" < ".join(partition_text(p) for p in ch), ch) for ch in level)
        levels.append([ch for _, ch in enc])
        labels.append([e for e, _ in enc])
    return _assemble(PARTITION_NERVE, n, levels, labels)


# -- symmetries ----------------------------------------------------------------


@dataclass
class SimplicialMap:
    """Signed permutation of simplices in each degree."""

    targets: list[list[int]]
    signs: list[list[int]]

    def matrix(self, k: int) -> IntMatrix:
        size = len(self.targets[k])
        return IntMatrix(size, size, {t: {j: s} for j, (t, s) in enumerate(zip(self.targets[k], self.signs[k]))})

    def apply(self, k: int, chain: dict[int, Any]) -> dict[int, Any]:
        """Push a chain (simplex id -> coefficient) forward."""
        out = {}
        for j, x in chain.items():
            s = self.signs[k][j]
            out[self.targets[k][j]] = x if s == 1 else -x
        return out

    def trace(self, k: int) -> int:
        return sum(s for j, (t, s) in enumerate(zip(self.targets[k], self.signs[k])) if t == j)


def _image_vertex(c: OrientedComplex, v, sigma: LabelPermutation):
    if c.space == TREE_SPACE:
        everything = frozenset(range(c.n + 1))
        img = frozenset(sigma(i) for i in v)
        if 0 in img:
            img = frozenset(sigma(i) for i in everything - frozenset(v))
        return clade_key(img)
    return tuple(sorted(tuple(sorted(sigma(x) for x in b)) for b in v))


def _order_key(c: OrientedComplex, v):
    return v if c.space == TREE_SPACE else len(v)


def induced_simplicial_map(c: OrientedComplex, sigma: LabelPermutation) -> SimplicialMap:
    """Action of a label permutation on oriented simplices.

    On ``T_n`` any permutation of ``{0..n}`` acts; on the partition nerve
    only those fixing 0.
    """
    if len(sigma) != c.n + 1:
        raise ComplexError(f"permutation of size {len(sigma)} for n={c.n}")
    if c.space == PARTITION_NERVE and sigma(0) != 0:
        raise ComplexError("only permutations fixing 0 act on the partition nerve")
    targets, signs = [], []
    for k, level in enumerate(c.simplices):
        tk, sk = [], []
        for s in level:
            img = [_image_vertex(c, v, sigma) for v in s]
            tk.append(c.index(k, img))
            sk.append(permutation_sign([_order_key(c, v) for v in img]))
        targets.append(tk)
        signs.append(sk)
    return SimplicialMap(targets, signs)


def codim1_incidence_report(c: OrientedComplex) -> dict[int, int]:
    """Histogram: number of top simplices incident to each codimension-1 simplex."""
    if c.dim < 1:
        raise ComplexError("incidence report needs dimension >= 1")
    top = c.boundary[c.dim]
    counts = Counter(len(top.data.get(i, {})) for i in range(top.rows))
    return dict(sorted(counts.items()))
