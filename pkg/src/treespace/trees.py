"""Combinatorial n-trees.

A tree with leaves labelled ``{0} ∪ labels`` is stored by its set of
*clades*: for each internal edge, the side of the leaf bipartition that does
not contain the root leaf 0.  A family of clades is realised by a unique
tree (no degree-2 vertices) exactly when its members are pairwise nested or
disjoint, so the clade set is already a canonical form up to
label-preserving isomorphism.  Edge lengths are never stored.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from treespace.perm import LabelPermutation

Clade = frozenset


class TreeError(ValueError):
    """Invalid tree data or an operation that does not apply to a tree."""


def clade_key(clade: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(clade))


def compatible(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a or not (a & b)


@dataclass(frozen=True)
class Bipartition:
    """Leaf bipartition cut out by an internal edge; 0 is always in ``side_zero``."""

    side_zero: frozenset
    side_other: frozenset

    def __post_init__(self) -> None:
        if 0 not in self.side_zero or 0 in self.side_other:
            raise TreeError("side_zero must contain the root label 0")
        if self.side_zero & self.side_other:
            raise TreeError("sides overlap")
        if len(self.side_zero) < 2 or len(self.side_other) < 2:
            raise TreeError("both sides need at least two labels")

    @classmethod
    def from_sides(cls, side: Iterable[int], all_labels: Iterable[int]) -> Bipartition:
        side = frozenset(side)
        rest = frozenset(all_labels) - side
        if 0 in side:
            return cls(side, rest)
        return cls(rest, side)

    @property
    def key(self) -> tuple[int, ...]:
        return clade_key(self.side_other)

    def __str__(self) -> str:
        return ",".join(map(str, sorted(self.side_zero))) + "|" + ",".join(map(str, self.key))


@dataclass(frozen=True)
class LabeledTree:
    """An n-tree up to label-preserving isomorphism.

    ``labels`` are the non-root leaf labels (positive integers, usually
    ``1..n``); ``clades`` the 0-free sides of the internal edges.
    """

    labels: frozenset
    clades: frozenset = frozenset()

    def __post_init__(self) -> None:
        labels = frozenset(self.labels)
        clades = frozenset(frozenset(c) for c in self.clades)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "clades", clades)
        if not labels:
            raise TreeError("a tree needs at least one non-root label")
        if 0 in labels or any(not isinstance(i, int) or i < 0 for i in labels):
            raise TreeError("non-root labels must be positive integers")
        for c in clades:
            if not c <= labels:
                raise TreeError(f"clade {sorted(c)} uses unknown labels")
            if not 2 <= len(c) <= len(labels) - 1:
                raise TreeError(f"clade {sorted(c)} does not come from an internal edge")
        cl = list(clades)
        for a, b in itertools.combinations(cl, 2):
            if not compatible(a, b):
                raise TreeError(f"incompatible edges {sorted(a)} and {sorted(b)}")

    # -- constructors -------------------------------------------------

    @classmethod
    def star(cls, n_or_labels: int | Iterable[int]) -> LabeledTree:
        return cls(_labels(n_or_labels))

    @classmethod
    def from_clades(cls, n_or_labels: int | Iterable[int], clades: Iterable[Iterable[int]]) -> LabeledTree:
        return cls(_labels(n_or_labels), frozenset(frozenset(c) for c in clades))

    @classmethod
    def from_bipartitions(cls, n: int, parts: Iterable[Bipartition]) -> LabeledTree:
        return cls(_labels(n), frozenset(p.side_other for p in parts))

    @classmethod
    def from_graph(
        cls,
        n: int,
        leaf_attach: Mapping[int, object],
        internal_edges: Iterable[tuple[object, object]],
    ) -> LabeledTree:
        """Build from an explicit graph: leaves ``0..n`` attached to nodes."""
        if set(leaf_attach) != set(range(n + 1)):
            raise TreeError("leaf_attach must be total on 0..n")
        edges = [tuple(e) for e in internal_edges]
        nodes = set(leaf_attach.values())
        for u, v in edges:
            if u == v:
                raise TreeError("loop edge")
            nodes.update((u, v))
        if len(edges) != len(nodes) - 1 or len({frozenset(e) for e in edges}) != len(edges):
            raise TreeError("internal edges do not form a tree on the nodes")
        adj: dict = defaultdict(list)
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        leaves_at: dict = defaultdict(set)
        for lab, node in leaf_attach.items():
            leaves_at[node].add(lab)
        for node in nodes:
            if len(adj[node]) + len(leaves_at[node]) < 3:
                raise TreeError(f"node {node!r} has degree < 3")
        root = leaf_attach[0]
        # DFS from the root node; the clade of an edge is the leaf set below it.
        parent = {root: None}
        order = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in parent:
                    parent[v] = u
                    order.append(v)
                    stack.append(v)
        if len(parent) != len(nodes):
            raise TreeError("internal edges are disconnected")
        below = {u: set(leaves_at[u]) - {0} for u in nodes}
        for u in reversed(order):
            if parent[u] is not None:
                below[parent[u]] |= below[u]
        clades = [frozenset(below[u]) for u in order if parent[u] is not None]
        return cls(frozenset(range(1, n + 1)), frozenset(clades))

    @classmethod
    def parse(cls, text: str) -> LabeledTree:
        """Inverse of :func:`canonicalize`."""
        return parse_tree(text)

    # -- basic data ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.clades)

    def is_binary(self) -> bool:
        return self.n >= 2 and len(self.clades) == self.n - 2

    @cached_property
    def _hierarchy(self) -> dict:
        """Map each node (keyed by its clade; root keyed by ``labels``) to its children."""
        root = self.labels
        children: dict = {root: []}
        for c in sorted(self.clades, key=len):
            children[c] = []
        ordered = sorted(self.clades, key=len)
        for i, c in enumerate(ordered):
            parent = root
            for d in ordered[i + 1:]:
                if c < d:
                    parent = d
                    break
            children[parent].append(c)
        for node, kids in children.items():
            covered = set().union(*kids) if kids else set()
            for leaf in sorted(node - covered):
                kids.append(leaf)
        return children

    def children(self, node: frozenset) -> list:
        """Children of a node: sub-clades (frozensets) and leaf labels (ints)."""
        return list(self._hierarchy[node])

    @property
    def root_node(self) -> frozenset:
        return self.labels

    @property
    def nodes(self) -> list[frozenset]:
        """Internal nodes, each identified by the clade below it (root: all labels)."""
        return sorted(self._hierarchy, key=lambda c: (-len(c), clade_key(c)))

    @property
    def leaf_attach(self) -> dict[int, frozenset]:
        out = {0: self.root_node}
        for node, kids in self._hierarchy.items():
            for k in kids:
                if isinstance(k, int):
                    out[k] = node
        return out

    @property
    def internal_edges(self) -> list[tuple[frozenset, frozenset]]:
        out = []
        for node, kids in self._hierarchy.items():
            for k in kids:
                if not isinstance(k, int):
                    out.append((node, k))
        return sorted(out, key=lambda e: clade_key(e[1]))

    def degree(self, node: frozenset) -> int:
        return len(self._hierarchy[node]) + 1

    @property
    def encoding(self) -> str:
        return canonicalize(self)

    def __str__(self) -> str:
        return self.encoding


def _labels(n_or_labels: int | Iterable[int]) -> frozenset:
    if isinstance(n_or_labels, int):
        return frozenset(range(1, n_or_labels + 1))
    return frozenset(n_or_labels)


# -- canonical text form ---------------------------------------------------


def canonicalize(t: LabeledTree) -> str:
    """Nested-parentheses encoding rooted at the node carrying leaf 0.

    Children at every node are sorted by their minimal leaf label.
    """
    h = t._hierarchy

    def enc(node: frozenset, extra: list) -> str:
        items = [(x, str(x)) for x in extra]
        for k in h[node]:
            if isinstance(k, int):
                items.append((k, str(k)))
            else:
                items.append((min(k), enc(k, [])))
        items.sort()
        return "(" + ",".join(s for _, s in items) + ")"

    return enc(t.root_node, [0])


def parse_tree(text: str) -> LabeledTree:
    text = "".join(text.split())
    pos = 0
    clades: list[frozenset] = []
    labels: list[int] = []

    def group() -> frozenset:
        nonlocal pos
        if pos >= len(text) or text[pos] != "(":
            raise TreeError(f"expected '(' at {pos} in {text!r}")
        pos += 1
        below: set[int] = set()
        nitems = 0
        while True:
            if pos < len(text) and text[pos] == "(":
                sub = group()
                clades.append(sub)
                below |= sub
            else:
                start = pos
                while pos < len(text) and text[pos].isdigit():
                    pos += 1
                if start == pos:
                    raise TreeError(f"bad token at {pos} in {text!r}")
                lab = int(text[start:pos])
                labels.append(lab)
                below.add(lab)
            nitems += 1
            if pos >= len(text):
                raise TreeError(f"unterminated group in {text!r}")
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                pos += 1
                break
            raise TreeError(f"unexpected {text[pos]!r} in {text!r}")
        if nitems < 2:
            raise TreeError("node with a single child")
        return frozenset(below)

    root = group()
    if pos != len(text):
        raise TreeError(f"trailing characters in {text!r}")
    if 0 not in root or any(0 in c for c in clades):
        raise TreeError("leaf 0 must sit at the outermost node")
    if len(labels) != len(set(labels)):
        raise TreeError("repeated leaf label")
    labs = frozenset(labels) - {0}
    return LabeledTree(labs, frozenset(clades))


# -- enumeration -------------------------------------------------------------


def binary_trees(labels: int | Iterable[int]) -> list[LabeledTree]:
    """All binary trees on ``{0} ∪ labels`` by iterated leaf insertion."""
    labs = sorted(_labels(labels))
    if len(labs) < 2:
        raise TreeError("binary trees need at least two non-root labels")
    current: list[tuple[frozenset, frozenset]] = [(frozenset(labs[:2]), frozenset())]
    for k in labs[2:]:
        nxt = []
        for present, clades in current:
            edges = [frozenset([i]) for i in sorted(present)] + sorted(clades, key=clade_key) + [present]
            for d in edges:
                new = {c | {k} if d < c else c for c in clades}
                new.add(d | {k} if d != present else present)
                nxt.append((present | {k}, frozenset(new)))
        current = nxt
    return [LabeledTree(p, c) for p, c in current]


def enumerate_trees(n: int, k: int) -> list[LabeledTree]:
    """Trees on ``0..n`` with exactly ``k`` internal edges, sorted by encoding."""
    if n < 1:
        raise TreeError("n must be positive")
    top = max(n - 2, 0)
    if not 0 <= k <= top:
        raise TreeError(f"k={k} outside [0, {top}] for n={n}")
    if k == 0:
        return [LabeledTree.star(n)]
    binaries = binary_trees(n)
    if k == n - 2:
        found = binaries
    else:
        seen = set()
        for t in binaries:
            for sub in itertools.combinations(sorted(t.clades, key=clade_key), k):
                seen.add(frozenset(sub))
        found = [LabeledTree(frozenset(range(1, n + 1)), c) for c in seen]
    return sorted(found, key=canonicalize)


def double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


# -- local operations --------------------------------------------------------


def bipartitions_of(t: LabeledTree) -> list[Bipartition]:
    """One bipartition per internal edge, in canonical edge order."""
    everything = t.labels | {0}
    return [Bipartition(everything - c, c) for c in sorted(t.clades, key=clade_key)]


def split_at_root(t: LabeledTree) -> tuple[LabeledTree, LabeledTree]:
    """Ungraft a binary tree at its root node.

    The two subtrees are returned as trees in their own right (the cut edge
    becomes their root leaf).  ``Y`` holds the smaller minimal label.
    """
    if t.n < 2 or not t.is_binary():
        raise TreeError("split_at_root needs a binary tree with n >= 2")
    kids = t.children(t.root_node)
    parts = []
    for k in kids:
        if isinstance(k, int):
            parts.append(LabeledTree(frozenset([k])))
        else:
            parts.append(LabeledTree(k, frozenset(c for c in t.clades if c < k)))
    parts.sort(key=lambda s: min(s.labels))
    return parts[0], parts[1]


def graft(y: LabeledTree, z: LabeledTree) -> LabeledTree:
    """Join two trees at a new root node; inverse of :func:`split_at_root`."""
    if y.labels & z.labels:
        raise TreeError("grafted trees must have disjoint labels")
    clades = set(y.clades) | set(z.clades)
    for part in (y, z):
        if part.n >= 2:
            clades.add(part.labels)
    return LabeledTree(y.labels | z.labels, frozenset(clades))


def contract_edge(t: LabeledTree, e: Bipartition | Iterable[int]) -> LabeledTree:
    clade = e.side_other if isinstance(e, Bipartition) else frozenset(e)
    if clade not in t.clades:
        raise TreeError(f"{sorted(clade)} is not an internal edge of {t}")
    return LabeledTree(t.labels, t.clades - {clade})


def _move_clade(clade: frozenset, everything: frozenset, sigma: LabelPermutation) -> frozenset:
    img = frozenset(sigma(i) for i in clade)
    if 0 in img:
        img = frozenset(sigma(i) for i in everything - clade)
    return img


def relabel(t: LabeledTree, sigma: LabelPermutation) -> LabeledTree:
    """Replace every leaf label ``i`` (including the root 0) by ``sigma(i)``."""
    everything = t.labels | {0}
    if len(sigma) <= max(everything):
        raise TreeError("permutation too small for the tree's labels")
    image = frozenset(sigma(i) for i in everything)
    if image != everything:
        raise TreeError("permutation does not preserve the label set")
    return LabeledTree(t.labels, frozenset(_move_clade(c, everything, sigma) for c in t.clades))


def caterpillar(sigma: LabelPermutation | Sequence[int]) -> LabeledTree:
    """Binary chain tree with leaves ``0, σ(1), ..., σ(n-1), n`` along the spine.

    ``sigma`` is a permutation of ``{0..n-1}`` fixing 0, or the sequence
    ``(σ(1), ..., σ(n-1))`` itself.
    """
    if isinstance(sigma, LabelPermutation):
        if sigma(0) != 0:
            raise TreeError("caterpillar permutation must fix 0")
        seq = list(sigma.images[1:])
    else:
        seq = list(sigma)
    n = len(seq) + 1
    if sorted(seq) != list(range(1, n)):
        raise TreeError("caterpillar needs a permutation of 1..n-1")
    if n < 3:
        raise TreeError("caterpillar needs n >= 3")
    spine = seq + [n]
    clades = [frozenset(spine[j:]) for j in range(1, n - 1)]
    return LabeledTree(frozenset(range(1, n + 1)), frozenset(clades))


def rooted_shape(t: LabeledTree) -> tuple:
    """Unlabelled rooted shape: nested sorted tuples, leaves are ``()``."""
    def shape(node) -> tuple:
        if isinstance(node, int):
            return ()
        return tuple(sorted(shape(k) for k in t.children(node)))

    return shape(t.root_node)
