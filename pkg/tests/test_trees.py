import random
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from oracles import compatible_families
from treespace.perm import LabelPermutation, all_permutations
from treespace.trees import (
    Bipartition,
    LabeledTree,
    TreeError,
    binary_trees,
    bipartitions_of,
    canonicalize,
    caterpillar,
    contract_edge,
    double_factorial,
    enumerate_trees,
    graft,
    parse_tree,
    relabel,
    split_at_root,
)


@st.composite
def binary_tree(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    trees = binary_trees(n)
    return trees[draw(st.integers(0, len(trees) - 1))]


@st.composite
def any_tree(draw, max_n=7):
    t = draw(binary_tree(max_n))
    keep = draw(st.lists(st.booleans(), min_size=t.num_edges, max_size=t.num_edges))
    clades = sorted(t.clades, key=sorted)
    return LabeledTree(t.labels, frozenset(c for c, k in zip(clades, keep) if k))


def test_star_and_single_edge_encodings():
    assert canonicalize(LabeledTree.star(3)) == "(0,1,2,3)"
    v01 = LabeledTree.from_clades(3, [{2, 3}])
    assert canonicalize(v01) == "(0,1,(2,3))"
    # the same edge written from the other side
    assert LabeledTree.from_bipartitions(3, [Bipartition.from_sides({0, 1}, range(4))]) == v01


def test_encoding_ignores_node_names():
    a = LabeledTree.from_graph(3, {0: "u", 1: "u", 2: "v", 3: "v"}, [("u", "v")])
    b = LabeledTree.from_graph(3, {0: 7, 1: 7, 2: 4, 3: 4}, [(4, 7)])
    assert a.encoding == b.encoding == "(0,1,(2,3))"


@given(any_tree())
def test_graph_round_trip(t):
    rebuilt = LabeledTree.from_graph(t.n, t.leaf_attach, t.internal_edges)
    assert rebuilt == t
    assert parse_tree(t.encoding) == t


@pytest.mark.parametrize("bad", [
    lambda: LabeledTree.from_graph(2, {0: "a", 1: "a", 2: "b"}, [("a", "b")]),  # degree 2 at b
    lambda: LabeledTree.from_graph(3, {0: "a", 1: "a", 2: "b", 3: "b"}, []),  # disconnected
    lambda: LabeledTree.from_clades(4, [{1, 2}, {2, 3}]),  # crossing clades
    lambda: parse_tree("(1,0,2)x"),
])
def test_invalid_trees_rejected(bad):
    with pytest.raises(TreeError):
        bad()


@pytest.mark.parametrize("n", range(2, 8))
def test_binary_count_is_double_factorial(n):
    assert len(enumerate_trees(n, n - 2)) == double_factorial(2 * n - 3)


def test_binary_count_n5():
    assert len(enumerate_trees(5, 3)) == 105


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_matches_brute_force(n):
    for k in range(n - 1):
        found = {t.clades for t in enumerate_trees(n, k)}
        expected = set(compatible_families(n, k)) if k else {frozenset()}
        assert found == expected


def test_small_enumerations():
    assert len(enumerate_trees(3, 1)) == 3
    assert len(enumerate_trees(2, 0)) == 1
    with pytest.raises(TreeError):
        enumerate_trees(4, 3)


def test_enumeration_is_sorted_and_unique():
    trees = enumerate_trees(5, 2)
    codes = [t.encoding for t in trees]
    assert codes == sorted(set(codes))


def test_bipartitions():
    assert [str(b) for b in bipartitions_of(LabeledTree.from_clades(3, [{2, 3}]))] == ["0,1|2,3"]
    cat = caterpillar((1, 2, 3))
    assert [str(b) for b in bipartitions_of(cat)] == ["0,1|2,3,4", "0,1,2|3,4"]
    assert bipartitions_of(LabeledTree.star(4)) == []


@given(any_tree())
def test_bipartitions_pairwise_compatible(t):
    parts = bipartitions_of(t)
    for a in parts:
        for b in parts:
            x, y = a.side_other, b.side_other
            assert x <= y or y <= x or not (x & y)


def test_split_examples():
    y, z = split_at_root(LabeledTree.star(2))
    assert (y.labels, z.labels) == ({1}, {2})
    y, z = split_at_root(caterpillar((1, 2, 3)))
    assert y.labels == {1}
    assert z.encoding == "(0,2,(3,4))"
    with pytest.raises(TreeError):
        split_at_root(LabeledTree.star(3))


@given(binary_tree())
def test_split_then_graft(t):
    y, z = split_at_root(t)
    assert y.labels | z.labels == t.labels
    assert min(y.labels) < min(z.labels)
    assert graft(y, z) == t


def test_contractions():
    cat = caterpillar((1, 2, 3))
    first = bipartitions_of(cat)[0]
    c = contract_edge(cat, first)
    assert c.num_edges == 1 and max(c.degree(node) for node in c.nodes) == 4
    for e in bipartitions_of(cat):
        rest = contract_edge(cat, e)
        assert rest.num_edges == 1
    with pytest.raises(TreeError):
        contract_edge(cat, {1, 4})


@given(any_tree())
def test_contract_everything_gives_star(t):
    for e in list(bipartitions_of(t)):
        t = contract_edge(t, e)
    assert t == LabeledTree.star(t.n)


def test_relabel_examples():
    v01 = LabeledTree.from_clades(3, [{2, 3}])
    assert relabel(v01, LabelPermutation.identity(4)) == v01
    assert relabel(v01, LabelPermutation.transposition(4, 1, 2)) == LabeledTree.from_clades(3, [{1, 3}])
    orbit = {relabel(v01, g).encoding for g in all_permutations(range(4), 4)}
    assert len(orbit) == 3


@given(any_tree(6), st.data())
def test_relabel_is_a_left_action(t, data):
    size = t.n + 1
    s = LabelPermutation(tuple(data.draw(st.permutations(range(size)))))
    u = LabelPermutation(tuple(data.draw(st.permutations(range(size)))))
    assert relabel(relabel(t, s), u) == relabel(t, u.compose(s))


@given(any_tree(6), st.data())
def test_contract_commutes_with_relabel(t, data):
    if not t.clades:
        return
    size = t.n + 1
    s = LabelPermutation(tuple(data.draw(st.permutations(range(size)))))
    e = bipartitions_of(t)[data.draw(st.integers(0, t.num_edges - 1))]
    moved = Bipartition.from_sides({s(i) for i in e.side_zero}, range(size))
    assert contract_edge(relabel(t, s), moved) == relabel(contract_edge(t, e), s)


def test_caterpillars_are_distinct():
    for n in (4, 5):
        seqs = list(permutations(range(1, n)))
        codes = {caterpillar(s).encoding for s in seqs}
        assert len(codes) == len(seqs)
    assert [str(b) for b in bipartitions_of(caterpillar((1, 2)))] == ["0,1|2,3"]


def test_caterpillar_from_permutation():
    g = LabelPermutation((0, 2, 1))
    assert caterpillar(g) == caterpillar((2, 1))
    with pytest.raises(TreeError):
        caterpillar(LabelPermutation((1, 0, 2)))


def test_random_insertion_recurrence():
    # each binary tree on n labels has 2n-1 edges to receive leaf n+1
    rng = random.Random(3)
    for n in range(2, 6):
        t = rng.choice(binary_trees(n))
        assert 2 * t.n - 1 == t.n + 1 + t.num_edges
