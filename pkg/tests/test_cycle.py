import json
import os
import random
from collections import Counter
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import GOLDEN, fundamental_cycle, tree_complex
from treespace.complexes import simplex_tree
from treespace.cycle import (
    CycleError,
    ModuleChain,
    boundary_of_module_chain,
    caterpillar_cochain,
    coboundary,
    cycle_term,
    export_cycle,
    f5_census,
    shape_class,
    theta_eval,
    verify_invariance,
)
from treespace.perm import LabelPermutation
from treespace.superlie import SUPER, assoc_expand_element, basis_monomial, normalize
from treespace.trees import LabeledTree, binary_trees, rooted_shape


def sup(m):
    return normalize(m, SUPER)


def test_two_leaves():
    term = cycle_term(LabeledTree.star(2))
    assert term.edge_word == ()
    assert term.coeff == -sup((1, 2))


def test_chain_shape_term():
    t = LabeledTree.from_clades(5, [{2, 3, 4, 5}, {3, 4, 5}, {4, 5}])
    term = cycle_term(t)
    assert term.edge_word == ((2, 3, 4, 5), (3, 4, 5), (4, 5))
    assert term.coeff == sup((1, (2, (3, (4, 5)))))


def test_two_cherry_term():
    t = LabeledTree.from_clades(5, [{1, 2}, {3, 4, 5}, {4, 5}])
    term = cycle_term(t)
    assert term.edge_word == ((1, 2), (3, 4, 5), (4, 5))
    assert term.coeff == -sup(((1, 2), (3, (4, 5))))


def test_balanced_term():
    t = LabeledTree.from_clades(5, [{2, 3, 4, 5}, {2, 3}, {4, 5}])
    term = cycle_term(t)
    assert term.edge_word == ((2, 3, 4, 5), (2, 3), (4, 5))
    assert term.coeff == -sup((1, ((2, 3), (4, 5))))


def test_non_binary_rejected():
    with pytest.raises(ValueError):
        cycle_term(LabeledTree.star(3))
    with pytest.raises(CycleError):
        fundamental_cycle(2)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_term_does_not_depend_on_split_order(n):
    for t in binary_trees(n):
        a, b = cycle_term(t), cycle_term(t, smaller_first=False)
        assert a.oriented_coeff() == b.oriented_coeff()


@pytest.mark.parametrize("n,count", [(3, 3), (4, 15), (5, 105)])
def test_term_counts(n, count):
    assert len(fundamental_cycle(n)) == count


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_boundary_vanishes(n):
    assert boundary_of_module_chain(fundamental_cycle(n)).is_zero()


def test_single_terms_are_not_cycles():
    f = fundamental_cycle(4)
    for j, e in f.coeffs.items():
        assert not boundary_of_module_chain(ModuleChain(f.complex, f.degree, {j: e})).is_zero()


def test_cancellation_face_by_face():
    # each codimension-one face receives three nonzero contributions summing to zero
    f = fundamental_cycle(5)
    d = f.complex.boundary[f.degree]
    for i in range(d.rows):
        row = d.data[i]
        parts = [s * f.coeffs[j] for j, s in row.items()]
        assert len(parts) == 3 and all(not p.is_zero() for p in parts)
        assert (parts[0] + parts[1] + parts[2]).is_zero()


def test_n5_census():
    r = f5_census(fundamental_cycle(5))
    assert r["total"] == 105
    assert r["counts"] == {"phi": 60, "psi": 30, "omega": 15}
    assert r["mismatched"] == []


def automorphisms(shape):
    if shape == ():
        return 1
    out = 1
    for s in shape:
        out *= automorphisms(s)
    return out * (2 if len(shape) == 2 and shape[0] == shape[1] else 1)


def test_shape_counts_from_symmetry():
    f = fundamental_cycle(5)
    by_shape = Counter()
    for j in f.coeffs:
        by_shape[rooted_shape(simplex_tree(f.complex, f.degree, j))] += 1
    for shape, count in by_shape.items():
        assert count == factorial(5) // automorphisms(shape)
    # each coefficient is one bracket monomial: 2^4 signed words of weight 1
    for e in f.coeffs.values():
        words = assoc_expand_element(e)
        assert len(words) == 16 and set(map(abs, words.values())) == {1}


def test_shape_class_rejects_other_sizes():
    with pytest.raises(CycleError):
        shape_class(binary_trees(4)[0])


@pytest.mark.parametrize("n", [4, 5])
def test_adjacent_transpositions_fix_the_cycle(n):
    f = fundamental_cycle(n)
    assert verify_invariance(f, LabelPermutation.identity(n + 1))
    for i in range(1, n):
        assert verify_invariance(f, LabelPermutation.transposition(n + 1, i, i + 1))


@settings(max_examples=5)
@given(st.permutations(range(1, 7)))
def test_random_permutation_fixes_f6(images):
    assert verify_invariance(fundamental_cycle(6), LabelPermutation((0, *images)))


def test_moving_the_root_is_rejected():
    with pytest.raises(CycleError):
        verify_invariance(fundamental_cycle(4), LabelPermutation.transposition(5, 0, 1))


@pytest.mark.parametrize("n", [4, 5])
def test_caterpillars_pair_to_signed_basis(n):
    f = fundamental_cycle(n)
    c = f.complex
    hits = set()
    for seq in permutations(range(1, n)):
        v = theta_eval(caterpillar_cochain(c, seq), f)
        lam = sup(basis_monomial(seq + (n,)))
        assert v in (lam, -lam)
        hits.add(seq)
    assert len(hits) == factorial(n - 1)


def test_zero_cochain():
    assert theta_eval({}, fundamental_cycle(4)).is_zero()
    assert theta_eval([0] * 15, fundamental_cycle(4)).is_zero()
    with pytest.raises(CycleError):
        theta_eval({15: 1}, fundamental_cycle(4))


@settings(max_examples=25)
@given(seed=st.integers(0, 10**6))
def test_coboundaries_pair_to_zero(seed):
    rng = random.Random(seed)
    f = fundamental_cycle(5)
    c = f.complex
    g = {rng.randrange(c.f_vector[1]): rng.randint(-3, 3) for _ in range(4)}
    seq = tuple(rng.sample(range(1, 5), 4))
    base = caterpillar_cochain(c, seq)
    shifted = dict(base)
    for j, x in coboundary(c, 1, g).items():
        shifted[j] = shifted.get(j, 0) + x
    assert theta_eval(shifted, f) == theta_eval(base, f)
    assert theta_eval(coboundary(c, 1, g), f).is_zero()


def test_export_matches_golden():
    rows = export_cycle(fundamental_cycle(5))
    with open(os.path.join(GOLDEN, "f5_cycle.json"), encoding="utf-8") as fh:
        golden = json.load(fh)
    assert rows == golden["terms"]
    assert len(rows) == 105
    assert {r["orientation_sign"] for r in rows} <= {1, -1}
    assert Counter(r["shape"] for r in rows) == {"phi": 60, "psi": 30, "omega": 15}
    assert all(len(r["edge_word"]) == 3 for r in rows)


def test_complex_reuse():
    assert fundamental_cycle(4).complex is tree_complex(4)
