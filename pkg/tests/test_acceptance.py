"""Acceptance criteria 1-9, each at its stated range, tolerance and runtime bound.

Every criterion records one PASS/FAIL line; the lines are echoed in the
terminal summary at the end of the run.  Arithmetic is exact throughout,
so the tolerance is equality.
"""

import random
import time
from collections import Counter
from itertools import permutations
from math import factorial, prod

import pytest

from conftest import ACCEPTANCE_LINES, fundamental_cycle, nerve, tree_complex
from oracles import associative_expansion
from treespace.characters import regular, restrict
from treespace.cycle import boundary_of_module_chain, caterpillar_cochain, f5_census, shape_class, theta_eval, verify_invariance
from treespace.complexes import simplex_tree
from treespace.homology import homology, homology_character
from treespace.perm import LabelPermutation, all_permutations
from treespace.superlie import (
    ORDINARY,
    SUPER,
    SuperLieElement,
    all_monomials,
    assoc_expand_element,
    basis_monomial,
    basis_words,
    normalize,
    permute_generators,
    random_monomial,
    theta,
)
from treespace.trees import binary_trees
from treespace.whitehouse import build_complement_subcomplex, exactness_check, whitehouse_character_check


def run_criterion(number, title, bound, check):
    """Time ``check`` (returns a list of failure strings) and record the verdict."""
    start = time.perf_counter()
    failures = check()
    secs = time.perf_counter() - start
    ok = not failures and (bound is None or secs < bound)
    limit = f" < {bound:g} s" if bound is not None else ""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({secs:.1f} s{limit})")
    print(ACCEPTANCE_LINES[-1])
    assert not failures, failures
    assert bound is None or secs < bound, f"took {secs:.1f} s"


def odd_double_factorial(m):
    return prod(range(m, 0, -2))


def test_criterion_1_census():
    def check():
        bad = []
        for n in range(3, 8):
            expected = odd_double_factorial(2 * n - 3)
            found = tree_complex(n).f_vector[-1]
            if found != expected or len(binary_trees(range(1, n + 1))) != expected:
                bad.append((n, found, expected))
        if tree_complex(5).f_vector[-1] != 105:
            bad.append("n=5 is not 105")
        return bad
    run_criterion(1, "top simplex census (2n-3)!! for n=3..7", 10, check)


def test_criterion_2_incidence():
    def check():
        bad = []
        for n in (5, 6, 7):
            c = tree_complex(n)
            top = c.dim
            cofaces = Counter()
            for s in c.simplices[top]:
                for v in s:
                    cofaces[frozenset(s) - {v}] += 1
            if len(cofaces) != c.f_vector[top - 1] or set(cofaces.values()) != {3}:
                bad.append((n, Counter(cofaces.values())))
        return bad
    run_criterion(2, "every codimension-one simplex has exactly 3 cofaces, n=5,6,7", 30, check)


def test_criterion_3_homology():
    def sphere_wedge(c, n):
        h = homology(c)
        rank = factorial(n - 1)
        euler = sum((-1) ** k * f for k, f in enumerate(c.f_vector)) - 1
        problems = []
        if not h.is_torsion_free():
            problems.append("torsion")
        if h.nonzero_degrees() != [n - 3] or h.betti(n - 3) != rank:
            problems.append(h.betti_numbers)
        if euler != (-1) ** (n - 3) * rank:
            problems.append(f"reduced Euler characteristic {euler}")
        return problems

    def check():
        bad = []
        for n in (4, 5, 6):
            bad += [("T", n, p) for p in sphere_wedge(tree_complex(n), n)]
        for n in (4, 5):
            bad += [("nerve", n, p) for p in sphere_wedge(nerve(n), n)]
        return bad
    run_criterion(3, "reduced homology is free of rank (n-1)! in degree n-3", 300, check)


def test_criterion_4_fundamental_cycle():
    def check():
        bad = []
        for n in (4, 5, 6, 7):
            f = fundamental_cycle(n)
            if len(f) != tree_complex(n).f_vector[-1]:
                bad.append((n, "some coefficient vanishes"))
            if not boundary_of_module_chain(f).is_zero():
                bad.append((n, "nonzero boundary"))
        f = fundamental_cycle(5)
        census = f5_census(f)
        counts = Counter(shape_class(simplex_tree(f.complex, f.degree, j)) for j in f.coeffs)
        if counts != {"phi": 60, "psi": 30, "omega": 15} or census["counts"] != dict(counts):
            bad.append(dict(counts))
        if census["mismatched"]:
            bad.append(("sign or word mismatch", census["mismatched"][:5]))
        return bad
    run_criterion(4, "boundary of F_n vanishes for n=4..7 and F_5 splits 60/30/15", 120, check)


def test_criterion_5_invariance():
    def check():
        bad = []
        for n in (4, 5, 6):
            f = fundamental_cycle(n)
            for i in range(1, n):
                s = LabelPermutation.from_mapping(n + 1, {i: i + 1, i + 1: i})
                if not verify_invariance(f, s):
                    bad.append((n, i))
        return bad
    run_criterion(5, "F_n is fixed by the Coxeter generators, n=4,5,6", None, check)


def test_criterion_6_duality():
    def check():
        bad = []
        for n in (4, 5, 6):
            f = fundamental_cycle(n)
            c = f.complex
            images = set()
            for seq in permutations(range(1, n)):
                v = theta_eval(caterpillar_cochain(c, seq), f)
                lam = SuperLieElement.basis_element(SUPER, seq + (n,))
                if v not in (lam, -lam):
                    bad.append((n, seq))
                images.add(seq)
            if len(images) != factorial(n - 1) or len(basis_words(range(1, n + 1))) != factorial(n - 1):
                bad.append((n, "not a bijection"))
        return bad
    run_criterion(6, "caterpillar cochains pair with F_n to ±λ_σ, n=4,5,6", None, check)


def test_criterion_7_oracle():
    def agrees(m, flavor):
        return assoc_expand_element(normalize(m, flavor)) == associative_expansion(m, flavor == SUPER)

    def check():
        bad = []
        for flavor in (ORDINARY, SUPER):
            for n in range(1, 5):
                bad += [(flavor, m) for m in all_monomials(n) if not agrees(m, flavor)]
            rng = random.Random(20240607)
            for n in (5, 6):
                for _ in range(1000):
                    m = random_monomial(range(1, n + 1), rng)
                    if not agrees(m, flavor):
                        bad.append((flavor, m))
        for n in range(1, 5):
            group = list(all_permutations(range(1, n + 1), n + 1))
            for m in all_monomials(n):
                g = normalize(m, ORDINARY)
                for s in group:
                    if theta(permute_generators(g, s)) != s.sign() * permute_generators(theta(g), s):
                        bad.append(("theta", m, s.images))
        return bad
    run_criterion(7, "normal form matches associative expansion; theta equivariance", None, check)


def test_criterion_8_regular_restriction():
    def check():
        bad = []
        for n in (4, 5):
            chi = homology_character(tree_complex(n), n - 3, range(n + 1))
            res = restrict(restrict(chi))
            reg = regular(n - 1)
            expected = {k: (factorial(n - 1) if set(k.split("+")) == {"1"} else 0) for k in reg.table()}
            if res.table() != expected or res != reg:
                bad.append((n, res.table()))
        return bad
    run_criterion(8, "top homology restricts to the regular character, n=4,5", None, check)


def test_criterion_9_whitehouse():
    def check():
        bad = []
        for n in (3, 4, 5):
            chk = whitehouse_character_check(n)
            if not chk.ok:
                bad.append((n, chk.failing_classes))
        for n in (3, 4):
            r = exactness_check(build_complement_subcomplex(n))
            want = (factorial(n), (n + 1) * factorial(n - 1), factorial(n - 1))
            if not r.exact or tuple(r.ranks) != want:
                bad.append((n, r.to_json()))
        return bad
    run_criterion(9, "Whitehouse character identity n=3,4,5 and exactness over Z n=3,4", 300, check)
