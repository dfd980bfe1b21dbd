"""Multilinear parts of the free Lie ring and the free Lie superring.

Elements are integer combinations of left-regulated brackets
``λ_w = [x_{w0},[x_{w1},[ ... [x_{w(k-2)}, x_{w(k-1)}] ... ]]]`` where the
innermost generator ``w[-1]`` is the largest label.  Words ``w`` are the
basis keys.  In the super flavour every generator is odd, so a bracket
monomial on k generators has parity k.

Bracket monomials are nested pairs: an ``int`` is a generator, ``(u, v)``
is ``[u, v]``.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from treespace.perm import LabelPermutation, permutation_sign

ORDINARY = "ordinary"
SUPER = "super"
FLAVORS = (ORDINARY, SUPER)

Monomial = Union[int, tuple]
Word = tuple


class LieError(ValueError):
    pass


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise LieError(f"unknown flavor {flavor!r}")


def monomial_labels(m: Monomial) -> list[int]:
    """Generators in left-to-right order."""
    if isinstance(m, int):
        if m < 1:
            raise LieError(f"generator labels are positive, got {m}")
        return [m]
    if not (isinstance(m, tuple) and len(m) == 2):
        raise LieError(f"not a bracket monomial: {m!r}")
    return monomial_labels(m[0]) + monomial_labels(m[1])


def check_multilinear(m: Monomial) -> list[int]:
    labs = monomial_labels(m)
    if len(set(labs)) != len(labs):
        raise LieError(f"monomial is not multilinear: {format_monomial(m)}")
    return labs


class SuperLieElement:
    """Integer combination of left-regulated basis brackets over a fixed label set."""

    __slots__ = ("flavor", "labels", "_coeffs")

    def __init__(self, flavor: str, labels: Iterable[int], coeffs: Mapping[Word, int] | None = None):
        _check_flavor(flavor)
        self.flavor = flavor
        self.labels = frozenset(labels)
        clean = {}
        top = max(self.labels) if self.labels else None
        for w, c in (coeffs or {}).items():
            if c:
                if frozenset(w) != self.labels or len(w) != len(self.labels) or w[-1] != top:
                    raise LieError(f"{w} is not a basis word over {sorted(self.labels)}")
                clean[tuple(w)] = int(c)
        self._coeffs = clean

    @classmethod
    def basis_element(cls, flavor: str, word: Sequence[int]) -> SuperLieElement:
        return cls(flavor, word, {tuple(word): 1})

    @classmethod
    def zero(cls, flavor: str, labels: Iterable[int]) -> SuperLieElement:
        return cls(flavor, labels, {})

    @property
    def coeffs(self) -> dict[Word, int]:
        return dict(self._coeffs)

    @property
    def n(self) -> int:
        return len(self.labels)

    def items(self):
        return sorted(self._coeffs.items())

    def coefficient(self, word: Sequence[int]) -> int:
        return self._coeffs.get(tuple(word), 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _compatible(self, other: SuperLieElement) -> None:
        if self.flavor != other.flavor:
            raise LieError("mixing ordinary and super elements")
        if self.labels != other.labels and self._coeffs and other._coeffs:
            raise LieError("elements over different label sets")

    def __add__(self, other: SuperLieElement) -> SuperLieElement:
        self._compatible(other)
        out = dict(self._coeffs)
        for w, c in other._coeffs.items():
            out[w] = out.get(w, 0) + c
        return SuperLieElement(self.flavor, self.labels or other.labels, out)

    def __neg__(self) -> SuperLieElement:
        return SuperLieElement(self.flavor, self.labels, {w: -c for w, c in self._coeffs.items()})

    def __sub__(self, other: SuperLieElement) -> SuperLieElement:
        return self + (-other)

    def __mul__(self, k: int) -> SuperLieElement:
        return SuperLieElement(self.flavor, self.labels, {w: k * c for w, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperLieElement):
            return NotImplemented
        if self.flavor != other.flavor:
            return False
        if not self._coeffs and not other._coeffs:
            return True
        return self.labels == other.labels and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.flavor, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"SuperLieElement({self.flavor}, {format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)


def basis_words(labels: Iterable[int]) -> list[Word]:
    """Basis keys for a label set: permutations of all but the largest label."""
    labs = sorted(labels)
    if not labs:
        return []
    return [p + (labs[-1],) for p in itertools.permutations(labs[:-1])]


def basis_monomial(word: Sequence[int]) -> Monomial:
    m: Monomial = word[-1]
    for x in reversed(word[:-1]):
        m = (x, m)
    return m


# -- bracket and normal form -------------------------------------------------


def _swap_sign(flavor: str, da: int, db: int) -> int:
    if flavor == ORDINARY:
        return -1
    return -1 if (da * db + 1) % 2 else 1


@lru_cache(maxsize=None)
def _bracket_words(a: Word, b: Word, flavor: str) -> tuple[tuple[Word, int], ...]:
    """``[λ_a, λ_b]`` expanded in the basis; ``a`` and ``b`` have disjoint labels."""
    if a[-1] > b[-1]:
        # the anchor lives in the left factor: swap with the flavour sign
        s = _swap_sign(flavor, len(a), len(b))
        return tuple((w, s * c) for w, c in _bracket_words(b, a, flavor))
    if len(a) == 1:
        return ((a + b, 1),)
    x, rest = a[:1], a[1:]
    # [[x, R], Y] = [x, [R, Y]] - (-1)^{|x||R|} [R, [x, Y]]
    s = 1 if flavor == ORDINARY or len(rest) % 2 == 0 else -1
    acc: dict[Word, int] = {}
    for w, c in _bracket_words(rest, b, flavor):
        key = x + w
        acc[key] = acc.get(key, 0) + c
    for w, c in _bracket_words(rest, x + b, flavor):
        acc[w] = acc.get(w, 0) - s * c
    return tuple((w, c) for w, c in acc.items() if c)


def bracket(u: SuperLieElement, v: SuperLieElement) -> SuperLieElement:
    """The (super)bracket of two elements on disjoint label sets."""
    if u.flavor != v.flavor:
        raise LieError("mixing ordinary and super elements")
    if u.labels & v.labels:
        raise LieError("bracket of elements sharing generators is not multilinear")
    acc: dict[Word, int] = {}
    for a, ca in u._coeffs.items():
        for b, cb in v._coeffs.items():
            for w, c in _bracket_words(a, b, u.flavor):
                acc[w] = acc.get(w, 0) + ca * cb * c
    return SuperLieElement(u.flavor, u.labels | v.labels, acc)


def generator(flavor: str, i: int) -> SuperLieElement:
    return SuperLieElement.basis_element(flavor, (i,))


def normalize(m: Monomial | Iterable[tuple[int, Monomial]], flavor: str = SUPER) -> SuperLieElement:
    """Expand a multilinear bracket monomial (or ``[(coeff, monomial), ...]``) in the basis."""
    _check_flavor(flavor)
    if isinstance(m, (int, tuple)):
        check_multilinear(m)
        return _normalize(m, flavor)
    total = None
    for c, mono in m:
        check_multilinear(mono)
        term = c * _normalize(mono, flavor)
        total = term if total is None else total + term
    if total is None:
        raise LieError("empty combination")
    return total


def _normalize(m: Monomial, flavor: str) -> SuperLieElement:
    if isinstance(m, int):
        return generator(flavor, m)
    return bracket(_normalize(m[0], flavor), _normalize(m[1], flavor))


# -- associative oracle ------------------------------------------------------


def assoc_expand(m: Monomial, flavor: str = SUPER) -> dict[Word, int]:
    """Image in the free associative (super)ring; words of generators -> coefficient."""
    _check_flavor(flavor)
    check_multilinear(m)
    return _assoc(m, flavor)


def _assoc(m: Monomial, flavor: str) -> dict[Word, int]:
    if isinstance(m, int):
        return {(m,): 1}
    left, right = _assoc(m[0], flavor), _assoc(m[1], flavor)
    da = len(next(iter(left)))
    db = len(next(iter(right)))
    s = 1 if flavor == ORDINARY or (da * db) % 2 == 0 else -1
    out: dict[Word, int] = {}
    for u, cu in left.items():
        for v, cv in right.items():
            out[u + v] = out.get(u + v, 0) + cu * cv
            out[v + u] = out.get(v + u, 0) - s * cu * cv
    return {w: c for w, c in out.items() if c}


def assoc_expand_element(e: SuperLieElement) -> dict[Word, int]:
    out: dict[Word, int] = {}
    for w, c in e._coeffs.items():
        for u, cu in assoc_expand(basis_monomial(w), e.flavor).items():
            out[u] = out.get(u, 0) + c * cu
    return {w: c for w, c in out.items() if c}


# -- symmetric group action and the sign-twisted isomorphism ---------------


def substitute(m: Monomial, mapping: Mapping[int, int]) -> Monomial:
    if isinstance(m, int):
        return mapping.get(m, m)
    return (substitute(m[0], mapping), substitute(m[1], mapping))


def permute_generators(e: SuperLieElement, sigma: LabelPermutation, twist: bool = False) -> SuperLieElement:
    """Substitute ``x_i -> x_σ(i)`` and renormalize; ``twist`` multiplies by ε(σ)."""
    if e.labels and len(sigma) <= max(e.labels):
        raise LieError("permutation too small for the element's labels")
    if any(sigma(i) not in e.labels for i in e.labels):
        raise LieError("permutation does not preserve the label set")
    out = SuperLieElement.zero(e.flavor, e.labels)
    for w, c in e._coeffs.items():
        out = out + c * _basis_image(tuple(sigma(i) for i in w), e.flavor)
    if twist and sigma.sign() < 0:
        out = -out
    return out


@lru_cache(maxsize=None)
def _basis_image(image: Word, flavor: str) -> SuperLieElement:
    return _normalize(basis_monomial(image), flavor)


def theta(g: Monomial | SuperLieElement) -> SuperLieElement:
    """Sign-corrected reinterpretation of an ordinary Lie element as a super one.

    A monomial whose generators read ``x_γ(1), ..., x_γ(n)`` from left to
    right goes to ``ε(γ)`` times the same bracketing read as superbrackets.
    """
    if isinstance(g, SuperLieElement):
        if g.flavor != ORDINARY:
            raise LieError("theta takes an ordinary Lie element")
        out = SuperLieElement.zero(SUPER, g.labels)
        for w, c in g._coeffs.items():
            out = out + (c * permutation_sign(w)) * SuperLieElement.basis_element(SUPER, w)
        return out
    labs = check_multilinear(g)
    return permutation_sign(labs) * _normalize(g, SUPER)


def lie_matrix(labels: Sequence[int], sigma: LabelPermutation, flavor: str, twist: bool = False) -> list[list[int]]:
    """Matrix of a generator permutation in the λ basis (columns are images)."""
    words = basis_words(labels)
    idx = {w: i for i, w in enumerate(words)}
    mat = [[0] * len(words) for _ in words]
    for j, w in enumerate(words):
        img = permute_generators(SuperLieElement.basis_element(flavor, w), sigma, twist)
        for u, c in img._coeffs.items():
            mat[idx[u]][j] = c
    return mat


def lie_trace(n: int, sigma: LabelPermutation, flavor: str) -> int:
    words = basis_words(range(1, n + 1))
    total = 0
    for w in words:
        img = permute_generators(SuperLieElement.basis_element(flavor, w), sigma)
        total += img.coefficient(w)
    return total


def lie_character(n: int, flavor: str = ORDINARY):
    """Character of ``Σ_n`` on the multilinear part (Lie_n or its super version)."""
    from treespace.characters import character_of

    return character_of(n, lambda g: lie_trace(n, g, flavor), range(1, n + 1), n + 1)


# -- random and exhaustive monomials -------------------------------------------


def bracketings(labels: Sequence[int]) -> Iterator[Monomial]:
    """Every full bracketing of the labels in the given order."""
    if len(labels) == 1:
        yield labels[0]
        return
    for i in range(1, len(labels)):
        for left in bracketings(labels[:i]):
            for right in bracketings(labels[i:]):
                yield (left, right)


def all_monomials(n: int) -> Iterator[Monomial]:
    for order in itertools.permutations(range(1, n + 1)):
        yield from bracketings(order)


def random_monomial(labels: Sequence[int], rng) -> Monomial:
    """Random full bracketing of a random ordering of ``labels``."""
    items: list[Monomial] = list(labels)
    rng.shuffle(items)
    while len(items) > 1:
        i = rng.randrange(len(items) - 1)
        items[i:i + 2] = [(items[i], items[i + 1])]
    return items[0]


# -- text form ---------------------------------------------------------------


def format_monomial(m: Monomial, alphabet: Sequence[str] | None = None) -> str:
    if isinstance(m, int):
        return alphabet[m - 1] if alphabet else str(m)
    return f"[{format_monomial(m[0], alphabet)},{format_monomial(m[1], alphabet)}]"


def format_element(e: SuperLieElement, alphabet: Sequence[str] | None = None) -> str:
    if e.is_zero():
        return "0"
    parts = []
    for w, c in e.items():
        body = format_monomial(basis_monomial(w), alphabet)
        mag = abs(c)
        term = body if mag == 1 else f"{mag}*{body}"
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)\s*\*?\s*(?=\[)|([A-Za-z_][A-Za-z_0-9]*|\d+)|([\[\],+\-]))")


def parse_element(text: str, flavor: str = SUPER, alphabet: Sequence[str] | None = None):
    """Parse a signed sum of bracket words.

    Atoms are integers (taken as labels) or names; names are mapped to
    ``1..n`` in sorted order unless ``alphabet`` fixes the order.  Returns
    ``(element, alphabet)``; ``alphabet`` is ``None`` for integer atoms.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise LieError(f"cannot parse {text[pos:]!r}")
        pos = mt.end()
        if mt.group(1):
            tokens.append(("coef", int(mt.group(1))))
        elif mt.group(2):
            tokens.append(("atom", mt.group(2)))
        else:
            tokens.append(("sym", mt.group(3)))
    terms: list[tuple[int, object]] = []
    i = 0

    def parse_mono():
        nonlocal i
        kind, val = tokens[i]
        if kind == "atom":
            i += 1
            return val
        if (kind, val) != ("sym", "["):
            raise LieError(f"unexpected token {val!r}")
        i += 1
        left = parse_mono()
        if tokens[i] != ("sym", ","):
            raise LieError("expected ','")
        i += 1
        right = parse_mono()
        if tokens[i] != ("sym", "]"):
            raise LieError("expected ']'")
        i += 1
        return (left, right)

    try:
        while i < len(tokens):
            sign = 1
            while i < len(tokens) and tokens[i][0] == "sym" and tokens[i][1] in "+-":
                if tokens[i][1] == "-":
                    sign = -sign
                i += 1
            coef = 1
            if i < len(tokens) and tokens[i][0] == "coef":
                coef = tokens[i][1]
                i += 1
            terms.append((sign * coef, parse_mono()))
    except IndexError:
        raise LieError(f"truncated expression {text!r}") from None
    if not terms:
        raise LieError("empty expression")

    atoms = sorted({a for _, m in terms for a in _atoms(m)})
    if alphabet is None and all(a.isdigit() for a in atoms):
        mapping = {a: int(a) for a in atoms}
        alpha = None
    else:
        alpha = list(alphabet) if alphabet is not None else atoms
        missing = [a for a in atoms if a not in alpha]
        if missing:
            raise LieError(f"atoms {missing} not in alphabet")
        mapping = {a: alpha.index(a) + 1 for a in alpha}
    converted = [(c, _relabel_atoms(m, mapping)) for c, m in terms]
    return normalize(converted, flavor), alpha


def _atoms(m) -> list[str]:
    if isinstance(m, str):
        return [m]
    return _atoms(m[0]) + _atoms(m[1])


def _relabel_atoms(m, mapping) -> Monomial:
    if isinstance(m, str):
        return mapping[m]
    return (_relabel_atoms(m[0], mapping), _relabel_atoms(m[1], mapping))


def parse_monomial(text: str, alphabet: Sequence[str] | None = None) -> Monomial:
    """Parse a single bracket word such as ``[a,[b,c]]`` into nested pairs."""
    e_terms = text.strip()
    if e_terms.startswith(("-", "+")):
        raise LieError("parse_monomial takes an unsigned bracket word")
    _, alpha = parse_element(text, ORDINARY, alphabet)
    # re-parse structurally without normalizing
    toks = re.findall(r"[A-Za-z_][A-Za-z_0-9]*|\d+|[\[\],]", text)
    pos = 0

    def mono():
        nonlocal pos
        t = toks[pos]
        pos += 1
        if t == "[":
            left = mono()
            pos += 1  # ','
            right = mono()
            pos += 1  # ']'
            return (left, right)
        return alpha.index(t) + 1 if alpha is not None else int(t)

    return mono()
