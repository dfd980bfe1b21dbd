"""Commands behind the CLI; each returns a JSON-ready report and a verdict."""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Any, Callable

from treespace import __version__
from treespace.complexes import (
    PARTITION_NERVE,
    SCHEMA,
    TREE_SPACE,
    build_partition_nerve,
    build_tree_complex,
    codim1_incidence_report,
    read_dump,
)
from treespace.config import (
    HOMOLOGY_MAX,
    INVARIANCE_MAX,
    NERVE_MAX,
    THETA_MAX,
    WHITEHOUSE_MAX,
    RunConfig,
)
from treespace.characters import equal, regular, restrict
from treespace.cycle import (
    boundary_of_module_chain,
    build_fundamental_cycle,
    caterpillar_cochain,
    coboundary,
    export_cycle,
    f5_census,
    theta_eval,
    verify_invariance,
)
from treespace.homology import homology, homology_character
from treespace.perm import LabelPermutation
from treespace.superlie import (
    ORDINARY,
    SUPER,
    assoc_expand,
    assoc_expand_element,
    basis_monomial,
    lie_character,
    normalize,
    random_monomial,
)
from treespace.trees import double_factorial
from treespace.whitehouse import (
    build_complement_subcomplex,
    exactness_check,
    hat_lie_character,
    whitehouse_character_check,
    whitehouse_report,
)

SAFE_INT = 2**53 - 1
_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass
class Report:
    payload: dict[str, Any]
    ok: bool = True


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Any = None
    seconds: float = 0.0

    def to_json(self, timings: bool) -> dict[str, Any]:
        out = {"name": self.name, "passed": self.passed}
        if self.detail is not None:
            out["detail"] = self.detail
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def header(cfg: RunConfig) -> dict[str, Any]:
    return {"schema": SCHEMA, "version": __version__, "config": cfg.as_dict()}


def jsonable(obj: Any) -> Any:
    """Recursively replace integers beyond the float-safe range by decimal strings."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def render(payload: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(jsonable(payload), indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    lines: list[str] = []
    _text(payload, lines, 0)
    return "\n".join(lines) + "\n"


def _text(obj: Any, lines: list[str], indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                _text(v, lines, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) and "name" in v and "passed" in v:
                mark = "PASS" if v["passed"] else "FAIL"
                extra = f"  {_inline(v['detail'])}" if "detail" in v else ""
                secs = f" ({v['seconds']}s)" if "seconds" in v else ""
                lines.append(f"{pad}[{mark}] {v['name']}{secs}{extra}")
            elif isinstance(v, (dict, list)):
                _text(v, lines, indent)
                lines.append(f"{pad}--")
            else:
                lines.append(f"{pad}- {_inline(v)}")


def _flat(v) -> bool:
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def _inline(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={_inline(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return str(v)


def _build(cfg: RunConfig):
    return build_tree_complex(cfg.n) if cfg.space == TREE_SPACE else build_partition_nerve(cfg.n)


# -- enumerate --------------------------------------------------------------


def cmd_enumerate(cfg: RunConfig, listing: bool = False) -> Report:
    out = header(cfg)
    c = _build(cfg)
    if c.is_empty():
        out["notice"] = f"the complex is empty for n={cfg.n}"
        out["f_vector"] = []
        out["total"] = 0
        return Report(out)
    out["f_vector"] = list(c.f_vector)
    out["counts"] = {str(k): f for k, f in enumerate(c.f_vector)}
    out["top_simplices"] = c.f_vector[-1]
    out["total"] = sum(c.f_vector)
    out["euler_characteristic"] = c.euler_characteristic()
    if listing:
        out["simplices"] = {str(k): level for k, level in enumerate(c.labels)}
    return Report(out)


# -- verify -----------------------------------------------------------------


def _timed(name: str, fn: Callable[[], tuple[bool, Any]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, passed, detail, time.perf_counter() - t0)


def _homology_check(c, n: int) -> tuple[bool, Any]:
    h = homology(c)
    k = n - 3
    ok = h.concentrated_in(k) and h.is_torsion_free() and h.betti(k) == factorial(n - 1)
    return ok, {"betti": {str(d): b for d, b in h.betti_numbers.items()}, "expected_rank": factorial(n - 1)}


def verify_checks(cfg: RunConfig) -> list[CheckResult]:
    n = cfg.n
    full = cfg.depth == "full"
    rng = random.Random(cfg.seed)
    checks: list[CheckResult] = []
    add = lambda name, fn: checks.append(_timed(name, fn))  # noqa: E731

    c = _build(cfg)
    if c.is_empty():
        add("empty complex", lambda: (True, f"nothing to verify for n={n}"))
        return checks

    add("boundary squared is zero", lambda: (not c.boundary_squared_failures(), c.boundary_squared_failures() or None))
    add("faces closed", lambda: (c.faces_closed(), None))
    if cfg.space == TREE_SPACE:
        expected = double_factorial(2 * n - 3)
        add("top simplex count", lambda: (c.f_vector[-1] == expected, {"found": c.f_vector[-1], "expected": expected}))
    if c.dim >= 1:
        def incidence():
            hist = codim1_incidence_report(c)
            return (set(hist) == {3} if cfg.space == TREE_SPACE else True), {str(k): v for k, v in hist.items()}
        add("codimension-one incidence", incidence)

    limit = (HOMOLOGY_MAX if cfg.space == TREE_SPACE else NERVE_MAX) if full else 5
    if n <= limit:
        add("reduced homology is a wedge of spheres", lambda: _homology_check(c, n))

    for m, flavor in ((min(n, 6), ORDINARY), (min(n, 6), SUPER)):
        def oracle(m=m, flavor=flavor):
            labels = list(range(1, m + 1))
            trials = 300 if full else 50
            for _ in range(trials):
                mono = random_monomial(labels, rng)
                if assoc_expand_element(normalize(mono, flavor)) != assoc_expand(mono, flavor):
                    return False, f"disagreement on {mono}"
            return True, {"trials": trials}
        add(f"normal form matches associative expansion ({flavor}, n={m})", oracle)

    if not full:
        return checks

    if cfg.space == PARTITION_NERVE:
        if n <= NERVE_MAX:
            def same_character():
                a = homology_character(c, n - 3, range(1, n + 1))
                b = homology_character(build_tree_complex(n), n - 3, range(1, n + 1))
                return equal(a, b), a.table()
            add("nerve and tree space carry the same Σ_n-character", same_character)
        return checks

    f = build_fundamental_cycle(n, c)
    add(f"∂F{str(n).translate(_SUB)} = 0", lambda: (boundary_of_module_chain(f).is_zero(), {"terms": len(f)}))
    if n == 5:
        def census():
            r = f5_census(f)
            ok = r["counts"] == {"phi": 60, "psi": 30, "omega": 15} and not r["mismatched"]
            return ok, r
        add("F5 shape census", census)
    if n <= INVARIANCE_MAX:
        def invariance():
            gens = [LabelPermutation.transposition(n + 1, i, i + 1) for i in range(1, n)]
            images = list(range(1, n + 1))
            rng.shuffle(images)
            gens.append(LabelPermutation((0, *images)))
            bad = [str(g) for g in gens if not verify_invariance(f, g)]
            return not bad, bad or None
        add("fundamental cycle is Σ_n-invariant", invariance)
    if n <= THETA_MAX:
        add("θ sends caterpillar cochains to ±λ", lambda: _theta_check(c, f, n, rng))
    if n <= HOMOLOGY_MAX and n >= 4:
        def regular_restriction():
            chi = homology_character(c, n - 3, range(n + 1))
            res = restrict(restrict(chi))  # the subgroup fixing 0 and n
            return equal(res, regular(n - 1)), res.table()
        add("restriction to Σ_{n-1} is regular", regular_restriction)
    if 3 <= n <= WHITEHOUSE_MAX:
        def character_identity():
            chk = whitehouse_character_check(n)
            return chk.ok, chk.failing_classes or None
        add("induced Lie character splits", character_identity)

        def exact():
            r = exactness_check(build_complement_subcomplex(n))
            return r.exact, r.to_json()
        add("pair sequence is exact over Z", exact)
    return checks


def _theta_check(c, f, n: int, rng: random.Random) -> tuple[bool, Any]:
    seen = set()
    signs = {1: 0, -1: 0}
    first = None
    for seq in permutations(range(1, n)):
        v = theta_eval(caterpillar_cochain(c, seq), f)
        lam = normalize(basis_monomial(seq + (n,)), SUPER)
        if v == lam:
            signs[1] += 1
        elif v == -lam:
            signs[-1] += 1
        else:
            return False, f"caterpillar {seq} gives {v}"
        seen.add(seq)
        if first is None:
            first = (seq, v)
    # adding a coboundary leaves the pairing unchanged
    k = c.dim - 1
    g = {rng.randrange(len(c.simplices[k])): rng.choice((-2, -1, 1, 2)) for _ in range(3)} if k >= 0 else {}
    base = caterpillar_cochain(c, first[0])
    shifted = dict(base)
    for j, x in coboundary(c, k, g).items():
        shifted[j] = shifted.get(j, 0) + x
    stable = theta_eval(shifted, f) == first[1]
    return stable and len(seen) == factorial(n - 1), {"plus": signs[1], "minus": signs[-1], "coboundary_stable": stable}


def verify_dump(path: str) -> list[CheckResult]:
    def check():
        dump = read_dump(path)
        bad = dump.boundary_squared_failures()
        return not bad, {"space": dump.space, "n": dump.n, "nonzero_boundary_squared_in_degrees": bad} if bad else None
    return [_timed("boundary squared is zero (dump)", check)]


def cmd_verify(cfg: RunConfig, complex_path: str | None = None, timings: bool = False) -> Report:
    out = header(cfg)
    if complex_path and not os.path.isfile(complex_path):
        raise FileNotFoundError(f"no such complex file: {complex_path}")
    checks = verify_dump(complex_path) if complex_path else verify_checks(cfg)
    if complex_path:
        out["complex"] = complex_path
    out["checks"] = [ch.to_json(timings) for ch in checks]
    ok = all(ch.passed for ch in checks)
    out["passed"] = ok
    return Report(out, ok)


# -- character -------------------------------------------------------------

MODULES = ("lie", "super", "hatlie", "homology")


def cmd_character(cfg: RunConfig, module: str) -> Report:
    out = header(cfg)
    out["module"] = module
    n = cfg.n
    if module == "lie":
        chi = lie_character(n, ORDINARY)
    elif module == "super":
        chi = lie_character(n, SUPER)
    elif module == "hatlie":
        chi = hat_lie_character(n)
    elif module == "homology":
        c = _build(cfg)
        points = range(n + 1) if cfg.space == TREE_SPACE else range(1, n + 1)
        chi = homology_character(c, n - 3, points)
    else:
        raise ValueError(f"module must be one of {MODULES}")
    out["group"] = f"S{chi.m}"
    out["dimension"] = chi.degree
    out["character"] = chi.table()
    return Report(out)


# -- whitehouse / export -----------------------------------------------------


def cmd_whitehouse(cfg: RunConfig) -> Report:
    out = header(cfg)
    body = whitehouse_report(cfg.n)
    out.update(body)
    ok = body["character_identity"] and all(e["exact"] for e in body["exactness"])
    out["passed"] = ok
    return Report(out, ok)


EXPORTS = ("complex", "cycle")


def cmd_export(cfg: RunConfig, what: str) -> Report:
    out = header(cfg)
    if what == "complex":
        out.update(_build(cfg).to_json())
    elif what == "cycle":
        out["terms"] = export_cycle(build_fundamental_cycle(cfg.n))
    else:
        raise ValueError(f"export must be one of {EXPORTS}")
    return Report(out)

