"""Exact sparse integer matrices: Smith normal form, ranks, kernels.

Everything uses Python integers (arbitrary precision) or ``Fraction``.
Sparse matrices are dict-of-rows; reductions work on private copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vector = dict  # column index -> nonzero value


@dataclass(eq=False)
class IntMatrix:
    """Sparse integer matrix with ``rows`` × ``cols`` shape."""

    rows: int
    cols: int
    data: dict[int, dict[int, int]] = field(default_factory=dict)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        return cls(size, size, {i: {i: 1} for i in range(size)})

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        ncols = cols if cols is not None else (len(dense[0]) if dense else 0)
        data = {}
        for i, row in enumerate(dense):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            r = {j: int(v) for j, v in enumerate(row) if v}
            if r:
                data[i] = r
        return cls(len(dense), ncols, data)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]) -> IntMatrix:
        m = cls(rows, cols, {})
        for i, j, v in triplets:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside {rows}x{cols}")
            m.add(i, j, v)
        return m

    def add(self, i: int, j: int, v: int) -> None:
        if not v:
            return
        row = self.data.setdefault(i, {})
        new = row.get(j, 0) + v
        if new:
            row[j] = new
        else:
            del row[j]
            if not row:
                del self.data[i]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data.get(i, {}).get(j, 0)

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(i, j, v) for i in sorted(self.data) for j, v in sorted(self.data[i].items())]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in self.data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def transpose(self) -> IntMatrix:
        t: dict[int, dict[int, int]] = {}
        for i, row in self.data.items():
            for j, v in row.items():
                t.setdefault(j, {})[i] = v
        return IntMatrix(self.cols, self.rows, t)

    def columns(self) -> dict[int, dict[int, int]]:
        return self.transpose().data

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out: dict[int, dict[int, int]] = {}
        for i, row in self.data.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                orow = other.data.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, vec: Vector) -> Vector:
        """Matrix times a sparse column vector."""
        out: dict[int, int] = {}
        cols = self._column_cache()
        for j, x in vec.items():
            for i, a in cols.get(j, {}).items():
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v}

    def _column_cache(self) -> dict[int, dict[int, int]]:
        cache = getattr(self, "_cols", None)
        if cache is None or cache[0] != self.nnz:
            cache = (self.nnz, self.columns())
            self._cols = cache
        return cache[1]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        data: dict[int, dict[int, int]] = {}
        for r, row in self.data.items():
            if r not in rmap:
                continue
            new = {cmap[c]: v for c, v in row.items() if c in cmap}
            if new:
                data[rmap[r]] = new
        return IntMatrix(len(rows), len(cols), data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# -- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SmithResult:
    rank: int
    factors: tuple[int, ...]  # nonzero diagonal entries, each dividing the next

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def smith_normal_form(a: IntMatrix) -> SmithResult:
    """Invariant factors of an integer matrix.

    Sparse elimination on unit pivots first (smallest Markowitz cost, then
    position); whatever remains without a unit entry is finished densely.
    """
    rows = {i: dict(r) for i, r in a.data.items()}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    ones = 0
    while True:
        piv = _unit_pivot(rows, cols)
        if piv is None:
            break
        p, q = piv
        prow = rows.pop(p)
        pv = prow[q]
        for i in list(cols[q]):
            if i == p:
                continue
            row = rows[i]
            f = row[q] * pv  # pv = ±1, so row[q] / pv == row[q] * pv
            for j, v in prow.items():
                new = row.get(j, 0) - f * v
                if new:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = new
                else:
                    if j in row:
                        del row[j]
                        cols[j].discard(i)
            if not row:
                del rows[i]
        for j in prow:
            cols[j].discard(p)
            if not cols[j]:
                del cols[j]
        cols.pop(q, None)
        ones += 1
    rest: tuple[int, ...] = ()
    if rows:
        rids = sorted(rows)
        cids = sorted(cols)
        cmap = {c: k for k, c in enumerate(cids)}
        dense = [[0] * len(cids) for _ in rids]
        for k, i in enumerate(rids):
            for j, v in rows[i].items():
                dense[k][cmap[j]] = v
        rest = _dense_snf(dense)[1]
    factors = _normalize_factors([1] * ones + list(rest))
    return SmithResult(len(factors), tuple(factors))


def _unit_pivot(rows: dict, cols: dict) -> tuple[int, int] | None:
    best = None
    best_key = None
    for i, row in rows.items():
        rl = len(row) - 1
        for j, v in row.items():
            if v == 1 or v == -1:
                key = (rl * (len(cols[j]) - 1), i, j)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, j)
                    if key[0] == 0:
                        return best
    return best


def _normalize_factors(diag: list[int]) -> list[int]:
    """Turn any nonzero diagonal into the divisibility chain with the same group."""
    from math import gcd
    d = sorted(abs(x) for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def _dense_snf(m: list[list[int]], transforms: bool = False):
    """Dense Smith form.  Returns ``(D, factors, U, V, Vinv)`` with ``U·A·V = D``.

    Transforms are only tracked when requested (``U``, ``V``, ``Vinv`` are
    ``None`` otherwise).  Pivot: smallest absolute value, then position.
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)] if transforms else None
    V = [[int(i == j) for j in range(nc)] for i in range(nc)] if transforms else None
    Vinv = [[int(i == j) for j in range(nc)] for i in range(nc)] if transforms else None

    def row_op(dst, src, f):  # row_dst -= f * row_src
        ra, rs = a[dst], a[src]
        for j in range(nc):
            if rs[j]:
                ra[j] -= f * rs[j]
        if U is not None:
            ua, us = U[dst], U[src]
            for j in range(nr):
                if us[j]:
                    ua[j] -= f * us[j]

    def col_op(dst, src, f):  # col_dst -= f * col_src
        for i in range(nr):
            if a[i][src]:
                a[i][dst] -= f * a[i][src]
        if V is not None:
            for i in range(nc):
                if V[i][src]:
                    V[i][dst] -= f * V[i][src]
            # inverse: row_src += f * row_dst on Vinv
            vs, vd = Vinv[src], Vinv[dst]
            for j in range(nc):
                if vd[j]:
                    vs[j] += f * vd[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
                    if a[t][j]:
                        done = False
            if done:
                # divisibility with the remaining block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_op(t, bad, -1)
                continue
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, ci, cj = min(cand)
            swap_rows(t, ci)
            swap_cols(t, cj)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    factors = [a[i][i] for i in range(min(nr, nc)) if a[i][i]]
    return a, factors, U, V, Vinv


def smith_with_transforms(dense: Sequence[Sequence[int]]):
    """``(D, U, V, Vinv)`` with ``U·A·V = D`` for a dense integer matrix."""
    d, _, u, v, vinv = _dense_snf([list(map(int, r)) for r in dense], transforms=True)
    return d, u, v, vinv


def rank(a: IntMatrix) -> int:
    return smith_normal_form(a).rank


# -- rational row reduction --------------------------------------------------


def rref(rows: Iterable[dict[int, int | Fraction]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form of sparse rows over the rationals.

    Returns ``(basis_rows, pivots)``; ``basis_rows[i][pivots[i]] == 1`` and
    every other basis row is zero in column ``pivots[i]``.
    """
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        row = {j: Fraction(v) for j, v in r.items() if v}
        # pivot rows are mutually reduced, so one pass clears every pivot column
        for p in [j for j in row if j in pivot_rows]:
            if p in row:
                _axpy(row, pivot_rows[p], -row[p])
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {j: v * inv for j, v in row.items()}
        for other in pivot_rows.values():
            if p in other:
                _axpy(other, row, -other[p])
        pivot_rows[p] = row
    pivots = sorted(pivot_rows)
    return [pivot_rows[p] for p in pivots], pivots


def _axpy(y: dict, x: dict, a) -> None:
    for j, v in x.items():
        new = y.get(j, 0) + a * v
        if new:
            y[j] = new
        else:
            y.pop(j, None)


def coordinates(vec: dict, basis_rows: list[dict], pivots: list[int]) -> list[Fraction] | None:
    """Coordinates of ``vec`` in an RREF row basis, or ``None`` if outside the span."""
    coords = [Fraction(vec.get(p, 0)) for p in pivots]
    recon: dict = {}
    for c, row in zip(coords, basis_rows):
        if c:
            _axpy(recon, row, c)
    clean = {j: Fraction(v) for j, v in vec.items() if v}
    return coords if recon == clean else None


def kernel_basis(a: IntMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Rational kernel of ``a`` (column vectors), one vector per free column.

    Each returned vector has a 1 in its own free column and 0 in the other
    free columns, so coordinates in this basis are read off the free columns.
    """
    basis, pivots = rref(a.data[i] for i in sorted(a.data))
    pivset = set(pivots)
    free = [j for j in range(a.cols) if j not in pivset]
    vecs = []
    for f in free:
        v: dict[int, Fraction] = {f: Fraction(1)}
        for p, row in zip(pivots, basis):
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return vecs, free


def integer_kernel_basis(a: IntMatrix) -> list[dict[int, int]]:
    """A Z-basis of ``{x ∈ Z^cols : a·x = 0}``.

    When the rational free-column basis is integral it is already a lattice
    basis (coordinates are the integer free entries); otherwise it is
    saturated through a Smith form with column transforms.
    """
    vecs, _ = kernel_basis(a)
    if all(v.denominator == 1 for vec in vecs for v in vec.values()):
        return [{j: int(v) for j, v in vec.items()} for vec in vecs]
    scaled = []
    for vec in vecs:
        from math import lcm
        den = lcm(*(v.denominator for v in vec.values()))
        scaled.append({j: int(v * den) for j, v in vec.items()})
    return saturate(scaled, a.cols)


def saturate(vectors: list[dict[int, int]], dim: int) -> list[dict[int, int]]:
    """Z-basis of ``span_Q(vectors) ∩ Z^dim``."""
    if not vectors:
        return []
    dense = [[v.get(j, 0) for j in range(dim)] for v in vectors]
    d, _, _, _, vinv = _dense_snf(dense, transforms=True)
    r = sum(1 for i in range(min(len(d), dim)) if d[i][i])
    return [{j: x for j, x in enumerate(vinv[i]) if x} for i in range(r)]


def lattice_index_report(vectors: list[dict[int, int]], dim: int) -> SmithResult:
    """Smith data of the lattice spanned by ``vectors`` inside ``Z^dim``.

    The span is saturated iff every factor equals 1.
    """
    m = IntMatrix(len(vectors), dim, {i: dict(v) for i, v in enumerate(vectors) if v})
    return smith_normal_form(m)
