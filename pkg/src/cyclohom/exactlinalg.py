"""Exact integer linear algebra: Smith normal form, cokernels, ranks, kernels.

Everything works over Python ints, so entries never overflow. Two SNF routes
exist: a sparse row-dict elimination that only produces invariant factors
(used for homology, where boundary matrices are sparse with entries in
{-1, 0, 1}), and a dense elimination that also tracks the unimodular
transforms.  Both pick pivots the same way: smallest nonzero magnitude,
ties broken by lowest column and then lowest row, so results are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored as a sparse coordinate map ``{(i, j): value}``."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = int(v)
        return cls(rows, cols, entries)

    @classmethod
    def from_triples(cls, rows: int, cols: int, triples: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        entries: dict = {}
        for i, j, v in triples:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            v = entries.get((i, j), 0) + int(v)
            if v:
                entries[(i, j)] = v
            else:
                entries.pop((i, j), None)
        return cls(rows, cols, entries)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def triples(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def select_columns(self, columns: Sequence[int]) -> "IntMatrix":
        pos = {c: k for k, c in enumerate(columns)}
        ent = {(i, pos[j]): v for (i, j), v in self.entries.items() if j in pos}
        return IntMatrix(self.rows, len(columns), ent)

    def select_rows(self, rows: Sequence[int]) -> "IntMatrix":
        pos = {r: k for k, r in enumerate(rows)}
        ent = {(pos[i], j): v for (i, j), v in self.entries.items() if i in pos}
        return IntMatrix(len(rows), self.cols, ent)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines += [f"{i} {j} {v}" for i, j, v in self.triples()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 3:
            raise ValueError("matrix header must be 'rows cols nnz'")
        rows, cols, nnz = (int(x) for x in lines[0])
        body = lines[1:]
        if len(body) != nnz:
            raise ValueError(f"header promises {nnz} entries, found {len(body)}")
        triples = []
        for parts in body:
            if len(parts) != 3:
                raise ValueError(f"bad entry line: {' '.join(parts)}")
            triples.append(tuple(int(x) for x in parts))
        return cls.from_triples(rows, cols, triples)


MatrixLike = "IntMatrix | Sequence[Sequence[int]]"


def as_matrix(A, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    """Coerce nested lists to :class:`IntMatrix`.

    ``rows``/``cols`` fix the shape of empty inputs, which nested lists
    cannot express.
    """
    if isinstance(A, IntMatrix):
        return A
    data = [list(r) for r in A]
    if not data:
        return IntMatrix(rows or 0, cols or 0)
    return IntMatrix.from_dense(data, cols)


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    rank: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d)


@dataclass(frozen=True)
class HomologySummary:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int:
        """Group order, 0 when infinite."""
        if self.free_rank:
            return 0
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _chain_normalize(values: list[int]) -> list[int]:
    """Turn a diagonal into a divisibility chain by repeated (gcd, lcm) swaps."""
    ones = [v for v in values if v == 1]
    rest = sorted(v for v in values if v != 1)
    k = len(rest)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = rest[i], rest[j]
            if b % a:
                g = gcd(a, b)
                rest[i], rest[j] = g, a // g * b
    rest.sort()
    return ones + rest


def _sparse_snf_diagonal(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero SNF diagonal of a sparse matrix given as row dicts (consumed)."""
    rows = [dict(r) for r in rows]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)

    def set_entry(i, j, v):
        r = rows[i]
        if v:
            if j not in r:
                cols.setdefault(j, set()).add(i)
            r[j] = v
        elif j in r:
            del r[j]
            s = cols[j]
            s.discard(i)
            if not s:
                del cols[j]

    def add_row_multiple(target, src, q):
        # row_target -= q * row_src
        for j, v in list(rows[src].items()):
            set_entry(target, j, rows[target].get(j, 0) - q * v)

    def pick_pivot():
        best = None
        for j in sorted(cols):
            for i in cols[j]:
                a = abs(rows[i][j])
                if best is None or (a, j, i) < best:
                    best = (a, j, i)
            if best is not None and best[0] == 1:
                break
        return best

    diag = []
    while cols:
        _, c, r = pick_pivot()
        while True:
            p = rows[r][c]
            # clear column c below/above the pivot by floor-division row ops
            for s in sorted(cols[c] - {r}):
                q = rows[s][c] // p
                add_row_multiple(s, r, q)
            others = cols[c] - {r}
            if others:
                i = min(others, key=lambda s: (abs(rows[s][c]), s))
                r = i
                continue
            # column c is now only row r: column ops touch only this row
            for j in sorted(k for k in rows[r] if k != c):
                q = rows[r][j] // p
                if q:
                    set_entry(r, j, rows[r][j] - q * p)
            rest = [k for k in rows[r] if k != c]
            if rest:
                c = min(rest, key=lambda k: (abs(rows[r][k]), k))
                continue
            break
        diag.append(abs(rows[r][c]))
        set_entry(r, c, 0)
    return diag


def _dense_snf(A: IntMatrix, want_transforms: bool):
    m, n = A.rows, A.cols
    D = A.dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)] if want_transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if want_transforms else None

    def row_axpy(t, s, q):  # row t -= q * row s
        Dt, Ds = D[t], D[s]
        for k in range(n):
            if Ds[k]:
                Dt[k] -= q * Ds[k]
        if U is not None:
            Ut, Us = U[t], U[s]
            for k in range(m):
                if Us[k]:
                    Ut[k] -= q * Us[k]

    def col_axpy(t, s, q):  # col t -= q * col s
        for row in D:
            if row[s]:
                row[t] -= q * row[s]
        if V is not None:
            for row in V:
                if row[s]:
                    row[t] -= q * row[s]

    def swap_rows(a, b):
        if a != b:
            D[a], D[b] = D[b], D[a]
            if U is not None:
                U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a != b:
            for row in D:
                row[a], row[b] = row[b], row[a]
            if V is not None:
                for row in V:
                    row[a], row[b] = row[b], row[a]

    def min_entry(t):
        best = None
        for j in range(t, n):
            for i in range(t, m):
                v = D[i][j]
                if v and (best is None or (abs(v), j, i) < best):
                    best = (abs(v), j, i)
            if best is not None and best[0] == 1:
                break
        return best

    k = min(m, n)
    t = 0
    while t < k:
        best = min_entry(t)
        if best is None:
            break
        _, j, i = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_axpy(i, t, D[i][t] // p)
            for j in range(t + 1, n):
                if D[t][j]:
                    col_axpy(j, t, D[t][j] // p)
            cand = [(abs(D[i][t]), 0, i) for i in range(t + 1, m) if D[i][t]]
            cand += [(abs(D[t][j]), 1, j) for j in range(t + 1, n) if D[t][j]]
            if cand:
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            # fold the offending row into the pivot row and re-reduce
            row_axpy(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        t += 1
    diag = tuple(D[i][i] for i in range(k))
    return diag, U, V


def smith_normal_form(A, want_transforms: bool = False) -> SNFResult:
    """Smith normal form ``U @ A @ V == diag(d_1, ..., d_k)`` with d_1 | d_2 | ...

    Without transforms the sparse elimination is used; with transforms a
    dense elimination tracks unimodular ``U`` (rows x rows) and ``V``
    (cols x cols).
    """
    A = as_matrix(A)
    k = min(A.rows, A.cols)
    if want_transforms:
        diag, U, V = _dense_snf(A, True)
        return SNFResult(tuple(diag), sum(1 for d in diag if d), U, V)
    nz = _chain_normalize(_sparse_snf_diagonal(A.row_dicts()))
    diag = tuple(nz) + (0,) * (k - len(nz))
    return SNFResult(diag, len(nz))


def cokernel_invariants(A, rows: int | None = None) -> HomologySummary:
    """Z^rows / im(A) as free rank plus nontrivial invariant factors."""
    A = as_matrix(A, rows=rows)
    snf = smith_normal_form(A)
    return HomologySummary(A.rows - snf.rank, tuple(d for d in snf.diagonal if d > 1))


def rank(A) -> int:
    return smith_normal_form(as_matrix(A)).rank


def determinant(A) -> int:
    """Bareiss fraction-free determinant of a square matrix."""
    A = as_matrix(A)
    if A.rows != A.cols:
        raise ValueError(f"determinant needs a square matrix, got {A.rows}x{A.cols}")
    n = A.rows
    if n == 0:
        return 1
    M = A.dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            a = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pk * rowi[j] - a * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


def rank_and_det(A) -> tuple[int, int | None]:
    """Rank, and the determinant when ``A`` is square (else ``None``)."""
    A = as_matrix(A)
    r = rank(A)
    if A.rows != A.cols:
        return r, None
    return r, (determinant(A) if r == A.rows else 0)


def _rref(A: IntMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form over Q on sparse rows; returns rows and pivot columns."""
    work = [{j: Fraction(v) for j, v in r.items()} for r in A.row_dicts() if r]
    done: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    for c in range(A.cols):
        piv = None
        for idx, r in enumerate(work):
            if c in r and (piv is None or len(r) < len(work[piv])):
                piv = idx
        if piv is None:
            continue
        row = work.pop(piv)
        inv = 1 / row[c]
        row = {j: v * inv for j, v in row.items()}
        for other in work + done:
            f = other.get(c)
            if f:
                for j, v in row.items():
                    y = other.get(j, 0) - f * v
                    if y:
                        other[j] = y
                    else:
                        other.pop(j, None)
        work = [r for r in work if r]
        done.append(row)
        pivots.append(c)
        if not work:
            break
    return done, pivots


def primitive_vector(v: Sequence) -> list[int]:
    """Scale a rational vector to integers with content 1, first nonzero positive."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return ints if lead > 0 else [-x for x in ints]


def kernel_primitive_basis(A, cols: int | None = None) -> list[list[int]]:
    """Rational kernel basis of ``A``; each vector primitive and sign-normalized."""
    A = as_matrix(A, cols=cols)
    R, pivots = _rref(A)
    free = [c for c in range(A.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row.get(f, 0)
        basis.append(primitive_vector(v))
    return basis


def matvec(A, x: Sequence[int]) -> list[int]:
    A = as_matrix(A)
    out = [0] * A.rows
    for (i, j), v in A.entries.items():
        out[i] += v * x[j]
    return out


def solve_rational_many(A, rhs: Sequence[Sequence[int]]) -> list[list[Fraction] | None]:
    """Rational solutions of A x = b for several right-hand sides in one elimination."""
    A = as_matrix(A)
    k = len(rhs)
    entries = dict(A.entries)
    for t, b in enumerate(rhs):
        for i, v in enumerate(b):
            if v:
                entries[(i, A.cols + t)] = int(v)
    aug = IntMatrix(A.rows, A.cols + k, entries)
    R, pivots = _rref(aug)
    out = []
    for t in range(k):
        col = A.cols + t
        if any(pc >= A.cols and row.get(col) for row, pc in zip(R, pivots)) or col in pivots:
            out.append(None)
            continue
        x = [Fraction(0)] * A.cols
        for row, pc in zip(R, pivots):
            if pc < A.cols:
                x[pc] = row.get(col, Fraction(0))
        out.append(x)
    return out


def solve_rational(A, b: Sequence[int]) -> list[Fraction] | None:
    """Some rational solution of A x = b (unique if A has full column rank)."""
    return solve_rational_many(A, [b])[0]


def solve_integer(A, b: Sequence[int]) -> list[int] | None:
    """An integer solution of A x = b, or ``None`` if none exists over Z."""
    A = as_matrix(A)
    snf = smith_normal_form(A, want_transforms=True)
    U, V, diag = snf.U, snf.V, snf.diagonal
    Ub = [sum(u * bi for u, bi in zip(row, b)) for row in U]
    y = [0] * A.cols
    for i, c in enumerate(Ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c:
                return None
        else:
            q, r = divmod(c, d)
            if r:
                return None
            y[i] = q
    x = [sum(v * yj for v, yj in zip(row, y)) for row in V]
    return x
