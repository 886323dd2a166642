"""Dense integer polynomials, cyclotomic polynomials and root-of-unity coordinates."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

from .exactlinalg import cokernel_invariants, determinant
from .numtheory import euler_phi, factorize, primitive_residues


class InexactDivision(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """Polynomial over Z, ``coeffs[i]`` is the coefficient of x**i.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs=()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, k: int, a: int = 1) -> "IntPoly":
        return cls([0] * k + [a])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        m = max(len(self), len(other))
        return IntPoly(self[i] + other[i] for i in range(m))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def divmod_monic(self, g: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Quotient and remainder by a divisor with leading coefficient +-1."""
        if g.leading not in (1, -1):
            raise ValueError("divisor must have unit leading coefficient")
        r = list(self.coeffs)
        dg = g.degree
        if len(r) - 1 < dg:
            return IntPoly(), IntPoly(r)
        q = [0] * (len(r) - dg)
        lead = g.leading
        for k in range(len(r) - 1 - dg, -1, -1):
            a = r[k + dg] * lead
            q[k] = a
            if a:
                for i, b in enumerate(g.coeffs):
                    r[k + i] -= a * b
        return IntPoly(q), IntPoly(r[:dg])

    def substitute_power(self, k: int) -> "IntPoly":
        """f(x**k)."""
        out = [0] * (k * self.degree + 1) if self.coeffs else []
        for i, a in enumerate(self.coeffs):
            out[i * k] = a
        return IntPoly(out)

    def negate_variable(self) -> "IntPoly":
        """f(-x)."""
        return IntPoly(a if i % 2 == 0 else -a for i, a in enumerate(self.coeffs))

    def to_json(self) -> str:
        return json.dumps([str(a) for a in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "IntPoly":
        return cls(int(a) for a in json.loads(text))

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.coeffs)


def exact_div(f: IntPoly, g: IntPoly) -> IntPoly:
    """q with f == q*g; raises :class:`InexactDivision` on a nonzero remainder."""
    if not g.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if g.leading in (1, -1):
        q, r = f.divmod_monic(g)
        if r.coeffs:
            raise InexactDivision(f"inexact division: remainder {list(r.coeffs)}")
        return q
    # general leading coefficient: long division that must stay integral
    r = list(f.coeffs)
    dg = g.degree
    if len(r) - 1 < dg:
        if r:
            raise InexactDivision("inexact division: degree too small")
        return IntPoly()
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1 - dg, -1, -1):
        a, rem = divmod(r[k + dg], g.leading)
        if rem:
            raise InexactDivision("inexact division: non-integral quotient")
        q[k] = a
        for i, b in enumerate(g.coeffs):
            r[k + i] -= a * b
    if any(r):
        raise InexactDivision(f"inexact division: remainder {r[:dg]}")
    return IntPoly(q)


_memo: dict[int, IntPoly] = {1: IntPoly([-1, 1])}
_memo_lock = threading.Lock()


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def cyclotomic(n: int) -> IntPoly:
    """Phi_n by exact division of x**n - 1 by the proper-divisor cyclotomics."""
    if n < 1:
        raise ValueError(f"cyclotomic needs n >= 1, got {n}")
    cached = _memo.get(n)
    if cached is not None:
        return cached
    denom = IntPoly([1])
    for d in _divisors(n)[:-1]:
        denom = denom * cyclotomic(d)
    phi = exact_div(IntPoly.monomial(n) - IntPoly([1]), denom)
    with _memo_lock:
        # concurrent inserts compute the same value, keep whichever landed first
        return _memo.setdefault(n, phi)


def radical_substitute(n: int) -> IntPoly:
    """Phi_n computed as Phi_rad(n)(x ** (n / rad(n)))."""
    if n < 2:
        raise ValueError(f"radical_substitute needs n >= 2, got {n}")
    rad = factorize(n).radical
    return cyclotomic(rad).substitute_power(n // rad)


@dataclass(frozen=True)
class RootCoordinateMatrix:
    """Coordinates of zeta**j in the power basis 1, zeta, ..., zeta**(phi-1)."""

    n: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.n

    def column(self, j: int) -> list[int]:
        return [row[j % self.n] for row in self.entries]

    def restrict(self, columns) -> list[list[int]]:
        cols = list(columns)
        return [[row[j] for j in cols] for row in self.entries]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def root_coordinate_matrix(n: int) -> RootCoordinateMatrix:
    if n < 2:
        raise ValueError(f"root_coordinate_matrix needs n >= 2, got {n}")
    f = cyclotomic(n)
    r = f.degree
    cols = []
    cur = [1] + [0] * (r - 1)
    for _ in range(n):
        cols.append(cur)
        # multiply by x, then reduce x**r = -(c_0 + ... + c_{r-1} x**(r-1))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [a - top * f[i] for i, a in enumerate(cur)]
    entries = tuple(tuple(cols[j][i] for j in range(n)) for i in range(r))
    return RootCoordinateMatrix(n, entries)


def companion_presentation(f: IntPoly) -> list[list[int]]:
    """The r x (r+1) matrix [I | -c] expressing 1, x, ..., x**r in Z[x]/(f)."""
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    r = f.degree
    return [[1 if i == j else 0 for j in range(r)] + [-f[i]] for i in range(r)]


def lattice_coefficient(f: IntPoly, j: int) -> int:
    """Order of R / Z{1, x, ..., x**r minus x**j} for R = Z[x]/(f); 0 if infinite.

    This recovers |c_j| from a cokernel computation and never reads c_j directly.
    """
    if not f.coeffs or not f.is_monic():
        raise ValueError("lattice_coefficient needs a monic polynomial")
    r = f.degree
    if not 0 <= j <= r:
        raise ValueError(f"j must lie in [0, {r}], got {j}")
    full = companion_presentation(f)
    keep = [k for k in range(r + 1) if k != j]
    A = [[row[k] for k in keep] for row in full]
    summary = cokernel_invariants(A, rows=r)
    if summary.free_rank:
        return 0
    order = 1
    for t in summary.torsion:
        order *= t
    return order


def primitive_basis_determinant(n: int) -> int:
    """det of the coordinate matrix on the primitive n-th roots (squarefree n)."""
    f = factorize(n)
    if n < 2 or not f.squarefree:
        raise ValueError(f"primitive_basis_determinant needs squarefree n >= 2, got {n}")
    M = root_coordinate_matrix(n)
    return determinant(M.restrict(primitive_residues(n)))


__all__ = [
    "IntPoly",
    "InexactDivision",
    "RootCoordinateMatrix",
    "companion_presentation",
    "cyclotomic",
    "euler_phi",
    "exact_div",
    "lattice_coefficient",
    "primitive_basis_determinant",
    "radical_substitute",
    "root_coordinate_matrix",
]
