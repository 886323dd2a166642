"""Elementary number theory used to label the d-partite complexes."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def radical(self) -> int:
        return prod(self.primes)


def factorize(n: int) -> Factorization:
    """Trial-division factorization, primes ascending. ``factorize(1)`` is empty."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    factors = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def is_squarefree(n: int) -> bool:
    return n >= 1 and factorize(n).squarefree


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result = result // p * (p - 1)
    return result


def primitive_residues(n: int) -> list[int]:
    """Units of Z/nZ in ascending order; for n = 1 the trivial group is [0]."""
    if n < 1:
        raise ValueError(f"primitive_residues needs n >= 1, got {n}")
    if n == 1:
        return [0]
    return [m for m in range(n) if gcd(m, n) == 1]


def _check_moduli(primes) -> None:
    if len(set(primes)) != len(primes):
        raise ValueError(f"moduli must be distinct, got {tuple(primes)}")
    for i, p in enumerate(primes):
        if p < 1:
            raise ValueError(f"moduli must be positive, got {p}")
        for q in primes[i + 1:]:
            if gcd(p, q) != 1:
                raise ValueError(f"moduli {p} and {q} are not coprime")


def crt_split(j: int, primes) -> tuple[int, ...]:
    """Residue vector (j mod p_1, ..., j mod p_d)."""
    primes = tuple(primes)
    _check_moduli(primes)
    return tuple(j % p for p in primes)


def crt_combine(residues, primes) -> int:
    """The unique j in [0, n) with j = residues[i] mod primes[i]."""
    primes = tuple(primes)
    residues = tuple(residues)
    _check_moduli(primes)
    if len(residues) != len(primes):
        raise ValueError("need one residue per modulus")
    n = prod(primes)
    j = 0
    for r, p in zip(residues, primes):
        if not 0 <= r < p:
            raise ValueError(f"residue {r} out of range for modulus {p}")
        m = n // p
        j += r * m * pow(m, -1, p) if p > 1 else 0
    return j % n


def crt_bijection(direction: str, value, primes):
    """Dispatch for ``split`` (j -> residue vector) and ``combine`` (vector -> j)."""
    if direction == "split":
        return crt_split(value, primes)
    if direction == "combine":
        return crt_combine(value, primes)
    raise ValueError(f"direction must be 'split' or 'combine', got {direction!r}")


def squarefree_range(lo: int, hi: int, d: int | None = None) -> list[int]:
    """Squarefree n with lo <= n <= hi, optionally restricted to d prime factors."""
    out = []
    for n in range(max(lo, 1), hi + 1):
        f = factorize(n)
        if f.squarefree and (d is None or f.d == d):
            out.append(n)
    return out
