from math import gcd, prod

import pytest
from hypothesis import given, strategies as st

from cyclohom.numtheory import (
    crt_bijection,
    crt_combine,
    crt_split,
    euler_phi,
    factorize,
    is_squarefree,
    primitive_residues,
    squarefree_range,
)


@pytest.mark.parametrize(
    "n, factors",
    [(15, ((3, 1), (5, 1))), (105, ((3, 1), (5, 1), (7, 1))), (12, ((2, 2), (3, 1))), (1, ())],
)
def test_factorize_examples(n, factors):
    f = factorize(n)
    assert f.factors == factors
    assert prod(p**e for p, e in f.factors) == n


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_reconstructs_all_small():
    for n in range(1, 3000):
        f = factorize(n)
        assert prod(p**e for p, e in f.factors) == n
        assert all(all(p % q for q in range(2, int(p**0.5) + 1)) for p in f.primes)
        assert list(f.primes) == sorted(f.primes)


@pytest.mark.parametrize("n, phi", [(15, 8), (105, 48), (1, 1), (210, 48), (12, 4)])
def test_euler_phi(n, phi):
    assert euler_phi(n) == phi


def test_phi_counts_units_up_to_10_000():
    # count units with a sieve so the check stays independent of primitive_residues
    N = 10_000
    phi = list(range(N + 1))
    for p in range(2, N + 1):
        if phi[p] == p:
            for m in range(p, N + 1, p):
                phi[m] -= phi[m] // p
    for n in range(1, N + 1):
        assert euler_phi(n) == phi[n]
    for n in range(1, 400):
        assert len(primitive_residues(n)) == euler_phi(n)


def test_primitive_residues_examples():
    assert primitive_residues(15) == [1, 2, 4, 7, 8, 11, 13, 14]
    assert primitive_residues(7) == [1, 2, 3, 4, 5, 6]
    assert primitive_residues(1) == [0]
    assert len(primitive_residues(1)) == euler_phi(1)


def test_crt_examples():
    assert crt_split(7, (3, 5)) == (1, 2)
    assert crt_combine((1, 2), (3, 5)) == 7
    assert crt_split(0, (3, 5, 7)) == (0, 0, 0)
    assert crt_bijection("split", 7, (3, 5)) == (1, 2)
    assert crt_bijection("combine", (1, 2), (3, 5)) == 7


def test_crt_rejects_repeated_moduli():
    with pytest.raises(ValueError):
        crt_combine((1, 1), (3, 3))
    with pytest.raises(ValueError):
        crt_split(4, (5, 5))
    with pytest.raises(ValueError):
        crt_bijection("sideways", 1, (3,))


def test_crt_round_trip_squarefree_up_to_10_000():
    for n in squarefree_range(2, 10_000):
        primes = factorize(n).primes
        for j in {0, 1, n // 3, n // 2, n - 1}:
            assert crt_combine(crt_split(j, primes), primes) == j


@given(st.sampled_from(squarefree_range(2, 2000)), st.data())
def test_crt_bijection_property(n, data):
    primes = factorize(n).primes
    j = data.draw(st.integers(0, n - 1))
    v = crt_split(j, primes)
    assert all(0 <= r < p for r, p in zip(v, primes))
    assert crt_combine(v, primes) == j
    # brute-force oracle on the combine side
    assert all((crt_combine(v, primes) - r) % p == 0 for r, p in zip(v, primes))


def test_squarefree_helpers():
    assert is_squarefree(30) and not is_squarefree(12)
    assert squarefree_range(2, 12) == [2, 3, 5, 6, 7, 10, 11]
    assert squarefree_range(2, 40, d=3) == [30]
    assert all(gcd(n, 4) != 4 for n in squarefree_range(1, 500))
