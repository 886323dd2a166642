"""Simplicial spanning trees and the matroid duality between M and M-perp.

``M`` holds the coordinates of the n-th roots of unity in a Z-basis of
Z[zeta]; ``Mperp`` is the top boundary map of the complete d-partite
complex restricted to the (d-2)-faces outside a torsion-free spanning
tree.  Both have columns indexed by residues j mod n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exactlinalg import (
    IntMatrix,
    cokernel_invariants,
    determinant,
    kernel_primitive_basis,
    rank,
)
from .numtheory import euler_phi, factorize
from .polynomial import RootCoordinateMatrix, root_coordinate_matrix
from .simplicial import (
    Face,
    SimplicialComplex,
    boundary_matrix,
    complete_dpartite,
    facet,
    reduced_homology,
    skeleton_faces,
)

MAX_TREE_ATTEMPTS = 32


class TreeVerificationError(RuntimeError):
    pass


class DualityError(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SpanningTree:
    n: int
    parts: tuple[int, ...]
    S: tuple[Face, ...]
    R: tuple[Face, ...]
    complement: tuple[Face, ...]
    attempts: int = 1
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def k(self) -> int:
        return len(self.parts) - 2


@dataclass(frozen=True)
class DualPair:
    n: int
    M: RootCoordinateMatrix
    Mperp: IntMatrix
    row_faces: tuple[Face, ...]

    @property
    def phi(self) -> int:
        return self.M.rows


def _boundary_column(f: Face) -> dict[Face, int]:
    return {f[:i] + f[i + 1:]: (-1 if i % 2 else 1) for i in range(len(f))}


def _greedy_independent(faces: Sequence[Face]) -> list[Face]:
    """Keep each face whose boundary is rationally independent of those kept.

    Fraction-free echelon reduction on sparse vectors keyed by the lexicographic
    position of the (k-1)-faces.
    """
    keyed: dict[Face, int] = {}
    pivots: dict[int, dict[int, int]] = {}
    kept = []
    for f in faces:
        v = {}
        for g, s in _boundary_column(f).items():
            v[keyed.setdefault(g, len(keyed))] = s
        while v:
            p = min(v)
            w = pivots.get(p)
            if w is None:
                pivots[p] = v
                kept.append(f)
                break
            a, b = w[p], v[p]
            new = {i: a * x for i, x in v.items()}
            for i, x in w.items():
                y = new.get(i, 0) - b * x
                if y:
                    new[i] = y
                else:
                    new.pop(i, None)
            v = new
    return kept


def verify_tree(parts: Sequence[int], S: Sequence[Face], R: Sequence[Face]) -> dict:
    """Check conditions (i)-(iv) of a torsion-free S-spanning tree by direct homology."""
    n = 1
    for p in parts:
        n *= p
    k = len(parts) - 2
    tree = SimplicialComplex(parts, R)
    h_top = reduced_homology(tree, k)
    h_low = reduced_homology(tree, k - 1)
    return {
        "skeleton": tree.contains_skeleton(k - 1) if R else k - 1 < 0,
        "acyclic_top": h_top.trivial,
        "finite_low": h_low.free_rank == 0,
        "torsion_free": h_low.trivial,
        "size": len(R) == len(S) - (n - euler_phi(n)),
    }


def find_spanning_tree(
    n: int,
    seed: int = 0,
    verifier: Callable[[Sequence[int], Sequence[Face], Sequence[Face]], dict] = verify_tree,
) -> SpanningTree:
    """Greedy torsion-free spanning tree of the (d-2)-faces, verified before return.

    The first attempt scans faces lexicographically; failed verification
    retries with shuffled orders from ``random.Random(seed + attempt)``.
    For d = 1 the (d-2)-faces are just the empty face and the tree is empty.
    """
    fac = factorize(n)
    if n < 2 or not fac.squarefree:
        raise ValueError(f"find_spanning_tree needs squarefree n >= 2, got {n}")
    parts = fac.primes
    S = skeleton_faces(parts, len(parts) - 2)
    if len(parts) == 1:
        return SpanningTree(n, parts, tuple(S), (), tuple(S), 1, {"trivial": True})
    order = list(S)
    for attempt in range(MAX_TREE_ATTEMPTS):
        if attempt:
            order = list(S)
            random.Random(seed + attempt).shuffle(order)
        R = _greedy_independent(order)
        checks = verifier(parts, S, R)
        if all(checks.values()):
            Rset = set(R)
            return SpanningTree(
                n, parts, tuple(S), tuple(sorted(R)),
                tuple(f for f in S if f not in Rset), attempt + 1, checks,
            )
    raise TreeVerificationError(
        f"tree verification failed for n={n} after {MAX_TREE_ATTEMPTS} attempts: {checks}"
    )


def top_boundary_by_residue(n: int, K: SimplicialComplex | None = None) -> tuple[IntMatrix, list[Face]]:
    """Top boundary of K_{p_1..p_d} with column j = facet F_{j mod n}."""
    parts = factorize(n).primes
    K = K or complete_dpartite(*parts)
    top = len(parts) - 1
    B = boundary_matrix(K, top)
    col_of = {f: c for c, f in enumerate(K.faces(top))}
    order = [col_of[facet(j, parts)] for j in range(n)]
    return B.select_columns(order), K.faces(top - 1)


def dual_matrix(n: int, tree: SpanningTree) -> DualPair:
    M = root_coordinate_matrix(n)
    B, row_faces = top_boundary_by_residue(n)
    row_of = {f: i for i, f in enumerate(row_faces)}
    rows = [row_of[f] for f in tree.complement]
    Mperp = B.select_rows(rows)
    dense = Mperp.dense()
    for mrow in M.entries:
        for prow in dense:
            if sum(a * b for a, b in zip(mrow, prow)):
                raise DualityError(f"M and Mperp are not orthogonal for n={n}")
    return DualPair(n, M, Mperp, tuple(tree.complement))


def _complement(n: int, T) -> tuple[list[int], list[int]]:
    T = sorted({t % n for t in T})
    Tset = set(T)
    return T, [j for j in range(n) if j not in Tset]


@dataclass(frozen=True)
class PluckerRecord:
    T: tuple[int, ...]
    detM: int
    detMperp: int
    cokernel_M: object
    cokernel_Mperp: object

    @property
    def det_match(self) -> bool:
        return abs(self.detM) == abs(self.detMperp)

    @property
    def cokernel_match(self) -> bool:
        return self.cokernel_M == self.cokernel_Mperp

    @property
    def ok(self) -> bool:
        return self.det_match and self.cokernel_match


def plucker_check(pair: DualPair, T) -> PluckerRecord:
    """Compare the complementary maximal minors M|T^c and Mperp|T."""
    n = pair.n
    T, Tc = _complement(n, T)
    if len(T) != n - pair.phi:
        raise ValueError(f"|T| must be {n - pair.phi}, got {len(T)}")
    A = IntMatrix.from_dense(pair.M.restrict(Tc), len(Tc))
    B = pair.Mperp.select_columns(T)
    return PluckerRecord(
        tuple(T),
        determinant(A),
        determinant(B),
        cokernel_invariants(A),
        cokernel_invariants(B),
    )


@dataclass(frozen=True)
class DependenceRecord:
    A: tuple[int, ...]
    j: int
    jp: int
    c: tuple[int, ...]
    b: tuple[int, ...]
    b_columns: tuple[int, ...]
    c_ratio: Fraction
    b_ratio: Fraction

    @property
    def holds(self) -> bool:
        return self.c_ratio == -self.b_ratio


def _unique_dependence(matrix: IntMatrix) -> list[int]:
    basis = kernel_primitive_basis(matrix)
    if len(basis) != 1:
        raise PreconditionError(f"expected a unique dependence, kernel has dimension {len(basis)}")
    return basis[0]


def dual_dependence(pair: DualPair, A, j: int, jp: int) -> DependenceRecord:
    """Unique column dependences on A (for M) and on A^c + {j, j'} (for Mperp).

    Returns c_j / c_j' and b_j' / b_j; the duality says the first is the
    negative of the second.
    """
    n, phi = pair.n, pair.phi
    A = sorted({a % n for a in A})
    if len(A) != phi + 1:
        raise ValueError(f"|A| must be phi(n) + 1 = {phi + 1}, got {len(A)}")
    if j not in A or jp not in A or j == jp:
        raise ValueError("j and j' must be distinct elements of A")
    MA = IntMatrix.from_dense(pair.M.restrict(A), len(A))
    if rank(MA) != phi:
        raise PreconditionError("M restricted to A does not have full rank")
    c = _unique_dependence(MA)
    cj, cjp = c[A.index(j)], c[A.index(jp)]
    if cj == 0 or cjp == 0:
        raise PreconditionError(f"dependence on A vanishes at j={j} or j'={jp}")
    reduced = [a for a in A if a != jp]
    if rank(IntMatrix.from_dense(pair.M.restrict(reduced), len(reduced))) != phi:
        raise PreconditionError("M restricted to A minus j' is rank deficient")
    Aset = set(A)
    cols = sorted([x for x in range(n) if x not in Aset] + [j, jp])
    b = _unique_dependence(pair.Mperp.select_columns(cols))
    bj, bjp = b[cols.index(j)], b[cols.index(jp)]
    if bj == 0 or bjp == 0:
        raise DualityError(f"dual dependence vanishes at j={j} or j'={jp}")
    return DependenceRecord(
        tuple(A), j, jp, tuple(c), tuple(b), tuple(cols), Fraction(cj, cjp), Fraction(bjp, bj)
    )


def relative_boundary(pair: DualPair, T) -> IntMatrix:
    """Square relative boundary map C_{d-1}(K[T], <R>) -> C_{d-2}(K[T], <R>)."""
    T, _ = _complement(pair.n, T)
    return pair.Mperp.select_columns(T)
