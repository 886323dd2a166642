"""Complete d-partite complexes, their CRT-labelled subcomplexes and homology.

A vertex is a pair ``(part, residue)`` with ``part`` a 0-based index into
``parts``.  A face is a tuple of vertices in ascending part order, at most
one vertex per part; that ordering is the orientation of the face.  The
empty tuple is the (-1)-dimensional face, so every chain complex here is
augmented and homology is reduced.
"""

from __future__ import annotations

import json
from itertools import combinations, product
from math import prod
from typing import Iterable, Sequence

from .exactlinalg import HomologySummary, IntMatrix, smith_normal_form
from .numtheory import crt_combine, euler_phi, factorize

Vertex = tuple[int, int]
Face = tuple[Vertex, ...]


class SkeletonError(RuntimeError):
    pass


class SimplicialComplex:
    """Subcomplex of the join of ``len(parts)`` discrete vertex sets.

    ``facets`` generate the complex; with ``full_skeleton`` the whole
    (d-2)-skeleton of the complete d-partite complex is adjoined as well.
    Faces are enumerated lazily and cached; instances are treated as
    immutable.
    """

    def __init__(self, parts: Sequence[int], facets: Iterable[Face] = (), full_skeleton: bool = False):
        self.parts = tuple(int(p) for p in parts)
        if not self.parts:
            raise ValueError("a complex needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"part sizes must be positive, got {self.parts}")
        clean = set()
        for f in facets:
            f = tuple(sorted((int(i), int(r)) for i, r in f))
            idx = [i for i, _ in f]
            if len(set(idx)) != len(idx):
                raise ValueError(f"face {f} uses a part twice")
            for i, r in f:
                if not (0 <= i < len(self.parts) and 0 <= r < self.parts[i]):
                    raise ValueError(f"vertex {(i, r)} outside parts {self.parts}")
            clean.add(f)
        self.full_skeleton = bool(full_skeleton)
        self.facets = frozenset(self._maximal(clean))
        self._faces: dict[int, list[Face]] = {}
        self._boundary: dict[int, IntMatrix] = {}
        self._snf: dict[int, tuple[int, tuple[int, ...]]] = {}

    @staticmethod
    def _maximal(faces: set) -> set:
        out = set()
        for f in sorted(faces, key=len, reverse=True):
            sf = set(f)
            if not any(sf < set(g) for g in out):
                out.add(f)
        return out

    @property
    def d(self) -> int:
        return len(self.parts)

    @property
    def dim(self) -> int:
        top = max((len(f) for f in self.facets), default=0) - 1
        if self.full_skeleton:
            top = max(top, self.d - 2)
        return top

    def faces(self, k: int) -> list[Face]:
        """All k-faces in lexicographic order of their (part, residue) sequences."""
        if k < -1:
            return []
        if k not in self._faces:
            if k == -1:
                self._faces[k] = [()]
            else:
                found = set()
                for f in self.facets:
                    if len(f) > k:
                        found.update(combinations(f, k + 1))
                if self.full_skeleton and k <= self.d - 2:
                    found.update(skeleton_faces(self.parts, k))
                self._faces[k] = sorted(found)
        return self._faces[k]

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(-1, self.dim + 1)]

    def all_faces(self) -> frozenset:
        return frozenset(f for k in range(-1, self.dim + 1) for f in self.faces(k))

    def maximal_faces(self) -> list[Face]:
        faces = set(self.facets)
        if self.full_skeleton:
            faces |= set(skeleton_faces(self.parts, self.d - 2))
        return sorted(self._maximal(faces))

    def contains_skeleton(self, k: int) -> bool:
        return set(skeleton_faces(self.parts, k)) <= set(self.faces(k))

    def euler_characteristic(self) -> int:
        """Reduced Euler characteristic from face counts (empty face included)."""
        return sum((-1) ** k * len(self.faces(k)) for k in range(-1, self.dim + 1))

    def facet_residues(self) -> list[int]:
        """CRT labels j mod n of the top-dimensional facets."""
        return sorted(facet_label(f, self.parts) for f in self.facets if len(f) == self.d)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.parts == other.parts and self.all_faces() == other.all_faces()

    def __hash__(self):
        return hash((self.parts, self.all_faces()))

    def __repr__(self):
        flag = ", full_skeleton" if self.full_skeleton else ""
        return f"SimplicialComplex(parts={self.parts}, {len(self.facets)} facets{flag})"

    def to_dict(self) -> dict:
        facets = []
        for f in sorted(self.facets):
            row = [None] * self.d
            for i, r in f:
                row[i] = r
            facets.append(row)
        return {"parts": list(self.parts), "facets": facets, "full_skeleton": self.full_skeleton}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        parts = data["parts"]
        facets = []
        for row in data.get("facets", []):
            if len(row) != len(parts):
                raise ValueError(f"facet {row} must list one residue (or null) per part")
            facets.append(tuple((i, r) for i, r in enumerate(row) if r is not None))
        return cls(parts, facets, data.get("full_skeleton", False))

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        return cls.from_dict(json.loads(text))


def skeleton_faces(parts: Sequence[int], k: int) -> list[Face]:
    """Every k-face of the complete d-partite complex on ``parts``."""
    if k < -1:
        return []
    out = []
    for chosen in combinations(range(len(parts)), k + 1):
        for res in product(*(range(parts[i]) for i in chosen)):
            out.append(tuple(zip(chosen, res)))
    return sorted(out)


def facet(j: int, parts: Sequence[int]) -> Face:
    """The facet F_{j mod n}: vertex j mod p_i in every part."""
    return tuple((i, j % p) for i, p in enumerate(parts))


def facet_label(f: Face, parts: Sequence[int]) -> int:
    return crt_combine([r for _, r in f], parts)


def _squarefree_parts(n: int) -> tuple[int, ...]:
    fac = factorize(n)
    if n < 2 or not fac.squarefree:
        raise ValueError(f"need a squarefree n >= 2, got {n}")
    return fac.primes


def complete_dpartite(*parts: int) -> SimplicialComplex:
    if len(parts) == 1 and not isinstance(parts[0], int):
        parts = tuple(parts[0])
    if not parts:
        raise ValueError("complete_dpartite needs at least one part")
    return SimplicialComplex(parts, (tuple(enumerate(r)) for r in product(*(range(p) for p in parts))))


def tail_residues(n: int) -> list[int]:
    """phi(n)+1, ..., n-1: the facets present in every K_A."""
    return list(range(euler_phi(n) + 1, n))


def subcomplex_KA(n: int, A: Iterable[int]) -> SimplicialComplex:
    """Complex generated by F_j for j in A together with phi(n)+1, ..., n-1."""
    parts = _squarefree_parts(n)
    phi = euler_phi(n)
    A = set(A)
    bad = [j for j in A if not 0 <= j <= phi]
    if bad:
        raise ValueError(f"A must lie in [0, {phi}], got {sorted(bad)}")
    X = SimplicialComplex(parts, (facet(j, parts) for j in sorted(A | set(tail_residues(n)))))
    if not X.contains_skeleton(len(parts) - 2):
        raise SkeletonError(f"K_A for n={n}, A={sorted(A)} misses a (d-2)-face")
    return X


def subcomplex_KT(n: int, T: Iterable[int]) -> SimplicialComplex:
    """Full (d-2)-skeleton plus the facets indexed by T, |T| = n - phi(n)."""
    parts = _squarefree_parts(n)
    T = sorted({t % n for t in T})
    if len(T) != n - euler_phi(n):
        raise ValueError(f"|T| must be n - phi(n) = {n - euler_phi(n)}, got {len(T)}")
    return SimplicialComplex(parts, (facet(t, parts) for t in T), full_skeleton=True)


def boundary_matrix(X: SimplicialComplex, k: int) -> IntMatrix:
    """Matrix of d_k: C_k -> C_{k-1}; deleting position i carries sign (-1)**i."""
    if k in X._boundary:
        return X._boundary[k]
    rows = X.faces(k - 1)
    cols = X.faces(k)
    index = {f: i for i, f in enumerate(rows)}
    entries = {}
    for c, f in enumerate(cols):
        for pos in range(len(f)):
            g = f[:pos] + f[pos + 1:]
            entries[(index[g], c)] = -1 if pos % 2 else 1
    B = IntMatrix(len(rows), len(cols), entries)
    X._boundary[k] = B
    return B


def _boundary_snf(X: SimplicialComplex, k: int) -> tuple[int, tuple[int, ...]]:
    if k not in X._snf:
        if k < 0 or k > X.dim:
            X._snf[k] = (0, ())
        else:
            snf = smith_normal_form(boundary_matrix(X, k))
            X._snf[k] = (snf.rank, tuple(d for d in snf.diagonal if d > 1))
    return X._snf[k]


def reduced_homology(X: SimplicialComplex, i: int) -> HomologySummary:
    """H~_i(X; Z) via the SNF of the boundary maps on either side of C_i."""
    if i < -1:
        raise ValueError("reduced homology starts in degree -1")
    if i > X.dim:
        return HomologySummary(0)
    rank_out, _ = _boundary_snf(X, i)
    rank_in, torsion = _boundary_snf(X, i + 1)
    return HomologySummary(len(X.faces(i)) - rank_out - rank_in, torsion)


def homology_table(X: SimplicialComplex) -> dict[int, HomologySummary]:
    return {i: reduced_homology(X, i) for i in range(-1, X.dim + 1)}


def suspension(X: SimplicialComplex) -> SimplicialComplex:
    """Join with two points labelled 0 mod 2 and 1 mod 2, added as part 0."""
    gens = X.maximal_faces() or [()]
    if not any(gens):
        gens = [()]
    facets = []
    for f in gens:
        shifted = tuple((i + 1, r) for i, r in f)
        facets.append(((0, 0),) + shifted)
        facets.append(((0, 1),) + shifted)
    return SimplicialComplex((2,) + X.parts, facets)


def dihedral_image(n: int, element: tuple[int, int], residues: Iterable[int]) -> set[int]:
    """Image of facet labels under j -> eps*j + t (mod n)."""
    _squarefree_parts(n)
    eps, t = element
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return {(eps * j + t) % n for j in residues}


def apply_dihedral(X: SimplicialComplex, element: tuple[int, int]) -> SimplicialComplex:
    """Act on every vertex set at once: j mod p -> eps*j + t mod p."""
    eps, t = element
    facets = [tuple((i, (eps * r + t) % X.parts[i]) for i, r in f) for f in X.facets]
    return SimplicialComplex(X.parts, facets, X.full_skeleton)


def skeleton_complex(parts: Sequence[int], k: int) -> SimplicialComplex:
    """The k-skeleton of the complete d-partite complex."""
    return SimplicialComplex(parts, skeleton_faces(parts, k))


def complex_for(n: int) -> SimplicialComplex:
    return complete_dpartite(*_squarefree_parts(n))


def n_of(X: SimplicialComplex) -> int:
    return prod(X.parts)
