"""Checks that re-derive cyclotomic coefficients from simplicial homology.

Each ``verify_*`` function returns a :class:`VerificationReport` whose cases
carry witnesses (homology groups, determinants, cycle vectors) so a failure
can be debugged from the report alone.  Reports never raise on a failed
sub-case; they record it.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .duality import (
    dual_matrix,
    find_spanning_tree,
    plucker_check,
    relative_boundary,
    top_boundary_by_residue,
)
from .exactlinalg import (
    HomologySummary,
    IntMatrix,
    cokernel_invariants,
    determinant,
    kernel_primitive_basis,
    matvec,
    rank,
    smith_normal_form,
    solve_integer,
    solve_rational_many,
)
from .numtheory import euler_phi, factorize, primitive_residues, squarefree_range
from .polynomial import (
    cyclotomic,
    lattice_coefficient,
    primitive_basis_determinant,
    root_coordinate_matrix,
)
from .simplicial import (
    SimplicialComplex,
    apply_dihedral,
    boundary_matrix,
    complete_dpartite,
    dihedral_image,
    facet_label,
    homology_table,
    reduced_homology,
    skeleton_complex,
    subcomplex_KA,
    subcomplex_KT,
    suspension,
    tail_residues,
)

PASS, FAIL, NA = "pass", "fail", "n/a"

CHECKS = ("main", "signs", "kT", "attaching", "coboundary", "symmetry", "migotti", "tree", "basis")


@dataclass
class Case:
    id: str
    status: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.id, "status": self.status, "witness": self.witness}


@dataclass
class VerificationReport:
    n: int
    check_id: str
    cases: list[Case] = field(default_factory=list)
    elapsed_ms: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.cases)

    @property
    def status(self) -> str:
        return PASS if self.passed else FAIL

    def failures(self) -> list[Case]:
        return [c for c in self.cases if c.status == FAIL]

    def add(self, case_id: str, ok: bool | None, **witness) -> Case:
        status = NA if ok is None else (PASS if ok else FAIL)
        case = Case(case_id, status, _jsonable(witness))
        self.cases.append(case)
        return case

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "n": self.n,
            "check_id": self.check_id,
            "status": self.status,
            "cases": [c.to_dict() for c in self.cases],
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }


def _jsonable(x):
    if isinstance(x, HomologySummary):
        return x.to_dict()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def reports_to_json(reports: Sequence[VerificationReport], timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], indent=2) + "\n"


def reports_to_csv(reports: Sequence[VerificationReport], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "check_id", "status", "cases", "failed", "elapsed_ms"])
    for r in reports:
        ms = f"{r.elapsed_ms:.3f}" if timing and r.elapsed_ms is not None else ""
        w.writerow([r.n, r.check_id, r.status, len(r.cases), len(r.failures()), ms])
    return buf.getvalue()


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _setup(n: int):
    fac = factorize(n)
    if n < 2 or not fac.squarefree:
        raise ValueError(f"need a squarefree n >= 2, got {n}")
    return fac.primes, len(fac.primes), euler_phi(n), cyclotomic(n)


def expected_KA_homology(c: int, d: int, i: int) -> HomologySummary:
    if i == d - 2:
        return HomologySummary(1) if c == 0 else HomologySummary(0, (abs(c),) if abs(c) > 1 else ())
    if i == d - 1 and c == 0:
        return HomologySummary(1)
    return HomologySummary(0)


def main_case(n: int, j: int) -> tuple[bool, dict]:
    parts, d, phi, f = _setup(n)
    X = subcomplex_KA(n, {j})
    table = homology_table(X)
    c = f[j]
    ok = all(table.get(i, HomologySummary(0)) == expected_KA_homology(c, d, i) for i in range(-1, d))
    lattice = lattice_coefficient(f, j)
    h = table[d - 2]
    simplicial_order = h.order
    ok = ok and lattice == simplicial_order == abs(c)
    return ok, {
        "c_j": c,
        "homology": {i: table[i] for i in range(-1, d)},
        "torsion": list(h.torsion),
        "lattice_order": lattice,
    }


@_timed
def verify_main(n: int, js: Iterable[int] | None = None) -> VerificationReport:
    """|c_j| as the order of H~_{d-2}(K_{j}), plus the c_j = 0 dichotomy."""
    _, _, phi, _ = _setup(n)
    report = VerificationReport(n, "main")
    for j in (range(phi + 1) if js is None else js):
        ok, w = main_case(n, j)
        report.add(f"j={j}", ok, **w)
    return report


def cycle_of_pair(n: int, j: int, jp: int) -> tuple[HomologySummary, dict[int, int]]:
    """H~_{d-1}(K_{j,j'}) and its primitive generator as residue -> coefficient."""
    parts = factorize(n).primes
    d = len(parts)
    X = subcomplex_KA(n, {j, jp})
    h = reduced_homology(X, d - 1)
    basis = kernel_primitive_basis(boundary_matrix(X, d - 1))
    z = {}
    if len(basis) == 1:
        for face, b in zip(X.faces(d - 1), basis[0]):
            if b:
                z[facet_label(face, parts)] = b
    return h, z


@_timed
def verify_signs(n: int, pairs: Iterable[tuple[int, int]] | None = None) -> VerificationReport:
    """Signs of c_j from cycle coefficients, anchored at the monic c_phi = +1."""
    parts, d, phi, f = _setup(n)
    report = VerificationReport(n, "signs")
    default = pairs is None
    if default:
        pairs = [(j, phi) for j in range(phi) if f[j] != 0]
    rebuilt = [0] * (phi + 1)
    rebuilt[phi] = 1
    for j, jp in pairs:
        if f[j] == 0 or f[jp] == 0:
            raise ValueError(f"pair ({j}, {jp}) includes a zero coefficient")
        h, z = cycle_of_pair(n, j, jp)
        bj, bjp = z.get(j, 0), z.get(jp, 0)
        ok = h == HomologySummary(1) and bj != 0 and bjp != 0
        ratio = Fraction(-bjp, bj) if ok else None
        ok = ok and ratio == Fraction(f[j], f[jp])
        report.add(
            f"pair=({j},{jp})", ok,
            homology=h, b_j=bj, b_jp=bjp, orientation="same" if bj * bjp > 0 else "opposite",
            minus_b_ratio=ratio, cycle=z,
        )
        if default and ratio is not None:
            magnitude = reduced_homology(subcomplex_KA(n, {j}), d - 2).order
            sign = 1 if ratio > 0 else -1
            rebuilt[j] = sign * magnitude
    if default:
        report.add("reconstruction", rebuilt == list(f.coeffs), rebuilt=rebuilt, cyclotomic=list(f.coeffs))
    return report


def kT_case(n: int, T: Iterable[int], M=None) -> tuple[bool, dict]:
    parts, d, phi, _ = _setup(n)
    M = M or root_coordinate_matrix(n)
    T = sorted({t % n for t in T})
    Tset = set(T)
    Tc = [j for j in range(n) if j not in Tset]
    X = subcomplex_KT(n, T)
    table = homology_table(X)
    lattice = cokernel_invariants(IntMatrix.from_dense(M.restrict(Tc), len(Tc)), rows=phi)
    deficiency = lattice.free_rank
    ok = table[d - 2] == lattice
    ok = ok and table.get(d - 1, HomologySummary(0)) == HomologySummary(deficiency)
    ok = ok and all(table[i].trivial for i in range(-1, d) if i not in (d - 2, d - 1))
    return ok, {"T": T, "homology": {i: table[i] for i in range(-1, d)}, "lattice_cokernel": lattice,
                "rank_deficiency": deficiency}


def default_T_family(n: int, samples: int = 0, seed: int = 0) -> list[list[int]]:
    phi = euler_phi(n)
    prim = set(primitive_residues(n))
    Ts = [[j for j in range(n) if j not in prim]]
    Ts += [sorted(set(tail_residues(n)) | {j}) for j in range(phi + 1)]
    rng = random.Random(seed)
    Ts += [sorted(rng.sample(range(n), n - phi)) for _ in range(samples)]
    return Ts


@_timed
def verify_kT(n: int, Ts: Iterable[Iterable[int]] | None = None, samples: int = 10, seed: int = 0) -> VerificationReport:
    """H~_*(K[T]) against the lattice quotient Z[zeta] / Z T^c."""
    _, _, phi, _ = _setup(n)
    Ts = default_T_family(n, samples, seed) if Ts is None else [list(T) for T in Ts]
    M = root_coordinate_matrix(n)
    report = VerificationReport(n, "kT")
    for k, T in enumerate(Ts):
        if len(set(t % n for t in T)) != n - phi:
            raise ValueError(f"|T| must be {n - phi}")
        ok, w = kT_case(n, T, M)
        report.add(f"T#{k}", ok, **w)
    return report


def _attaching_setup(n: int):
    parts, d, phi, f = _setup(n)
    K = complete_dpartite(*parts)
    B, _ = top_boundary_by_residue(n, K)
    return parts, d, phi, f, K, B


def coboundary_case(n: int, B: IntMatrix, f) -> tuple[bool, dict]:
    phi = f.degree
    b = [f[j] if j <= phi else 0 for j in range(n)]
    BT = B.transpose()
    y = solve_integer(BT, b)
    ok = y is not None and matvec(BT, y) == b
    return ok, {"cochain": b, "solution_support": 0 if y is None else sum(1 for v in y if v)}


@_timed
def verify_attaching(n: int) -> VerificationReport:
    """Attaching degrees of the facets F_j into K_empty equal c_j."""
    report = VerificationReport(n, "attaching")
    parts, d, phi, f = _setup(n)
    if d < 2:
        report.add("all", None, reason="not applicable for d = 1")
        return report
    _, _, _, _, K, B = _attaching_setup(n)
    empty = homology_table(subcomplex_KA(n, set()))
    sphere_ok = all(
        empty[i] == (HomologySummary(1) if i == d - 2 else HomologySummary(0)) for i in range(-1, d)
    )
    # z_phi, ..., z_{n-1} must be a Z-basis of the (d-2)-cycle lattice
    Z = B.select_columns(list(range(phi, n)))
    low = boundary_matrix(K, d - 2)
    cycle_rank = len(K.faces(d - 2)) - rank(low)
    in_kernel = all(v == 0 for c in range(Z.cols) for v in matvec(low, [row[c] for row in Z.dense()]))
    snf = smith_normal_form(Z)
    saturated = snf.rank == n - phi == cycle_rank and all(x == 1 for x in snf.diagonal)
    report.add("K_empty", sphere_ok and in_kernel and saturated,
               homology={i: empty[i] for i in range(-1, d)}, cycle_rank=cycle_rank,
               basis_rank=snf.rank, saturated=saturated)
    dense = B.dense()
    solutions = solve_rational_many(Z, [[row[j] for row in dense] for j in range(phi + 1)])
    for j, x in enumerate(solutions):
        integral = x is not None and all(v.denominator == 1 for v in x)
        coeff = int(x[0]) if integral else None
        report.add(f"j={j}", integral and coeff == f[j], coefficient=coeff, c_j=f[j])
    ok, w = coboundary_case(n, B, f)
    report.add("coboundary", ok, **w)
    return report


@_timed
def verify_coboundary(n: int) -> VerificationReport:
    report = VerificationReport(n, "coboundary")
    parts, d, phi, f = _setup(n)
    if d < 2:
        report.add("coboundary", None, reason="not applicable for d = 1")
        return report
    _, _, _, _, _, B = _attaching_setup(n)
    ok, w = coboundary_case(n, B, f)
    report.add("coboundary", ok, **w)
    return report


def migotti_case(n: int) -> tuple[bool | None, dict]:
    _, d, _, f = _setup(n)
    if d != 2:
        return None, {"reason": "Migotti bound applies to two prime factors"}
    return all(c in (-1, 0, 1) for c in f.coeffs), {"coefficients": list(f.coeffs)}


@_timed
def verify_migotti(n: int) -> VerificationReport:
    report = VerificationReport(n, "migotti")
    ok, w = migotti_case(n)
    report.add("coefficients", ok, **w)
    return report


@_timed
def verify_symmetries(n: int, suspension_check: bool = True) -> VerificationReport:
    """Migotti, the involution j -> phi - j, and Phi_2n(x) = Phi_n(-x) with suspension."""
    parts, d, phi, f = _setup(n)
    report = VerificationReport(n, "symmetry")
    ok, w = migotti_case(n)
    report.add("migotti", ok, **w)
    t = (-1, phi)
    for j in range(phi + 1):
        src = subcomplex_KA(n, {j})
        dst = subcomplex_KA(n, {phi - j})
        labels_ok = dihedral_image(n, t, src.facet_residues()) == set(dst.facet_residues())
        # independent route: act on vertex labels part by part
        complex_ok = apply_dihedral(src, t) == dst
        h_ok = reduced_homology(src, d - 2) == reduced_homology(dst, d - 2)
        report.add(f"dihedral j={j}", labels_ok and complex_ok and h_ok and f[j] == f[phi - j],
                   image=phi - j, c_j=f[j], c_image=f[phi - j])
    if n % 2 == 0:
        report.add("suspension", None, reason="2n is not squarefree for even n")
        return report
    g = cyclotomic(2 * n)
    report.add("negate_variable", g == f.negate_variable(), phi_2n=list(g.coeffs))
    if suspension_check:
        for j in range(phi + 1):
            small = reduced_homology(subcomplex_KA(n, {j}), d - 2)
            big = subcomplex_KA(2 * n, {j})
            hat = reduced_homology(big, d - 1)
            sigma = suspension(subcomplex_KA(n, {j}))
            shifted = all(
                reduced_homology(sigma, i + 1) == reduced_homology(subcomplex_KA(n, {j}), i)
                for i in range(-1, d)
            )
            same = homology_table(sigma) == {i: reduced_homology(big, i) for i in range(-1, d + 1)}
            report.add(f"suspension j={j}", hat.torsion == small.torsion and shifted and same,
                       torsion_2n=list(hat.torsion), torsion_n=list(small.torsion),
                       c_hat=g[j], c_j=f[j])
    return report


@_timed
def verify_tree(n: int, seed: int = 0) -> VerificationReport:
    """Spanning tree, dual pair and the duality identities they support."""
    parts, d, phi, f = _setup(n)
    report = VerificationReport(n, "tree")
    tree = find_spanning_tree(n, seed)
    report.add("tree", True, size=len(tree.R), complement=len(tree.complement),
               attempts=tree.attempts, checks=tree.checks)
    pair = dual_matrix(n, tree)
    report.add("orthogonal", rank(pair.Mperp) == n - phi, rank_Mperp=rank(pair.Mperp))
    prim = set(primitive_residues(n))
    T0 = [j for j in range(n) if j not in prim]
    rec = plucker_check(pair, T0)
    report.add("T0", abs(rec.detM) == 1 and abs(rec.detMperp) == 1,
               detM=rec.detM, detMperp=rec.detMperp)
    for j in range(phi + 1):
        T = sorted(set(tail_residues(n)) | {j})
        rec = plucker_check(pair, T)
        X = subcomplex_KA(n, {j})
        top_q = reduced_homology(X, d - 1).free_rank
        rel = relative_boundary(pair, T)
        nonsingular = determinant(rel) != 0
        coker_ok = (not nonsingular) or cokernel_invariants(rel) == reduced_homology(X, d - 2)
        report.add(f"j={j}", rec.ok and nonsingular == (top_q == 0) and coker_ok,
                   detM=rec.detM, detMperp=rec.detMperp, cokernel=rec.cokernel_M)
    return report


@_timed
def verify_basis(n: int) -> VerificationReport:
    """Primitive roots form a Z-basis; K[P^c] is Z-acyclic; skeleton homology."""
    parts, d, phi, _ = _setup(n)
    report = VerificationReport(n, "basis")
    det = primitive_basis_determinant(n)
    report.add("primitive_basis", abs(det) == 1, det=det)
    prim = set(primitive_residues(n))
    X = subcomplex_KT(n, [j for j in range(n) if j not in prim])
    table = homology_table(X)
    report.add("K[P^c]", all(h.trivial for h in table.values()), homology=table)
    skel = skeleton_complex(parts, d - 2)
    table = homology_table(skel)
    ok = table[d - 2] == HomologySummary(n - phi) and all(table[i].trivial for i in range(-1, d - 2))
    report.add("skeleton", ok, homology=table)
    return report


RUNNERS: dict[str, Callable[..., VerificationReport]] = {
    "main": verify_main,
    "signs": verify_signs,
    "kT": verify_kT,
    "attaching": verify_attaching,
    "coboundary": verify_coboundary,
    "symmetry": verify_symmetries,
    "migotti": verify_migotti,
    "tree": verify_tree,
    "basis": verify_basis,
}


def parse_checks(checks: str | Iterable[str]) -> list[str]:
    names = [s.strip() for s in checks.split(",")] if isinstance(checks, str) else list(checks)
    names = [s for s in names if s]
    bad = [s for s in names if s not in RUNNERS]
    if bad:
        raise ValueError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    return names


def run_check(n: int, check: str, seed: int = 0) -> VerificationReport:
    if check == "kT":
        return verify_kT(n, seed=seed)
    if check == "tree":
        return verify_tree(n, seed=seed)
    return RUNNERS[check](n)


def _safe_run(n: int, check: str, seed: int) -> VerificationReport:
    try:
        return run_check(n, check, seed)
    except Exception as exc:  # a crashing check is a failed check, never a crashed sweep
        report = VerificationReport(n, check)
        report.add("error", False, error=f"{type(exc).__name__}: {exc}")
        return report


def run_many(tasks: Sequence[tuple[int, str]], threads: int = 1, seed: int = 0) -> list[VerificationReport]:
    """Run (n, check) tasks, merged in task order regardless of thread count."""
    if threads <= 1:
        return [_safe_run(n, c, seed) for n, c in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: _safe_run(t[0], t[1], seed), tasks))


def sweep(max_n: int, checks: Iterable[str] = ("main",), d: int | None = None,
          threads: int = 1, seed: int = 0) -> list[VerificationReport]:
    """Every selected check over squarefree 2 <= n <= max_n, ordered by (n, check)."""
    checks = parse_checks(checks)
    tasks = [(n, c) for n in squarefree_range(2, max_n, d) for c in checks]
    return run_many(tasks, threads, seed)
