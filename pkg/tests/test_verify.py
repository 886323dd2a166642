import csv
import io
import json

import pytest

from cyclohom.numtheory import squarefree_range
from cyclohom.polynomial import cyclotomic
from cyclohom.verify import (
    CHECKS,
    VerificationReport,
    default_T_family,
    parse_checks,
    reports_to_csv,
    reports_to_json,
    run_many,
    sweep,
    verify_attaching,
    verify_coboundary,
    verify_kT,
    verify_main,
    verify_signs,
    verify_symmetries,
)


def case(report, case_id):
    return next(c for c in report.cases if c.id == case_id)


def test_main_n15():
    r = verify_main(15)
    assert r.passed and len(r.cases) == 9
    assert case(r, "j=5").witness["homology"]["0"] == {"free_rank": 0, "torsion": []}
    assert case(r, "j=6").witness["homology"]["0"] == {"free_rank": 1, "torsion": []}
    assert case(r, "j=6").witness["homology"]["1"] == {"free_rank": 1, "torsion": []}
    assert case(r, "j=7").witness["homology"]["0"] == {"free_rank": 0, "torsion": []}


def test_main_n105_rp2_torsion():
    r = verify_main(105, [7])
    assert r.passed
    assert case(r, "j=7").witness["torsion"] == [2]
    assert case(r, "j=7").witness["c_j"] == -2


@pytest.mark.parametrize("p", [2, 3, 5, 13])
def test_main_primes(p):
    r = verify_main(p)
    assert r.passed and len(r.cases) == p
    assert all(c.witness["homology"]["-1"] == {"free_rank": 0, "torsion": []} for c in r.cases)


def test_main_rejects_non_squarefree():
    with pytest.raises(ValueError):
        verify_main(12)


def test_signs_n15_examples():
    r = verify_signs(15, [(7, 8), (5, 8)])
    assert r.passed
    assert case(r, "pair=(7,8)").witness["orientation"] == "same"
    assert case(r, "pair=(7,8)").witness["minus_b_ratio"] == "-1"
    assert case(r, "pair=(5,8)").witness["orientation"] == "opposite"
    assert case(r, "pair=(5,8)").witness["minus_b_ratio"] == "1"


def test_signs_rejects_zero_coefficient():
    with pytest.raises(ValueError):
        verify_signs(15, [(6, 8)])


def test_signs_reconstruction_n105():
    r = verify_signs(105)
    assert r.passed
    rec = case(r, "reconstruction").witness
    assert rec["rebuilt"] == list(cyclotomic(105).coeffs)
    assert rec["rebuilt"][7] == -2


def test_signs_non_anchor_pair():
    assert verify_signs(105, [(7, 41), (0, 5)]).passed


def test_kT_defaults_and_specialization():
    r = verify_kT(15, samples=0)
    assert r.passed
    # T#0 is P^c, the next phi+1 cases are A_0 + {j}
    assert case(r, "T#0").witness["lattice_cokernel"] == {"free_rank": 0, "torsion": []}
    main = verify_main(15)
    for j in range(9):
        assert case(r, f"T#{j + 1}").witness["homology"] == main.cases[j].witness["homology"]


def test_kT_random_100_n15():
    Ts = default_T_family(15, samples=100, seed=1)[-100:]
    r = verify_kT(15, Ts)
    assert r.passed and len(r.cases) == 100


def test_kT_wrong_size():
    with pytest.raises(ValueError):
        verify_kT(15, [[0, 1]])


def test_attaching_n15():
    r = verify_attaching(15)
    assert r.passed
    assert case(r, "j=6").witness["coefficient"] == 0
    assert case(r, "j=8").witness["coefficient"] == 1
    assert case(r, "coboundary").status == "pass"
    assert verify_coboundary(15).passed


def test_attaching_prime_not_applicable():
    r = verify_attaching(7)
    assert r.passed and r.cases[0].status == "n/a"


def test_symmetries_n15():
    r = verify_symmetries(15)
    assert r.passed
    assert case(r, "migotti").status == "pass"
    assert case(r, "dihedral j=3").witness["image"] == 5
    assert case(r, "negate_variable").status == "pass"
    for j in range(9):
        c = case(r, f"suspension j={j}").witness
        assert c["c_hat"] == (-1) ** j * c["c_j"]


def test_symmetries_even_n():
    r = verify_symmetries(30)
    assert r.passed and case(r, "suspension").status == "n/a"


def test_sweep_ordering_and_empty():
    assert sweep(1, ["main"]) == []
    reports = sweep(35, ["main"])
    assert [r.n for r in reports] == squarefree_range(2, 35)
    assert all(r.passed for r in reports)


def test_sweep_n15_all_checks_fast():
    reports = sweep(15, ["main", "signs", "kT", "attaching", "symmetry"])
    assert all(r.passed for r in reports)
    assert sum(r.elapsed_ms for r in reports) < 5000


def test_sweep_restricted_by_d():
    assert {r.n for r in sweep(70, ["migotti"], d=3)} == {30, 42, 66, 70}


def test_threads_do_not_change_results():
    tasks = [(n, c) for n in (15, 21, 30) for c in ("main", "signs", "kT")]
    one = reports_to_json(run_many(tasks, 1, seed=3), timing=False)
    four = reports_to_json(run_many(tasks, 4, seed=3), timing=False)
    assert one == four


def test_crashing_check_recorded_not_raised(monkeypatch):
    import cyclohom.verify as v

    def boom(n):
        raise RuntimeError("kaput")

    monkeypatch.setitem(v.RUNNERS, "main", boom)
    (r,) = v.run_many([(15, "main")])
    assert not r.passed and "kaput" in r.cases[0].witness["error"]


def test_report_json_and_csv():
    reports = [verify_main(15), verify_attaching(7)]
    data = json.loads(reports_to_json(reports))
    assert set(data[0]) == {"n", "check_id", "status", "cases", "elapsed_ms"}
    assert set(data[0]["cases"][0]) == {"id", "status", "witness"}
    assert data[0]["elapsed_ms"] is not None
    assert json.loads(reports_to_json(reports, timing=False))[0]["elapsed_ms"] is None
    rows = list(csv.DictReader(io.StringIO(reports_to_csv(reports))))
    assert [(r["n"], r["check_id"], r["status"]) for r in rows] == [("15", "main", "pass"), ("7", "attaching", "pass")]


def test_failure_carries_witness():
    r = VerificationReport(15, "main")
    r.add("j=3", False, torsion=[2])
    r.add("j=4", True)
    assert not r.passed and r.failures()[0].witness == {"torsion": [2]}


def test_parse_checks():
    assert parse_checks("main,signs") == ["main", "signs"]
    assert set(parse_checks(",".join(CHECKS))) == set(CHECKS)
    with pytest.raises(ValueError):
        parse_checks("main,bogus")


def test_reports_reproducible():
    a = reports_to_json(sweep(35, ["main", "kT", "tree"], seed=4), timing=False)
    b = reports_to_json(sweep(35, ["main", "kT", "tree"], seed=4), timing=False)
    assert a == b
