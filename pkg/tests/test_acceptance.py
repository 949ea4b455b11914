"""The eight acceptance criteria, each timed against its limit.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines as
they happen; they are also repeated in the terminal summary.
"""

import random

from test_report_io import random_document

from giuga_harness import claims as cl
from giuga_harness import exact_core as ex
from giuga_harness import mod_core as mc
from giuga_harness import report_io as rio
from giuga_harness import scanner as sc
from giuga_harness.primality import is_prime, primes_up_to

ALL = cl.KPolicy.all()


def _confirmed(cid, lo, hi, policy=None):
    report = cl.check_claim(cid, (lo, hi), policy)
    assert report.violation_count == 0 and report.status == "ok", (cid, report)
    return report


def test_criterion_1_oracle_equivalence(accept):
    with accept(1, "modular paths equal exact values mod n, n <= 60", 30):
        for n in range(2, 61):
            assert mc.wilson_residue(n).r == ex.f_wilson(n) % n
            assert mc.giuga_residue(n).r == ex.power_sum(n - 1, n) % n
            row = ex.H_row(n)
            for k in range(1, n):
                assert row[k - 1] == ex.H(k, n)
                assert mc.H_mod(k, n).r == row[k - 1] % n
            for k in range(1, n - 1):
                assert mc.U_mod(k, n).r == ex.U(k, n) % n


def test_criterion_2_forced_identity_suite(accept):
    with accept(2, "forced identities, zero violations", 300):
        _confirmed("lemma-ordering", 3, 60, ALL)
        _confirmed("remark-endpoint", 2, 60)
        _confirmed("lemma-step", 3, 40, ALL)
        _confirmed("lemma-core", 2, 200, ALL)
        _confirmed("remark-ukcong", 3, 200, ALL)
        _confirmed("lemma-u1", 3, 5000)
        _confirmed("lemma-h1", 2, 5000)
        for n in range(2, 5001):
            assert mc.H_mod(1, n) == mc.wilson_residue(n)
        _confirmed("vk-identity", 1, 200)
        _confirmed("lemma-a", 1, 200)
        # lemma-b runs the difference-operator cross-check itself for k <= 50
        _confirmed("lemma-b", 1, 200)
        _confirmed("factorial-chain", 3, 200, ALL)


def test_criterion_3_characterizations(accept):
    with accept(3, "H_1 on [2, 5000] and H_2 on [3, 5000] match the oracle", 120):
        assert cl.characterization_test(1, (2, 5000)).violation_count == 0
        assert cl.characterization_test(2, (3, 5000)).violation_count == 0
        # independent restatement against the primality oracle
        for n in range(3, 5001):
            assert (mc.H_mod(2, n).r == 0) == is_prime(n)


def test_criterion_4_published_observation(accept):
    with accept(4, "k in {2..5} and {n-5..n-2}, n <= 1000, zero violations", 120):
        report = cl.reproduce_author_observation(1000)
        assert report.verdict == cl.CONFIRMED
        assert report.violation_count == 0 and report.pairs_checked > 7900


def _brute_first_ukz_violation(n_max):
    for n in range(3, n_max + 1):
        for k in range(1, n - 1):
            if ex.U(k, n) % n:
                return n, k
    return None


def test_criterion_5_central_theorem_finding(accept):
    with accept(5, "U_k(n) = 0 (mod n) scan, n <= 300, first violation agrees with exact oracle", 600):
        assert ex.U(2, 4) == 14 and 14 % 4 == 2
        report = sc.sweep(sc.ScanConfig("thm-ukz", 2, 300, "all", workers=1))
        assert report.verdict == cl.VIOLATED
        first = report.violations[0]
        assert (first.n, first.k) == _brute_first_ukz_violation(300) == (4, 2)
        assert all(cl.replay(v) for v in report.violations)
        # the full violation set agrees with the exact path on a smaller range
        exact_count = sum(1 for n in range(3, 61) for k in range(1, n - 1) if ex.U(k, n) % n)
        assert cl.check_claim("thm-ukz", (2, 60), ALL).violation_count == exact_count
        # primes: the step is modulus-valid, so U_k(p) vanishes
        for p in primes_up_to(1000).primes():
            if p < 3:
                continue
            ks = cl.KPolicy.fixed(*range(1, min(p - 2, 64) + 1))
            res = cl.evaluate_n("thm-ukz", p, ks)
            assert res.violation_count == 0 and res.pairs == min(p - 2, 64), p


def test_criterion_6_full_family_sweep(accept):
    with accept(6, "H_k conjecture, n <= 200, all k, every violation replays", 300):
        report = sc.sweep(sc.ScanConfig("conj-hk", 2, 200, "all"))
        doc = rio.ReportDocument(report)
        assert rio.from_json(rio.to_json(doc)) == doc
        assert all(cl.replay(v) for v in report.violations)
        assert report.pairs_checked == sum(n - 1 for n in range(2, 201))
        assert report.violation_count == 0


def test_criterion_7_giuga_census(accept, tmp_path):
    with accept(7, "G(20000) = 0 with 2262 primes; 1 vs 8 workers and resume identical", 900):
        one = sc.giuga_census(20000, workers=1)
        assert one.G == 0 and one.prime_satisfiers == one.primes_checked == 2262
        assert primes_up_to(19999).count() == 2262
        eight = sc.giuga_census(20000, workers=8)
        assert rio.canonical_bytes(rio.ReportDocument(one)) == rio.canonical_bytes(rio.ReportDocument(eight))
        path = tmp_path / "census.jsonl"
        try:
            sc.giuga_census(20000, checkpoint=path, max_chunks=100)
        except sc.ScanInterrupted:
            pass
        else:
            raise AssertionError("interrupt did not fire")
        resumed = sc.resume(path, sc.census_config(20000, checkpoint=path))
        assert rio.canonical_bytes(rio.ReportDocument(resumed)) == rio.canonical_bytes(rio.ReportDocument(one))


def test_criterion_8_report_round_trip(accept):
    with accept(8, "100 randomized documents round-trip; CSV header bit-exact", 10):
        rng = random.Random(8)
        for _ in range(100):
            doc = random_document(rng)
            assert rio.from_json(rio.to_json(doc)) == doc
        report = cl.check_claim("thm-ukz", (2, 10), ALL)
        header = rio.violations_csv(rio.ReportDocument(report)).split("\n", 1)[0]
        assert header.encode() == b"claim_id,n,k,observed,expected,path"
