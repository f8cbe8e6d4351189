"""Exit criteria. Each test appends one PASS/FAIL line to the terminal summary."""

import math
import os
import random
import time
from itertools import combinations


from conftest import ACCEPTANCE_LINES
from sumdiff.census import census, census_pairs
from sumdiff.cli import _verify_payload, execute, parse_cli
from sumdiff.forms import BinaryForm, NaryForm, eval_form, eval_nary, image_card, normalize, normalize_steps, orosz_witnesses
from sumdiff.intset import IntSet, affine_image, diffset, diffset_pairs, sumset, sumset_pairs
from sumdiff.mstd import COUNTEREXAMPLE, LiftParams, lift
from sumdiff.output import payload_bytes
from sumdiff.poly import ModSet, parse_poly, probe_mfg
from sumdiff.repfn import rep_enumerate, rep_profile


def report(label: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, detail


def interval_minus(lo, hi, holes):
    return IntSet(x for x in range(lo, hi + 1) if x not in holes)


def best_time(fn, repeats=7):
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def test_ac1_counterexample():
    payload, secs = best_time(lambda: _verify_payload(COUNTEREXAMPLE))
    got = (payload["sum_card"], payload["diff_card"], payload["class"])
    ok = got == (26, 25, "sum-dominant") and secs < 1e-3
    report("AC1 counterexample verify", ok, f"{got}, {secs * 1e3:.3f} ms (limit 1 ms)")


def test_ac2_five_element():
    A = IntSet([0, 2, 3, 4, 7])
    S, D = sumset(A, A), diffset(A, A)
    ok = S == interval_minus(0, 14, {1, 12, 13}) and D == interval_minus(-7, 7, {-6, 6}) and (len(S), len(D)) == (12, 13)
    report("AC2 five-element example", ok, f"|A+A|={len(S)}, |A-A|={len(D)}")


def test_ac3_lift():
    details, ok = [], True
    for t in (2, 3):
        t0 = time.perf_counter()
        At = lift(COUNTEREXAMPLE, LiftParams(29, t))
        s, d = len(sumset(At, At)), len(diffset(At, At))
        secs = time.perf_counter() - t0
        ok &= (s, d) == (26 ** t, 25 ** t)
        if t == 3:
            ok &= secs < 10
        details.append(f"t={t}: {s}/{d} in {secs:.3f}s")
    report("AC3 lift identities", ok, "; ".join(details))


def test_ac4_orosz():
    t0 = time.perf_counter()
    bad = []
    pairs = 0
    for u in range(3, 21):
        for v in range(1, u):
            if math.gcd(u, v) != 1:
                continue
            pairs += 1
            A, B = orosz_witnesses(u, v)
            f, g = BinaryForm(u, v), BinaryForm(u, -v)
            if (image_card(f, A), image_card(g, A), image_card(f, B), image_card(g, B)) != (14, 13, 13, 14):
                bad.append((u, v))
    A, B = orosz_witnesses(2, 1)
    f, g = BinaryForm(2, 1), BinaryForm(2, -1)
    if (image_card(f, A), image_card(g, A), image_card(f, B), image_card(g, B)) != (13, 12, 13, 14):
        bad.append((2, 1))
    secs = time.perf_counter() - t0
    report("AC4 Orosz witnesses", not bad and secs < 1.0, f"{pairs + 1} pairs, failures {bad}, {secs:.3f}s (limit 1 s)")


def test_ac5_census():
    small_ok = all(census(n).per_k == census_pairs(n) and census(n).f_n == 0 for n in range(1, 9))

    t0 = time.perf_counter()
    r15 = census(15)
    t15 = time.perf_counter() - t0
    ok15 = r15.f_n >= 1 and COUNTEREXAMPLE in r15.witnesses

    workers = min(8, os.cpu_count() or 1)
    t0 = time.perf_counter()
    r20s = census(20, shards=8, workers=workers)
    t20 = time.perf_counter() - t0
    r20 = census(20)
    same = r20s.payload() | {"shards": None} == r20.payload() | {"shards": None}

    ok = small_ok and ok15 and t15 < 5 and t20 < 300 and same
    report(
        "AC5 census",
        ok,
        f"f(n)=0 for n<=8 with both classifiers agreeing: {small_ok}; f(15)={r15.f_n} in {t15:.2f}s (limit 5 s); "
        f"f(20)={r20s.f_n} with 8 shards / {workers} workers in {t20:.1f}s (limit 300 s); sharded == unsharded: {same}",
    )


def test_ac6_oracles():
    mismatches = 0
    for mask in range(1 << 11):
        A = IntSet.from_mask(mask)
        mismatches += sumset(A, A) != sumset_pairs(A, A)
        mismatches += diffset(A, A) != diffset_pairs(A, A)
    rng = random.Random(2006)
    for _ in range(1000):
        A = IntSet(rng.sample(range(-15, 16), rng.randint(1, 9)))
        h = rng.choice((2, 3))
        mismatches += rep_profile(A, h, spot_checks=0).counts != rep_enumerate(A, h)
    for _ in range(1000):
        u, v = rng.choice([-1, 1]) * rng.randint(1, 30), rng.choice([-1, 1]) * rng.randint(1, 30)
        A = IntSet(rng.sample(range(-40, 41), rng.randint(0, 10)))
        mismatches += eval_nary(NaryForm((u, v)), A) != eval_form(BinaryForm(u, v), A)
    report("AC6 oracle equivalence", mismatches == 0, f"{mismatches} mismatches over 2048 + 1000 + 1000 cases")


def test_ac7_properties():
    rng = random.Random(408)
    violations = {"affine": 0, "symmetric": 0, "three-element": 0, "normalize": 0}
    for _ in range(10_000):
        A = IntSet(rng.sample(range(-50, 51), rng.randint(1, 10)))
        x, y = rng.randint(-10**6, 10**6), rng.choice([-1, 1]) * rng.randint(1, 1000)
        B = affine_image(A, x, y)
        violations["affine"] += (len(sumset(B, B)), len(diffset(B, B))) != (len(sumset(A, A)), len(diffset(A, A)))
    for _ in range(10_000):
        half = rng.sample(range(0, 40), rng.randint(1, 8))
        z = rng.randint(40, 120)
        S = IntSet(half + [z - a for a in half])
        violations["symmetric"] += len(sumset(S, S)) != len(diffset(S, S))
    for a, b, c in combinations(range(13), 3):
        if a + c != 2 * b:
            A = IntSet([a, b, c])
            violations["three-element"] += (len(sumset(A, A)), len(diffset(A, A))) != (6, 7)
    for _ in range(10_000):
        u, v = rng.choice([-1, 1]) * rng.randint(1, 60), rng.choice([-1, 1]) * rng.randint(1, 60)
        f = BinaryForm(u, v)
        A = IntSet(rng.sample(range(-20, 21), rng.randint(1, 7)))
        n = normalize(f)
        sizes = {len(eval_form(BinaryForm(*s), A)) for s in normalize_steps(f)}
        violations["normalize"] += normalize(n) != n or len(sizes) != 1 or not n.is_normalized
    report("AC7 property suites", not any(violations.values()), f"violations {violations}")


def test_ac8_modular():
    f, g = parse_poly("x+y").poly, parse_poly("x-y").poly
    r29 = probe_mfg(f, g, 29)
    r2, r3 = probe_mfg(f, g, 2), probe_mfg(f, g, 3)
    ok = (
        r29.status == "member"
        and r29.witness == ModSet.reduce(COUNTEREXAMPLE, 29)
        and (r29.f_card, r29.g_card) == (26, 25)
        and r2.status == r3.status == "non-member-exhaustive"
        and r2.examined >= 3 and r3.examined >= 7
    )
    report("AC8 modular transfer", ok,
           f"m=29 {r29.status} {r29.f_card} vs {r29.g_card}; m=2 {r2.status}; m=3 {r3.status}")


def test_ac9_determinism(tmp_path):
    argv = ["census", "--n", "16", "--shards", "4", "--witness-cap", "100"]
    same_cli = payload_bytes(execute(parse_cli(argv))[0]) == payload_bytes(execute(parse_cli(argv))[0])

    ckpt = tmp_path / "n18.json"
    half = 1 << 17
    interrupted = execute(parse_cli(["census", "--n", "18", "--checkpoint", str(ckpt), "--stop-after", str(half)]))[0]
    resumed = execute(parse_cli(["census", "--n", "18", "--checkpoint", str(ckpt)]))[0]
    straight = execute(parse_cli(["census", "--n", "18"]))[0]
    resume_ok = (
        interrupted.exhaustive is False
        and resumed.run["resumed"] is True
        and payload_bytes(resumed) == payload_bytes(straight)
    )
    report("AC9 determinism", same_cli and resume_ok,
           f"identical invocations byte-identical: {same_cli}; n=18 resume at 50% byte-identical: {resume_ok}")
