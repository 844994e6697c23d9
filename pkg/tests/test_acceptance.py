"""Acceptance suite: one PASS/FAIL line per criterion, with tolerances and time limits.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from ezreduce.chains import (  # noqa: E402
    FormalSum, ProductSimplex, check_contraction, differential, simplicial_chains, tensor_differential,
)
from ezreduce.ez import alpha_map, aw_n_counts, esa, ez_contraction, naive_dnr  # noqa: E402
from ezreduce.homology import compute_contraction, operation_matrix  # noqa: E402
from ezreduce.simplicial import Simplex, bundled  # noqa: E402
from ezreduce.simplifier import (  # noqa: E402
    IntervalTerm, SignExpression, count_face_operators, evaluate_formula, evaluate_term, generate_dnr,
    is_all_degenerate, seed_awn,
)
from ezreduce.steenrod import OperationRequest  # noqa: E402

PAIRS = [(2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]


def record(number, title, ok, elapsed, limit, detail=""):
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] {number}. {title}: {detail} ({elapsed:.1f} s, limit {limit} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def _test_simplices():
    out = []
    for name in ("s3", "rp2"):
        K = bundled(name)
        for q in range(min(K.dim, 4) + 1):
            out.extend(K.nondegenerate(q))
    return out


def test_1_ez_contraction_axioms():
    t = time.perf_counter()
    C = simplicial_chains(bundled("sphere"))
    checked, failures = 0, []
    for p in (2, 3):
        rep = check_contraction(ez_contraction(C, C), p, 3, fg_identity=True)
        checked += rep.checked
        failures += rep.failures
    record(1, "EZ-contraction axioms on the boundary of the 3-simplex, Z_2 and Z_3", not failures,
           time.perf_counter() - t, 10, f"{checked} basis elements checked, {len(failures)} failures")


def test_2_oracle_equivalence():
    t = time.perf_counter()
    simplices = _test_simplices()
    bad = []
    count = 0
    for p in (2, 3):
        for n, r in PAIRS:
            F = generate_dnr(n, r)
            for x in simplices:
                count += 1
                if evaluate_formula(F, x, p) != naive_dnr(n, r, FormalSum.basis(x, p)):
                    bad.append((p, n, r, x))
    record(2, "face-only D^n_r equals the operator composition", not bad, time.perf_counter() - t, 300,
           f"{count} comparisons over {len(simplices)} simplices, {len(bad)} mismatches")


def test_3_golden_formulas():
    t = time.perf_counter()
    from make_golden import GOLDEN, render
    from reference_forms import d1_terms, d2_terms, layout_of, well_formed

    stale = [name for name, text in render().items() if (GOLDEN / name).read_text(encoding="utf-8") != text]
    d1_ok = all({layout_of(u): u.sign for u in generate_dnr(n, 1).terms}
                == {lay: s for _, lay, s in d1_terms(n)} for n in (2, 3, 4))
    missing = 0
    for n in (2, 3, 4):
        layouts = {layout_of(u) for u in generate_dnr(n, 2).terms}
        missing += sum(1 for _, lay, _ in d2_terms(n) if well_formed(lay, n, n + 2) and lay not in layouts)
    record(3, "golden D^n_1 and D^n_2 formulas", not stale and d1_ok and not missing,
           time.perf_counter() - t, 10,
           f"{len(stale)} stale files, D_1 closed form {'exact' if d1_ok else 'differs'}, "
           f"{missing} reference D_2 layouts not generated (D_2 sign differences recorded in the golden comparison)")


def _formula_value(n, r, c):
    if r < 0:
        return FormalSum(c.p)
    return evaluate_formula(generate_dnr(n, r), c)


def test_4_recurrence():
    t = time.perf_counter()
    bad = []
    count = 0
    for p in (2, 3):
        for n, r in PAIRS:
            for x in _test_simplices():
                count += 1
                c = FormalSum.basis(x, p)
                sign = -1 if (r - 1) % 2 else 1
                lhs = tensor_differential(_formula_value(n, r, c)) + _formula_value(n, r, differential(c)).scale(sign)
                rhs = alpha_map(n, r, _formula_value(n, r - 1, c)) if r > 0 else FormalSum(p)
                if lhs != rhs:
                    bad.append((p, n, r, x))
    record(4, "recurrence d D_r + (-1)^(r-1) D_r d = alpha_r D_(r-1)", not bad, time.perf_counter() - t, 120,
           f"{count} checks (r = 0 is the chain-map condition), {len(bad)} failures")


def test_5_complexity():
    t = time.perf_counter()
    problems = []
    # AW_(n): exact summand count, face count against the direct expansion, O(n m^n) shape
    for n in range(2, 5):
        prev = None
        for m in range(0, 9):
            summands, faces = aw_n_counts(n, m)
            C = math.comb(m + n - 1, n - 1)
            if summands != C or faces != (n - 1) * m * C or faces != count_face_operators(seed_awn(n), m):
                problems.append(("aw_n count", n, m))
            if m >= 1:
                ratio = faces / (n * m ** n)
                if prev is not None and ratio > prev:
                    problems.append(("aw_n shape", n, m))
                prev = ratio
    # D^p_r: constant fitted on m <= 3, bound checked on m = 4..6
    worst = 0.0
    for p in (2, 3):
        for r in range(0, 3):
            F = generate_dnr(p, r)
            bound = lambda m: p ** (r + 1) * m ** (p + r + 1)
            c = max(count_face_operators(F, m) / bound(m) for m in range(1, 4))
            for m in range(4, 7):
                ratio = count_face_operators(F, m) / (c * bound(m))
                worst = max(worst, ratio)
                if ratio > 1:
                    problems.append(("D bound", p, r, m))
    record(5, "face-operator counts", not problems, time.perf_counter() - t, 60,
           f"aw_n exact for n <= 4, m <= 8; D^p_r counts at m = 4..6 reach {worst:.2f} of the bound "
           f"fitted on m <= 3; {len(problems)} violations")


def test_6_topology():
    t = time.perf_counter()
    expected = {("circle", 2): (1, 1), ("sphere", 2): (1, 0, 1), ("torus", 2): (1, 2, 1),
                ("rp2", 2): (1, 1, 1), ("rp2", 3): (1, 0, 0)}
    problems = []
    for (name, p), ranks in expected.items():
        if compute_contraction(bundled(name), p).ranks != ranks:
            problems.append(f"ranks {name} Z_{p}")
    for name in ("circle", "sphere", "s3", "rp2", "torus"):
        H = compute_contraction(bundled(name), 2)
        for q in range(H.K.dim + 1):
            M = operation_matrix(OperationRequest(2, "square", 0, q), H)
            if M.tolist() != [[int(i == j) for j in range(H.rank(q))] for i in range(H.rank(q))]:
                problems.append(f"Sq^0 {name} H^{q}")
    if not operation_matrix(OperationRequest(2, "square", 1, 1), bundled("rp2")).any():
        problems.append("Sq^1 on RP^2")
    if operation_matrix(OperationRequest(2, "square", 1, 1), bundled("torus")).any():
        problems.append("Sq^1 on the torus")
    record(6, "homology ranks and Steenrod square regressions", not problems, time.perf_counter() - t, 30,
           "all exact" if not problems else ", ".join(problems))


def _random_term(rng, n, r):
    """Random well-shaped term: every slot used once, slots in a factor increasing and non-consecutive."""
    N = n + r
    while True:
        owner = [rng.randrange(n) for _ in range(N)]
        if len(set(owner)) < n:
            continue
        slots = [tuple(j + 1 for j in range(N) if owner[j] == f) for f in range(n)]
        if any(b - a < 2 for s in slots for a, b in zip(s, s[1:])):
            continue
        coords = list(range(1, n + 1))
        rng.shuffle(coords)
        monos = frozenset(frozenset(rng.sample(range(1, N + 1), rng.randrange(0, 3))) for _ in range(rng.randrange(4)))
        term = IntervalTerm(n, r, tuple(zip(coords, slots)), SignExpression(monos))
        term.check_shape()
        return term


def test_7_degeneracy_soundness():
    t = time.perf_counter()
    rng = random.Random(20261019)
    esa_cache = {}
    flagged, nonzero, drawn = 0, [], 0
    control = [0, 0]  # unflagged terms evaluated at m = 3, and how many of them are nonzero

    def value(h, n, ell, m):
        key = (n, ell, m)
        if key not in esa_cache:
            x = ProductSimplex(Simplex(range(10 * j, 10 * j + m + 1)) for j in range(n))
            esa_cache[key] = esa(n, ell, FormalSum.basis(x, 3))
        out = FormalSum(3)
        for y, k in esa_cache[key].terms.items():
            evaluate_term(h, y, 3, k, out)
        return out

    while flagged < 1000:
        n = rng.randrange(2, 5)
        r = rng.randrange(0, 3)
        ell = rng.randrange(0, n - 1)
        h = _random_term(rng, n, r)
        drawn += 1
        if not is_all_degenerate(h, ell):
            if control[0] < 200:
                control[0] += 1
                control[1] += bool(value(h, n, ell, 3))
            continue
        flagged += 1
        for m in range(0, 4):
            if value(h, n, ell, m):
                nonzero.append((h, ell, m))
    record(7, "terms flagged as degenerate vanish under the oracle", not nonzero, time.perf_counter() - t, 60,
           f"{flagged} flagged terms (of {drawn} drawn) at m = 0..3, {len(nonzero)} nonzero; "
           f"control: {control[1]} of {control[0]} unflagged terms are nonzero at m = 3")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
