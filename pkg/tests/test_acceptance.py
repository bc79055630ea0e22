"""Acceptance criteria.  Every equality is exact over the rationals.

Run alone with ``pytest tests/test_acceptance.py -s`` to see one line per criterion.
"""

import random
from fractions import Fraction as F

import pytest

from cnlattice.distribution import enumerate_paths, evolve
from cnlattice.exact import leibniz_determinant
from cnlattice.instances import (
    constant_kernel,
    random_boundary_site,
    random_kernel,
    random_rational,
    random_symmetric_kernel,
    random_upper_function,
    upper_reach,
)
from cnlattice.kernel import StepKernel, is_reflection_symmetric, reflect
from cnlattice.lattice import SupportPoint, is_member, l1_ball, support_set
from cnlattice.montecarlo import mc_hedge
from cnlattice.transform import (
    LatticeFunction,
    Sign,
    build_system,
    coefficients_via_solve,
    cramer_coefficients,
    determinant,
    transform_at,
)
from cnlattice.verify import barrier_parity, check_consistency, check_reflection, check_theorem, check_uniqueness

pytestmark = pytest.mark.acceptance

FAMILY_SIZE = 240
PAYOFFS_PER_INSTANCE = 5
MAX_T = {1: 6, 2: 6, 3: 4}


@pytest.fixture(scope="module")
def family():
    """Random (kernel, t, x) instances spanning d in {1, 2, 3}."""
    out = []
    for i in range(FAMILY_SIZE):
        rng = random.Random(f"acceptance/{i}")
        d = 1 + i % 3
        t = rng.randint(1, MAX_T[d])
        x = random_boundary_site(rng, d)
        out.append((rng, random_kernel(rng, d, x, t + 1), t, x))
    return out


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert ok, detail

    return emit


def test_c1_determinant_formula(family, report):
    checked = leibniz_checked = 0
    failures = []
    for _, kernel, t, x in family:
        for sign in Sign:
            system = build_system(kernel, t, x, sign)
            product = F(1)
            for p in system.index:
                product *= evolve(kernel, p.y, p.s)[p.upper() if sign is Sign.PLUS else p.lower()]
            det = determinant(system)
            ok = det == product and det > 0 and system.is_lower_triangular()
            if system.n <= 7:
                ok = ok and leibniz_determinant(system.entries) == det
                leibniz_checked += 1
            checked += 1
            if not ok:
                failures.append((t, x, sign))
    assert checked >= 400
    report(1, "det W = product of diagonal entries", not failures,
           f"{checked} systems, {leibniz_checked} by full permutation expansion, {len(failures)} failures")


def test_c2_main_identity(family, report):
    total = 0
    failures = []
    for i, (_, kernel, t, x) in enumerate(family):
        rng = random.Random(f"c2/{i}")
        for _ in range(PAYOFFS_PER_INSTANCE):
            r = check_theorem(kernel, t, x, random_upper_function(rng, upper_reach(t, x)))
            total += 1
            if r.lhs - r.rhs != 0:
                failures.append(r.instance)
    report(2, "E f(Z_t^x) = E Nf(Z_t^x)", not failures, f"{total} instances, {len(failures)} failures")


def test_c3_explicit_form(family, report):
    compared = 0
    failures = []
    for _, kernel, t, x in family:
        if len(support_set(t, x)) > 7:
            continue
        compared += 1
        if cramer_coefficients(kernel, t, x) != coefficients_via_solve(kernel, t, x):
            failures.append((t, x))
    assert compared >= 100
    report(3, "Cramer coefficients = solved coefficients", not failures, f"{compared} tables, {len(failures)} failures")


def test_c4_consistency(family, report):
    total = 0
    failures = 0
    for _, kernel, t, x in family:
        for r in check_consistency(kernel, t, x):
            total += 1
            failures += not r.passed
    report(4, "nested anchors agree", failures == 0, f"{total} comparisons, {failures} failures")


def test_c5_uniqueness(family, report):
    total = 0
    failures = []
    for i, (_, kernel, t, x) in enumerate(family[:150]):
        rng = random.Random(f"c5/{i}")
        p = rng.choice(support_set(t, x).points)
        eps = random_rational(rng, allow_zero=False)
        f = random_upper_function(rng, upper_reach(t, x))
        r = check_uniqueness(kernel, t, x, f, p.lower(), eps)
        total += 1
        expected = eps * evolve(kernel, p.y, p.s)[p.lower()]
        if not (r.passed and r.lhs - r.rhs == expected != 0):
            failures.append(r.instance)
    assert total >= 100
    report(5, "single-site perturbations detected", not failures, f"{total} perturbations, {len(failures)} missed")


def test_c6_reflection_recovery(report):
    reflection_reports = 0
    failures = 0
    kernels = [(StepKernel.uniform(1), 6), (StepKernel.uniform(2), 6), (StepKernel.uniform(3), 4)]
    for i in range(3):
        for d, horizon in [(1, 6), (2, 6), (3, 4)]:
            rng = random.Random(f"c6/{i}/{d}")
            kernels.append((random_symmetric_kernel(rng, d, radius=horizon + 1), horizon))
    for kernel, horizon in kernels:
        x = (0,) * kernel.dimension
        assert is_reflection_symmetric(kernel, horizon, x)
        for r in check_reflection(kernel, horizon, x):
            reflection_reports += 1
            failures += not r.passed
        # Direct evaluation on a random payoff as well.
        rng = random.Random(f"c6f/{kernel.dimension}/{horizon}")
        f = random_upper_function(rng, upper_reach(horizon, x))
        for p in support_set(horizon, x):
            z = p.lower()
            reflection_reports += 1
            failures += transform_at(kernel, z, f) != f[reflect(z)]

    bias_failures = 0
    for p, q in [(F(2, 3), F(1, 3)), (F(3, 4), F(1, 4)), (F(1, 5), F(4, 5)), (F(5, 12), F(7, 12))]:
        kernel = constant_kernel([p, q])
        for t in range(1, 7):
            table = coefficients_via_solve(kernel, t, (0,))
            for pt, c in table.coeffs.items():
                bias_failures += c != ((p / q) ** t if pt == SupportPoint(t, (0,)) else 0)
    ok = failures == 0 and bias_failures == 0
    report(6, "reflection recovery and constant-bias scaling", ok,
           f"{reflection_reports} reflection checks, {failures} + {bias_failures} failures")


def test_c7_barrier_parity(family, report):
    worked = barrier_parity(constant_kernel([F(1, 2), F(1, 2)]), (1,), 2, LatticeFunction.indicator((1,)))
    assert worked.lhs == worked.rhs == F(1, 4)
    total = 1
    failures = []
    for i, (_, kernel, t, x) in enumerate(family[:150]):
        rng = random.Random(f"c7/{i}")
        T = rng.randint(1, 6 if kernel.dimension < 3 else 4)
        x0 = x[:-1] + (rng.randint(1, T + 1),)
        kernel = random_kernel(rng, kernel.dimension, x0, T + 1)
        f = random_upper_function(rng, sorted(z for z in evolve(kernel, x0, T) if z[-1] > 0))
        r = barrier_parity(kernel, x0, T, f)
        total += 1
        if r.lhs - r.rhs != 0:
            failures.append(r.instance)
    assert total >= 101
    report(7, "E[f; tau > T] = E f - E Nf", not failures, f"{total} instances incl. worked 1/4 example, {len(failures)} failures")


MC_INSTANCES = [
    (constant_kernel([F(1, 2), F(1, 2)]), (1,), 2, {(1,): 1}),
    (constant_kernel([F(2, 3), F(1, 3)]), (1,), 3, {(2,): 1, (4,): F(1, 2)}),
    (constant_kernel([F(1, 4), F(3, 4)]), (2,), 4, {(2,): 1, (4,): 3}),
    (StepKernel.uniform(2), (0, 1), 4, {(0, 1): 2, (1, 2): -1, (0, 3): F(1, 2)}),
    (random_kernel(random.Random("mc5"), 2, (0, 2), 6), (0, 2), 5, {(1, 1): 1, (-1, 3): 2, (0, 2): F(-1, 3)}),
]


def test_c8_monte_carlo(report):
    n = 100_000
    summary = []
    ok = True
    for kernel, x0, T, values in MC_INSTANCES:
        f = LatticeFunction(values)
        good = 0
        for seed in range(20):
            r = mc_hedge(kernel, x0, T, f, n, seed)
            lhs_ok = abs(r.knocked_out.value - float(r.exact_knocked_out)) <= 4 * r.knocked_out.std_error
            rhs_ok = abs(r.static_hedge.value - float(r.exact_static_hedge)) <= 4 * r.static_hedge.std_error
            good += lhs_ok and rhs_ok
        rerun_a = mc_hedge(kernel, x0, T, f, n, 1234)
        rerun_b = mc_hedge(kernel, x0, T, f, n, 1234)
        ok = ok and good >= 19 and rerun_a == rerun_b
        summary.append(f"{good}/20")
    report(8, "MC within 4 s.e. in >= 19/20 runs, reruns bit-identical", ok, ", ".join(summary))


def test_c9_cover_lemma(family, report):
    total = 0
    failures = []
    for _, kernel, t, x in family:
        law = evolve(kernel, x, t)
        for s in range(1, t + 2):
            for head in l1_ball(x[:-1], t + 1):
                y = head + (0,)
                member = is_member(t, x, s, y)
                up = law[head + (s,)] > 0
                down = law[head + (-s,)] > 0
                total += 1
                if not (member == up == down):
                    failures.append((t, x, s, y))
    # The brute-force path law agrees on the small instances.
    for _, kernel, t, x in family[:60]:
        if kernel.dimension == 1 or t <= 4:
            law = enumerate_paths(kernel, x, t)
            assert sorted(p.upper() for p in support_set(t, x)) == sorted(z for z in law if z[-1] > 0)
    report(9, "membership in S(t,x) iff both y +/- s e_d reachable", not failures, f"{total} pairs, {len(failures)} failures")
