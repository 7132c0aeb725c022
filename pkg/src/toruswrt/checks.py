"""Runtime self-verification suite.

Each check exercises one mathematical invariant of the implementation with
fresh randomized inputs (seeded per check, so runs are reproducible) and
returns a pass/fail flag plus a human-readable detail line.  The suite backs
the ``verify`` service route and CLI subcommand.

Set ``TORUSWRT_THREADS`` to run independent checks on a thread pool; results
are always reported in registry order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from .algebra import (
    canonical_orbit,
    chebyshev_check,
    embed_threaded,
    fg_product,
    insertion_matrix,
    left_mult_matrix,
    orbit_count,
    reduce_index,
    root_of_unity,
    weyl_mul,
)
from .counting import (
    ColinearInstance,
    brute_force_count,
    decision_positive,
    dp_count_mod,
    estimate_coefficient,
    safe_modulus,
    signed_to_subset,
)
from .dp import brute_force_table, dense_trace_oracle, l1_norm, run_dp, wrt_trace
from .sim import SamplingPlan, SimState, block_submatrix, hadamard_test_coeff, hadamard_test_trace
from .sl2 import IDENTITY, S_MAT, T_MAT, decompose, evaluate, mat_mul
from .weil import (
    clock_shift_rank,
    rho,
    rho_s,
    rho_s_structured,
    rho_t,
    rho_t_inv,
    trace_pairing,
)

MATRIX_TOL = 1e-12
TRACE_TOL = 1e-9
ENVELOPE_PVALUE_FLOOR = 0.01


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


_REGISTRY: list[tuple[str, Callable[[], tuple[bool, str]]]] = []


def _check(name: str):
    def wrap(fn: Callable[[], tuple[bool, str]]):
        _REGISTRY.append((name, fn))
        return fn

    return wrap


def _rng(tag: str) -> np.random.Generator:
    return np.random.default_rng(abs(hash(tag)) % (1 << 32))


def _rand_pair(rng: np.random.Generator, bound: int = 50) -> tuple[int, int]:
    return (int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))


def _rand_sl2(rng: np.random.Generator, letters: int) -> tuple[int, int, int, int]:
    word = [("S", "T", "Tinv")[int(rng.integers(3))] for _ in range(letters)]
    return evaluate(word)


@_check("weyl-associativity")
def _weyl_associativity() -> tuple[bool, str]:
    rng = _rng("weyl-associativity")
    worst = 0
    for n in (3, 5, 7):
        for _ in range(200):
            v, w, x = (_rand_pair(rng) for _ in range(3))
            ph1, vw = weyl_mul(v, w, n)
            ph1b, vwx = weyl_mul(vw, x, n)
            left = ((ph1 + ph1b) % n, vwx)
            ph2, wx = weyl_mul(w, x, n)
            ph2b, vwx2 = weyl_mul(v, wx, n)
            right = ((ph2 + ph2b) % n, vwx2)
            if left != right:
                worst += 1
            if weyl_mul(v, (0, 0), n) != (0, reduce_index(v, n)):
                worst += 1
    return worst == 0, f"{worst} associativity/identity violations over 600 triples"


@_check("product-rule-dense")
def _product_rule_dense() -> tuple[bool, str]:
    rng = _rng("product-rule-dense")
    worst = 0.0
    for n in (3, 5):
        for _ in range(20):
            v, w = _rand_pair(rng, 6), _rand_pair(rng, 6)
            lhs = insertion_matrix(v, n) @ insertion_matrix(w, n)
            rhs = np.zeros_like(lhs)
            for expo, term in fg_product(v, w):
                t_pow = root_of_unity(n) ** (expo % n)
                rhs = rhs + t_pow * sum(
                    mult * left_mult_matrix(idx, n) for mult, idx in embed_threaded(term, n)
                )
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst <= MATRIX_TOL, f"max |B_v B_w - sum| = {worst:.2e}"


@_check("chebyshev-threading")
def _chebyshev_threading() -> tuple[bool, str]:
    failures = []
    for n in (3, 5):
        for gamma in ((1, 0), (0, 1), (1, 1), (2, 1), (1, -2)):
            for d in range(6):
                ok, resid = chebyshev_check(d, gamma, n)
                if not ok:
                    failures.append((n, gamma, d, resid))
    return not failures, f"{len(failures)} failures over 60 (degree, curve, level) combos"


@_check("orbit-count")
def _orbit_count() -> tuple[bool, str]:
    bad = []
    for n in (3, 5, 7, 9, 11):
        orbits = {canonical_orbit((p, s), n) for p in range(n) for s in range(n)}
        if len(orbits) != orbit_count(n):
            bad.append((n, len(orbits)))
    return not bad, f"distinct orbits vs (N^2+1)/2 for N in 3..11: mismatches {bad}"


@_check("sl2-roundtrip")
def _sl2_roundtrip() -> tuple[bool, str]:
    rng = _rng("sl2-roundtrip")
    worst_len = 0
    for _ in range(300):
        g = _rand_sl2(rng, int(rng.integers(0, 30)))
        word = decompose(g)
        if evaluate(word) != g:
            return False, f"round trip failed for {g}"
        worst_len = max(worst_len, len(word))
    if decompose(IDENTITY) != []:
        return False, "identity should decompose to the empty word"
    if evaluate(decompose((-1, 0, 0, -1))) != (-1, 0, 0, -1):
        return False, "-I round trip failed"
    return True, f"300 random round trips exact; longest word {worst_len}"


@_check("sl2-relations")
def _sl2_relations() -> tuple[bool, str]:
    s4 = mat_mul(mat_mul(S_MAT, S_MAT), mat_mul(S_MAT, S_MAT))
    st = mat_mul(S_MAT, T_MAT)
    st3 = mat_mul(mat_mul(st, st), st)
    ok = s4 == IDENTITY and st3 == (-1, 0, 0, -1)
    return ok, f"S^4 = {s4}, (ST)^3 = {st3}"


@_check("weil-unitarity")
def _weil_unitarity() -> tuple[bool, str]:
    worst = 0.0
    for n in (3, 5, 7):
        eye = np.eye(n * n)
        for mat in (rho_s(n), rho_t(n)):
            worst = max(worst, float(np.abs(mat @ mat.conj().T - eye).max()))
        s = rho_s(n)
        worst = max(worst, float(np.abs(np.linalg.matrix_power(s, 4) - eye).max()))
        worst = max(worst, float(np.abs(s @ s - eye).max()))
        worst = max(worst, float(np.abs(rho_s_structured(n) - s).max()))
        worst = max(worst, float(np.abs(rho_t(n) @ rho_t_inv(n) - eye).max()))
    return worst <= MATRIX_TOL, f"max residual over unitarity/S^4/S^2/structured/T-inverse = {worst:.2e}"


@_check("weil-trace-pairing")
def _weil_trace_pairing() -> tuple[bool, str]:
    rng = _rng("weil-trace-pairing")
    worst = 0.0
    for n in (3, 5):
        for _ in range(5):
            g = _rand_sl2(rng, int(rng.integers(0, 8)))
            mat = rho(g, n)
            tau = trace_pairing(g, n)
            for wp in range(n):
                for ws in range(n):
                    direct = np.trace(mat @ left_mult_matrix((wp, ws), n))
                    worst = max(worst, abs(tau[wp, ws] - direct))
    return worst <= TRACE_TOL, f"max |pairing - Tr(rho L)| = {worst:.2e}"


@_check("clock-shift-rank")
def _clock_shift_rank() -> tuple[bool, str]:
    got = {n: clock_shift_rank(n) for n in (3, 5, 7)}
    want = {3: 5, 5: 13, 7: 25}
    return got == want, f"spanned dimensions {got} (want {want})"


@_check("dp-kernels-agree")
def _dp_kernels_agree() -> tuple[bool, str]:
    rng = _rng("dp-kernels-agree")
    worst = 0.0
    for n in (3, 5, 7):
        for _ in range(10):
            m = int(rng.integers(0, 7))
            ins = [_rand_pair(rng, 8) for _ in range(m)]
            vec = run_dp(ins, n, kernel="vector")
            sca = run_dp(ins, n, kernel="scalar")
            bf = brute_force_table(ins, n)
            worst = max(worst, float(np.abs(vec - sca).max()), float(np.abs(vec - bf).max()))
    return worst <= TRACE_TOL, f"max spread across vector/scalar/brute tables = {worst:.2e}"


@_check("dp-vs-dense-trace")
def _dp_vs_dense_trace() -> tuple[bool, str]:
    rng = _rng("dp-vs-dense-trace")
    worst = 0.0
    for n in (3, 5):
        for _ in range(8):
            g = _rand_sl2(rng, int(rng.integers(0, 8)))
            ins = [_rand_pair(rng, 5) for _ in range(int(rng.integers(0, 4)))]
            worst = max(worst, abs(wrt_trace(g, ins, n) - dense_trace_oracle(g, ins, n)))
    return worst <= 1e-8, f"max |DP trace - dense oracle| = {worst:.2e}"


@_check("dp-l1-growth")
def _dp_l1_growth() -> tuple[bool, str]:
    rng = _rng("dp-l1-growth")
    for n in (5, 7):
        ins = [_rand_pair(rng, 10) for _ in range(12)]
        table = run_dp(ins, n)
        if l1_norm(table) > 2.0 ** len(ins) + 1e-6:
            return False, f"L1 norm {l1_norm(table):.3f} exceeds 2^m at N={n}"
    return True, "coefficient L1 norm bounded by 2^m"


@_check("sim-modular-letters")
def _sim_modular_letters() -> tuple[bool, str]:
    worst = 0.0
    for n in (3, 5, 7):
        dense = {"S": rho_s(n), "T": rho_t(n), "Tinv": rho_t_inv(n)}
        for letter, want in dense.items():
            state = SimState.data_batch(n, 0)
            state.apply_modular(letter)
            got = state.amps[:, 0, :, :].reshape(n * n, n * n).T
            worst = max(worst, float(np.abs(got - want).max()))
    return worst <= MATRIX_TOL, f"max |circuit letter - dense generator| = {worst:.2e}"


@_check("sim-block-encoding")
def _sim_block_encoding() -> tuple[bool, str]:
    rng = _rng("sim-block-encoding")
    worst = 0.0
    for n in (3, 5):
        for _ in range(5):
            m = int(rng.integers(0, 4))
            ins = [_rand_pair(rng, 6) for _ in range(m)]
            got = block_submatrix(ins, n)
            want = np.eye(n * n, dtype=complex)
            for v in ins:
                want = 0.5 * insertion_matrix(v, n) @ want
            worst = max(worst, float(np.abs(got - want).max()))
    return worst <= MATRIX_TOL, f"max |<0|circuit|0> - 2^-m prod L| = {worst:.2e}"


@_check("sim-trace-exact")
def _sim_trace_exact() -> tuple[bool, str]:
    rng = _rng("sim-trace-exact")
    worst = 0.0
    for n in (3, 5, 7):
        for _ in range(6):
            g = _rand_sl2(rng, int(rng.integers(0, 8)))
            m = int(rng.integers(0, 4))
            ins = [_rand_pair(rng, 6) for _ in range(m)]
            report = hadamard_test_trace(g, ins, n, mode="exact")
            want = 0.5**m * wrt_trace(g, ins, n) / n**2
            worst = max(worst, abs(complex(report.estimate_re, report.estimate_im) - want))
    return worst <= TRACE_TOL, f"max |circuit observable - 2^-m Z/N^2| = {worst:.2e}"


@_check("coeff-circuit-exact")
def _coeff_circuit_exact() -> tuple[bool, str]:
    rng = _rng("coeff-circuit-exact")
    worst = 0.0
    for _ in range(20):
        m = int(rng.integers(1, 8))
        inst = ColinearInstance([int(rng.integers(-6, 7)) for _ in range(m)], int(rng.integers(-8, 9)))
        n = int(rng.choice([3, 5, 7, 11, 31]))
        report = hadamard_test_coeff(list(inst.a), inst.z, n, mode="exact")
        want = dp_count_mod(inst, n) / 2**m
        worst = max(worst, abs(report.estimate_re - want))
        if n > inst.wrap_bound and dp_count_mod(inst, n) != brute_force_count(inst):
            return False, f"aliasing-free level disagreed with brute force on {inst}"
    return worst <= TRACE_TOL, f"max |circuit - 2^-m c_N(z)| = {worst:.2e}"


@_check("counting-wraparound")
def _counting_wraparound() -> tuple[bool, str]:
    n = 5
    inst = ColinearInstance([n], 0)
    folded = dp_count_mod(inst, n)
    true = brute_force_count(inst)
    fixed_level = safe_modulus(inst)
    fixed = dp_count_mod(inst, fixed_level)
    ok = folded == 2 and true == 0 and fixed_level > inst.wrap_bound and fixed == 0
    return ok, (
        f"a=[{n}], z=0: folded count {folded} != true count {true}; "
        f"level {fixed_level} restores {fixed}"
    )


@_check("subset-sum-map")
def _subset_sum_map() -> tuple[bool, str]:
    rng = _rng("subset-sum-map")
    for _ in range(100):
        m = int(rng.integers(1, 10))
        inst = ColinearInstance([int(rng.integers(-9, 10)) for _ in range(m)], int(rng.integers(-12, 13)))
        count = brute_force_count(inst)
        if decision_positive(inst) != (count > 0):
            return False, f"decision mismatch on {inst}"
        target = signed_to_subset(inst)
        if target is None and count != 0:
            return False, f"parity obstruction missed on {inst}"
        if target is not None:
            hit = any(
                sum(ai for ai, b in zip(inst.a, fmt) if b == "1") == target
                for fmt in (format(k, f"0{m}b") for k in range(1 << m))
            )
            if hit != (count > 0):
                return False, f"subset-sum map mismatch on {inst}"
    return True, "decision and subset-sum reduction agree with brute force on 100 instances"


@_check("sample-envelope")
def _sample_envelope() -> tuple[bool, str]:
    epsilon, delta, trials = 0.1, 0.05, 60
    plan_base = SamplingPlan(epsilon=epsilon, delta=delta)
    inst = ColinearInstance([1, 2, 2, 3], 2)
    n = safe_modulus(inst)
    exact = estimate_coefficient(inst, level=n, mode="exact").alpha
    misses = 0
    for seed in range(trials):
        plan = SamplingPlan(epsilon=epsilon, delta=delta, seed=seed)
        est = estimate_coefficient(inst, level=n, plan=plan, mode="sample").alpha
        if abs(est - exact) > epsilon:
            misses += 1
    pvalue = float(binomtest(misses, trials, delta, alternative="greater").pvalue)
    # also exercise the trace-circuit sampler
    rep_exact = hadamard_test_trace(T_MAT, [(1, 0)], 5, mode="exact")
    rep_sample = hadamard_test_trace(
        T_MAT, [(1, 0)], 5, plan=SamplingPlan(epsilon=0.1, delta=0.05, seed=7), mode="sample"
    )
    trace_ok = (
        abs(rep_sample.estimate_re - rep_exact.estimate_re) <= 0.15
        and abs(rep_sample.estimate_im - rep_exact.estimate_im) <= 0.15
        and rep_sample.shots_used == 2 * plan_base.shots
    )
    ok = pvalue > ENVELOPE_PVALUE_FLOOR and trace_ok
    return ok, (
        f"{misses}/{trials} misses beyond eps={epsilon} (binomial p={pvalue:.3f}); "
        f"trace sampler within 1.5 eps of exact"
    )


@_check("shot-count")
def _shot_count() -> tuple[bool, str]:
    plan = SamplingPlan(epsilon=0.05, delta=0.01)
    want = math.ceil(2.0 * math.log(2.0 / 0.01) / 0.05**2)
    return plan.shots == want, f"shots = {plan.shots} (formula gives {want})"


def check_names() -> list[str]:
    return [name for name, _ in _REGISTRY]


def run_checks(names: list[str] | None = None, threads: int | None = None) -> list[CheckResult]:
    """Run the (optionally filtered) suite, in registry order."""
    selected = [(n, f) for n, f in _REGISTRY if names is None or n in names]
    if names is not None:
        unknown = set(names) - {n for n, _ in _REGISTRY}
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
    if threads is None:
        threads = int(os.environ.get("TORUSWRT_THREADS", "1"))

    def run_one(item: tuple[str, Callable[[], tuple[bool, str]]]) -> CheckResult:
        name, fn = item
        begin = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        return CheckResult(name=name, passed=passed, detail=detail, elapsed=time.perf_counter() - begin)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_one, selected))
    return [run_one(item) for item in selected]
