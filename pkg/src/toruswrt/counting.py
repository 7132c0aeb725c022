"""Signed-sum counting via coefficient estimation.

For integers a_1..a_m and a target z, the count

    c(z) = #{ eps in {+-1}^m : sum_i eps_i a_i = z }

equals the coefficient of e_{(z,0)} in prod_i B_{(a_i, 0)} taken over the
integers.  Working at level N folds the count modulo N,

    c_N(z) = sum_{k = z mod N} c(k),

which agrees with c(z) exactly whenever N exceeds the wraparound bound
B = sum_i |a_i| + |z| (every reachable signed sum then stays in a window
shorter than N).  The Hadamard-test coefficient circuit therefore estimates
c(z) to additive precision eps * 2^m once an aliasing-free level is chosen.

The classical cross-checks here are exponential-time brute force (small m)
and an exact O(m * B) dynamic program over residues for any modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sim import RunReport, SamplingPlan, hadamard_test_coeff

BRUTE_FORCE_MAX_M = 24


@dataclass(frozen=True)
class ColinearInstance:
    """One counting instance: weights ``a`` and target ``z``."""

    a: tuple[int, ...]
    z: int

    def __init__(self, a, z: int):
        object.__setattr__(self, "a", tuple(int(x) for x in a))
        object.__setattr__(self, "z", int(z))

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def abs_sum(self) -> int:
        return sum(abs(x) for x in self.a)

    @property
    def wrap_bound(self) -> int:
        """B = sum|a_i| + |z|; any level N > B is aliasing-free."""
        return self.abs_sum + abs(self.z)


def safe_modulus(instance: ColinearInstance) -> int:
    """Smallest valid level (odd, >= 3) strictly above the wraparound bound."""
    n = instance.wrap_bound + 1
    if n % 2 == 0:
        n += 1
    return max(3, n)


def brute_force_count(instance: ColinearInstance) -> int:
    """Exact c(z) by enumerating all 2^m sign patterns (m <= 24)."""
    m = instance.m
    if m > BRUTE_FORCE_MAX_M:
        raise ValueError(f"brute force limited to m <= {BRUTE_FORCE_MAX_M}, got {m}")
    sums = np.zeros(1, dtype=np.int64)
    for ai in instance.a:
        sums = np.concatenate([sums + ai, sums - ai])
    return int(np.count_nonzero(sums == instance.z))


def brute_force_histogram(instance: ColinearInstance) -> dict[int, int]:
    """Exact counts c(k) for every reachable signed sum k (m <= 24)."""
    m = instance.m
    if m > BRUTE_FORCE_MAX_M:
        raise ValueError(f"brute force limited to m <= {BRUTE_FORCE_MAX_M}, got {m}")
    sums = np.zeros(1, dtype=np.int64)
    for ai in instance.a:
        sums = np.concatenate([sums + ai, sums - ai])
    values, counts = np.unique(sums, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def dp_count_mod(instance: ColinearInstance, modulus: int) -> int:
    """Exact folded count c_N(z) for any modulus >= 1 (exact integers)."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    counts = [0] * modulus
    counts[0] = 1
    for ai in instance.a:
        nxt = [0] * modulus
        step = ai % modulus
        for r, c in enumerate(counts):
            if c:
                nxt[(r + step) % modulus] += c
                nxt[(r - step) % modulus] += c
        counts = nxt
    return counts[instance.z % modulus]


def signed_to_subset(instance: ColinearInstance) -> int | None:
    """Subset-sum target t with sum_{i in S} a_i = t  <=>  signed sum hits z.

    Choosing S = {i : eps_i = +1} gives 2 t = z + sum_i a_i; returns None
    when that is odd (no sign pattern can reach z)."""
    total = sum(instance.a)
    if (instance.z + total) % 2 != 0:
        return None
    return (instance.z + total) // 2


def decision_positive(instance: ColinearInstance) -> bool:
    """Exact decision 'is c(z) > 0' via the aliasing-free dynamic program."""
    return dp_count_mod(instance, safe_modulus(instance)) > 0


@dataclass
class CoefficientEstimate:
    """Estimator output for one instance at one level.

    ``alpha`` estimates 2^{-m} c_N(z); ``count_estimate`` rescales by 2^m.
    ``count_rounded`` is set when the additive error guarantee eps < 2^{-(m+1)}
    pins the integer; ``uninformative`` flags intervals too wide to separate
    count 0 from count 1.  ``aliasing_free`` records whether the level is
    above the wraparound bound (so the estimate targets c(z) itself).
    """

    instance: ColinearInstance
    level: int
    alpha: float
    alpha_interval: tuple[float, float]
    count_estimate: float
    count_interval: tuple[float, float]
    count_rounded: int | None
    uninformative: bool
    aliasing_free: bool
    report: RunReport = field(repr=False)


def estimate_coefficient(
    instance: ColinearInstance,
    level: int | None = None,
    plan: SamplingPlan | None = None,
    mode: str = "exact",
) -> CoefficientEstimate:
    """Estimate c_N(z) through the coefficient circuit at the given level.

    ``level=None`` selects the smallest aliasing-free level.  In exact mode
    the returned alpha is exact and the interval degenerate.
    """
    n = safe_modulus(instance) if level is None else level
    report = hadamard_test_coeff(list(instance.a), instance.z, n, plan=plan, mode=mode)
    m = instance.m
    eps = 0.0 if mode == "exact" else (plan.epsilon if plan is not None else 0.0)
    alpha = report.estimate_re
    lo = max(0.0, alpha - eps)
    hi = min(1.0, alpha + eps)
    scale = float(2**m)
    count_rounded: int | None = None
    if mode == "exact" or eps < 0.5 ** (m + 1):
        count_rounded = int(round(alpha * scale))
    uninformative = lo <= 0.0 and hi >= 0.5**m
    return CoefficientEstimate(
        instance=instance,
        level=n,
        alpha=alpha,
        alpha_interval=(lo, hi),
        count_estimate=alpha * scale,
        count_interval=(lo * scale, hi * scale),
        count_rounded=count_rounded,
        uninformative=uninformative,
        aliasing_free=n > instance.wrap_bound,
        report=report,
    )


def hoeffding_shots(epsilon: float, delta: float) -> int:
    """Shot count guaranteeing P(|mean - E| > eps) < delta for +-1 samples."""
    return max(1, math.ceil(2.0 * math.log(2.0 / delta) / epsilon**2))
