"""Exact and simulated computation of WRT invariants of torus bundles.

The package computes the level-N Witten-Reshetikhin-Turaev invariant
Z_N(M_g; x_1..x_m) = Tr(rho(g) L_{x_m} ... L_{x_1}) of the mapping torus of
g in SL_2(Z) with threaded curve insertions, three ways:

* an exact O(m N^2) dynamic program over Frohman-Gelca coefficients,
* dense N^2 x N^2 matrix algebra (oracle scale), and
* a register-level statevector simulation of the one-clean-qubit /
  LCU circuit family, in exact and finite-shot sampling modes.

A colinear specialization turns the coefficient of one basis element into
the signed-sum count #{eps in {+-1}^m : sum eps_i a_i = z}, connecting the
estimator to subset-sum counting.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (
    canonical_orbit,
    fg_product,
    insertion_matrix,
    left_mult_matrix,
    orbit_count,
    symplectic,
    weyl_mul,
)
from .counting import (
    ColinearInstance,
    brute_force_count,
    decision_positive,
    dp_count_mod,
    estimate_coefficient,
    safe_modulus,
)
from .dp import brute_force_table, run_dp, wrt_trace
from .sim import SamplingPlan, hadamard_test_coeff, hadamard_test_trace
from .sl2 import decompose, evaluate
from .weil import rho, rho_s, rho_t, trace_pairing

__all__ = [
    "__version__",
    "canonical_orbit",
    "fg_product",
    "insertion_matrix",
    "left_mult_matrix",
    "orbit_count",
    "symplectic",
    "weyl_mul",
    "ColinearInstance",
    "brute_force_count",
    "decision_positive",
    "dp_count_mod",
    "estimate_coefficient",
    "safe_modulus",
    "brute_force_table",
    "run_dp",
    "wrt_trace",
    "SamplingPlan",
    "hadamard_test_coeff",
    "hadamard_test_trace",
    "decompose",
    "evaluate",
    "rho",
    "rho_s",
    "rho_t",
    "trace_pairing",
]
