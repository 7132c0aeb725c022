"""Register-level statevector simulation of the trace and coefficient circuits.

The simulator works on Z_N registers directly (no qubit-level gate
synthesis): the state is a dense complex array over

    (batch) x (control qubit) x (m LCU ancilla qubits) x (Z_N x Z_N data)

with the batch axis used to process many input basis states through one
circuit application (exact mode averages over all N^2 data basis states,
which reproduces the maximally mixed input of the one-clean-qubit protocol).

Circuit pieces:

* ``U_{p,s}``: the phased permutation |r,u> -> t^{pu-sr} |r+p, u+s> (phase in
  the original coordinates), optionally conditioned on control/ancilla bits.
* LCU block for B_v = e_v + e_{-v}: H on a fresh ancilla, U_v on ancilla=0,
  U_{-v} on ancilla=1, H again; the ancilla-0 block equals L_{B_v} / 2.
* Modular generators: rho(T)^{+-1} as a phased shear and rho(S) as the
  structured composite (QFT x QFT) o (NEG x I) o SWAP applied axis-wise.
* Hadamard test: H on the control, the circuit controlled on control=1, H,
  measure.  P(0) = (1 + Re[observable]) / 2; the imaginary-part variant
  inserts the phase gate diag(1, -i) before the final H — with this sign
  P(0) = (1 + Im[observable]) / 2, which tests verify directly.

The trace circuit applies the LCU blocks for x_1..x_m in order and then the
word letters of the monodromy (rightmost letter first, matching the
left-to-right matrix convention), so the measured observable is the
attenuated normalized invariant 2^{-m} Tr(rho(g) L_m ... L_1) / N^2.

Sample mode reproduces per-shot statistics exactly by precomputing the
conditional outcome probability P(0 | input basis state x) for all x in one
batched run and then drawing (x_j, Bernoulli(P(0|x_j))) per shot from the
seeded generator.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .algebra import IntPair, reduce_index, require_level
from .sl2 import decompose, require_sl2

NORM_TOL = 1e-12
SQRT_HALF = 1.0 / np.sqrt(2.0)
# largest statevector (complex entries) the coefficient circuit materializes
# before falling back to the factored matrix-element route
COEFF_STATEVECTOR_CAP = 1 << 22
COEFF_MAX_M = 24


@dataclass(frozen=True)
class SamplingPlan:
    """Additive-precision target and the derived Hoeffding shot count."""

    epsilon: float = 0.05
    delta: float = 0.01
    seed: int | None = None

    def __post_init__(self) -> None:
        if not (0 < self.epsilon <= 1):
            raise ValueError("epsilon must be in (0, 1]")
        if not (0 < self.delta < 1):
            raise ValueError("delta must be in (0, 1)")

    @property
    def shots(self) -> int:
        """n = ceil(2 ln(2/delta) / epsilon^2); at least 1."""
        return max(1, math.ceil(2.0 * math.log(2.0 / self.delta) / self.epsilon**2))


@dataclass(frozen=True)
class RegisterLayout:
    """Bookkeeping for one circuit family at level N with m LCU blocks."""

    n: int
    m: int

    @property
    def dimension(self) -> int:
        return (1 << (self.m + 1)) * self.n * self.n

    @property
    def logical_qubits(self) -> int:
        """2 ceil(log2 N) + m + 1 qubits on hardware (reported, not used)."""
        return 2 * math.ceil(math.log2(self.n)) + self.m + 1


@dataclass
class RunReport:
    """Outcome of one Hadamard-test computation.

    ``estimate_re``/``estimate_im`` estimate the attenuated observable
    2^{-m} Z~ (Z~ = Tr(W)/N^2 for the trace circuit, 2^{-m} c(z) directly
    for the coefficient circuit); ``attenuation`` carries the 2^{-m} factor
    so callers can rescale.  ``op_count`` counts register-level generator,
    block, and shift applications for one circuit execution (the depth
    proxy).  ``exact_value`` holds the exact observable when it was computed.
    """

    estimate_re: float
    estimate_im: float
    exact_value: complex | None
    shots_used: int
    elapsed: float
    op_count: int
    seed: int | None
    attenuation: float
    logical_qubits: int


def _resolve_seed(plan: SamplingPlan | None) -> int | None:
    if plan is None:
        return None
    if plan.seed is not None:
        return int(plan.seed)
    return int(np.random.SeedSequence().entropy % (1 << 63))


class SimState:
    """Dense amplitudes over (batch, control, ancillas..., p, s).

    Qubit index 0 is the Hadamard-test control; qubits 1..m are the LCU
    ancillas.  ``controls`` arguments map qubit index -> required bit and
    restrict a gate to that subspace.
    """

    def __init__(self, amps: np.ndarray, n: int, m: int):
        self.amps = amps
        self.n = n
        self.m = m

    @classmethod
    def zeros(cls, n: int, m: int, batch: int) -> "SimState":
        shape = (batch, 2) + (2,) * m + (n, n)
        return cls(np.zeros(shape, dtype=complex), n, m)

    @classmethod
    def basis(cls, n: int, m: int, data: IntPair) -> "SimState":
        """Single run: |control=0> |0...0> |data>."""
        state = cls.zeros(n, m, batch=1)
        p, s = reduce_index(data, n)
        state.amps[(0, 0) + (0,) * m + (p, s)] = 1.0
        return state

    @classmethod
    def data_batch(cls, n: int, m: int) -> "SimState":
        """One batch row per data basis state (maximally mixed input)."""
        state = cls.zeros(n, m, batch=n * n)
        for idx in range(n * n):
            state.amps[(idx, 0) + (0,) * m + (idx // n, idx % n)] = 1.0
        return state

    # -- internal indexing ------------------------------------------------

    def _key(self, controls: dict[int, int] | None, qubit: int | None = None, bit: int = 0) -> tuple:
        """Index tuple selecting a control subspace (and optionally a qubit bit)."""
        key: list = [slice(None)] * self.amps.ndim
        if controls:
            for q, b in controls.items():
                key[1 + q] = b
        if qubit is not None:
            key[1 + qubit] = bit
        return tuple(key)

    def assert_normalized(self) -> None:
        norms = np.sqrt(np.sum(np.abs(self.amps) ** 2, axis=tuple(range(1, self.amps.ndim))))
        dev = float(np.abs(norms - 1.0).max())
        if dev > NORM_TOL:
            raise AssertionError(f"state norm deviates by {dev:.3e}")

    # -- qubit gates -------------------------------------------------------

    def h_qubit(self, qubit: int, controls: dict[int, int] | None = None) -> None:
        k0 = self._key(controls, qubit, 0)
        k1 = self._key(controls, qubit, 1)
        a0 = self.amps[k0].copy()
        a1 = self.amps[k1]
        self.amps[k0] = (a0 + a1) * SQRT_HALF
        self.amps[k1] = (a0 - a1) * SQRT_HALF

    def phase_qubit(self, qubit: int, phase: complex, controls: dict[int, int] | None = None) -> None:
        self.amps[self._key(controls, qubit, 1)] *= phase

    # -- data-register gates ------------------------------------------------

    def _phase_grid(self, v: IntPair, sign: int) -> np.ndarray:
        p, s = v
        r_, u_ = np.meshgrid(np.arange(self.n), np.arange(self.n), indexing="ij")
        expo = (sign * (p * u_ - s * r_)) % self.n
        return np.exp(2j * np.pi * expo / self.n)

    def apply_u(self, v: IntPair, sign: int, controls: dict[int, int] | None = None) -> None:
        """Phased permutation U_{sign*v} on the data register."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        p, s = reduce_index(v, self.n)
        key = self._key(controls)
        sub = self.amps[key]
        sub = sub * self._phase_grid((p, s), sign)
        self.amps[key] = np.roll(sub, (sign * p, sign * s), axis=(-2, -1))

    def apply_lcu_block(self, v: IntPair, ancilla: int, controls: dict[int, int] | None = None) -> None:
        """H, (U_v on ancilla=0, U_{-v} on ancilla=1), H on the given ancilla."""
        base = dict(controls or {})
        self.h_qubit(ancilla, controls=base)
        self.apply_u(v, +1, controls={**base, ancilla: 0})
        self.apply_u(v, -1, controls={**base, ancilla: 1})
        self.h_qubit(ancilla, controls=base)

    def _qft_axis(self, sub: np.ndarray, axis: int) -> np.ndarray:
        j = np.arange(self.n)
        f = np.exp(2j * np.pi * ((2 * np.outer(j, j)) % self.n) / self.n) / np.sqrt(self.n)
        out = np.tensordot(sub, f, axes=([axis], [1]))
        return np.moveaxis(out, -1, axis)

    def apply_modular(self, letter: str, controls: dict[int, int] | None = None) -> None:
        """One generator letter on the data register (structured circuits)."""
        key = self._key(controls)
        sub = self.amps[key]
        n = self.n
        if letter == "S":
            sub = np.swapaxes(sub, -2, -1)
            sub = np.take(sub, (-np.arange(n)) % n, axis=-2)
            sub = self._qft_axis(sub, -2)
            sub = self._qft_axis(sub, -1)
        elif letter in ("T", "Tinv"):
            p_, s_ = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            if letter == "T":
                gather_p = (p_ - s_) % n
                expo = (s_ * s_) % n
            else:
                gather_p = (p_ + s_) % n
                expo = (-s_ * s_) % n
            phases = np.exp(2j * np.pi * expo / n)
            sub = sub[..., gather_p, s_] * phases
        else:
            raise ValueError(f"unknown generator letter {letter!r}")
        self.amps[key] = sub

    def add_p(self, z: int, controls: dict[int, int] | None = None) -> None:
        """Modular shift |p,s> -> |p+z, s> (register-level ADD)."""
        key = self._key(controls)
        self.amps[key] = np.roll(self.amps[key], z % self.n, axis=-2)

    # -- readout -------------------------------------------------------------

    def p_control_zero(self) -> np.ndarray:
        """P(control measures 0) per batch row."""
        slice0 = self.amps[self._key(None, 0, 0)]
        return np.sum(np.abs(slice0) ** 2, axis=tuple(range(1, slice0.ndim)))


def _trace_circuit_p0(
    word: list[str], insertions: list[IntPair], n: int, im_variant: bool
) -> np.ndarray:
    """P(0 | data basis state x) for all x, via one batched simulation."""
    m = len(insertions)
    state = SimState.data_batch(n, m)
    state.h_qubit(0)
    on_control = {0: 1}
    for i, v in enumerate(insertions):
        state.apply_lcu_block(v, ancilla=1 + i, controls=on_control)
    for letter in reversed(word):
        state.apply_modular(letter, controls=on_control)
    if im_variant:
        state.phase_qubit(0, -1j)
    state.h_qubit(0)
    state.assert_normalized()
    return state.p_control_zero()


def _sample_pm_one(p0: np.ndarray, shots: int, rng: np.random.Generator) -> float:
    """Mean of +-1 Hadamard-test outcomes over shots with per-shot input draw."""
    xs = rng.integers(0, len(p0), size=shots)
    zeros = rng.random(shots) < p0[xs]
    return float(2.0 * np.mean(zeros) - 1.0)


def hadamard_test_trace(
    g,
    insertions: list[IntPair],
    n: int,
    plan: SamplingPlan | None = None,
    mode: str = "exact",
) -> RunReport:
    """Hadamard-test estimate of the attenuated invariant 2^{-m} Z~.

    Exact mode averages the analytically computed outcome distribution over
    all N^2 input basis states; sample mode draws ``plan.shots`` shots per
    quadrature (real and imaginary parts are separate circuit variants).
    """
    require_level(n)
    g = require_sl2(g)
    if mode not in ("exact", "sample"):
        raise ValueError(f"mode must be 'exact' or 'sample', got {mode!r}")
    if mode == "sample" and plan is None:
        raise ValueError("sample mode requires a SamplingPlan")
    start = time.perf_counter()
    word = decompose(g)
    m = len(insertions)
    layout = RegisterLayout(n=n, m=m)
    p0_re = _trace_circuit_p0(word, insertions, n, im_variant=False)
    p0_im = _trace_circuit_p0(word, insertions, n, im_variant=True)
    exact = complex(np.mean(2.0 * p0_re - 1.0), np.mean(2.0 * p0_im - 1.0))
    op_count = m + len(word)
    seed = _resolve_seed(plan)
    if mode == "exact":
        est_re, est_im = exact.real, exact.imag
        shots_used = 0
    else:
        rng = np.random.default_rng(seed)
        shots = plan.shots
        est_re = _sample_pm_one(p0_re, shots, rng)
        est_im = _sample_pm_one(p0_im, shots, rng)
        shots_used = 2 * shots
    return RunReport(
        estimate_re=est_re,
        estimate_im=est_im,
        exact_value=exact,
        shots_used=shots_used,
        elapsed=time.perf_counter() - start,
        op_count=op_count,
        seed=seed,
        attenuation=0.5**m,
        logical_qubits=layout.logical_qubits,
    )


def block_submatrix(insertions: list[IntPair], n: int) -> np.ndarray:
    """<0_anc, x' | blocks | 0_anc, x> for all x, x': the encoded 2^{-m} prod L.

    Runs the ancilla blocks uncontrolled (no Hadamard-test wrapper) on every
    data basis state and reads out the ancilla-zero amplitudes.
    """
    require_level(n)
    m = len(insertions)
    state = SimState.data_batch(n, m)
    for i, v in enumerate(insertions):
        state.apply_lcu_block(v, ancilla=1 + i)
    state.assert_normalized()
    block = state.amps[(slice(None), 0) + (0,) * m]  # (batch, p, s)
    return block.reshape(n * n, n * n).T


# -- colinear coefficient circuit -------------------------------------------


class _ColinearState:
    """Control + ancillas + 1-D Z_N data register for the colinear circuit.

    The s-coordinate is never touched by colinear shifts (and carries no
    phase), so the data register reduces to Z_N.
    """

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        shape = (2,) + (2,) * m + (n,)
        self.amps = np.zeros(shape, dtype=complex)
        self.amps[(0,) + (0,) * m + (0,)] = 1.0

    def _key(self, controls: dict[int, int] | None, qubit: int | None = None, bit: int = 0) -> tuple:
        key: list = [slice(None)] * self.amps.ndim
        if controls:
            for q, b in controls.items():
                key[q] = b
        if qubit is not None:
            key[qubit] = bit
        return tuple(key)

    def h_qubit(self, qubit: int, controls: dict[int, int] | None = None) -> None:
        k0 = self._key(controls, qubit, 0)
        k1 = self._key(controls, qubit, 1)
        a0 = self.amps[k0].copy()
        a1 = self.amps[k1]
        self.amps[k0] = (a0 + a1) * SQRT_HALF
        self.amps[k1] = (a0 - a1) * SQRT_HALF

    def shift(self, delta: int, controls: dict[int, int] | None = None) -> None:
        key = self._key(controls)
        self.amps[key] = np.roll(self.amps[key], delta % self.n, axis=-1)

    def p_control_zero(self) -> float:
        return float(np.sum(np.abs(self.amps[0]) ** 2))


def _coeff_circuit_p0(a: list[int], z: int, n: int) -> float:
    """P(0) of the coefficient circuit by full statevector simulation."""
    m = len(a)
    state = _ColinearState(n, m)
    state.h_qubit(0)
    state.shift(z, controls={0: 1})
    anti = {0: 0}
    for i, ai in enumerate(a):
        anc = 1 + i
        state.h_qubit(anc, controls=anti)
        state.shift(ai, controls={**anti, anc: 0})
        state.shift(-ai, controls={**anti, anc: 1})
        state.h_qubit(anc, controls=anti)
    state.h_qubit(0)
    norm = float(np.sum(np.abs(state.amps) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise AssertionError(f"state norm deviates by {abs(norm - 1.0):.3e}")
    return state.p_control_zero()


def _coeff_factored_expectation(a: list[int], z: int, n: int) -> float:
    """E[X_c] = <z| prod (L_{B_(a_i,0)} / 2) |0> via the 1-D half-block product."""
    vec = np.zeros(n)
    vec[0] = 1.0
    for ai in a:
        vec = 0.5 * (np.roll(vec, ai % n) + np.roll(vec, -ai % n))
    return float(vec[z % n])


def hadamard_test_coeff(
    a: list[int],
    z: int,
    n: int,
    plan: SamplingPlan | None = None,
    mode: str = "exact",
) -> RunReport:
    """Hadamard-test estimate of E[X_c] = 2^{-m} c_N(z) for colinear data.

    The observable is exact for the signed-sum count c(z) whenever
    N > sum|a_i| + |z| (no modular wraparound); callers are warned otherwise.
    """
    require_level(n)
    if mode not in ("exact", "sample"):
        raise ValueError(f"mode must be 'exact' or 'sample', got {mode!r}")
    if mode == "sample" and plan is None:
        raise ValueError("sample mode requires a SamplingPlan")
    m = len(a)
    if m > COEFF_MAX_M:
        raise ValueError(f"coefficient circuit limited to m <= {COEFF_MAX_M}, got {m}")
    start = time.perf_counter()
    if (1 << (m + 1)) * n <= COEFF_STATEVECTOR_CAP:
        p0 = _coeff_circuit_p0(a, z, n)
    else:
        p0 = 0.5 * (1.0 + _coeff_factored_expectation(a, z, n))
    exact = 2.0 * p0 - 1.0
    seed = _resolve_seed(plan)
    if mode == "exact":
        est = exact
        shots_used = 0
    else:
        rng = np.random.default_rng(seed)
        shots = plan.shots
        zeros = rng.random(shots) < p0
        est = float(2.0 * np.mean(zeros) - 1.0)
        shots_used = shots
    return RunReport(
        estimate_re=est,
        estimate_im=0.0,
        exact_value=complex(exact),
        shots_used=shots_used,
        elapsed=time.perf_counter() - start,
        op_count=m + 1,
        seed=seed,
        attenuation=0.5**m,
        logical_qubits=RegisterLayout(n=n, m=m).logical_qubits,
    )


def hadamard_test_matrix(u_mat: np.ndarray, mode: str = "exact") -> complex:
    """Plain one-clean-qubit trace test on a dense unitary.

    Returns the exact complex P(0)-derived observable Tr(U)/dim by running
    the control-H / controlled-U / (phase) / control-H circuit on every data
    basis state and averaging both quadratures.
    """
    dim = u_mat.shape[0]
    values = []
    for im_variant in (False, True):
        amps = np.zeros((dim, 2, dim), dtype=complex)
        amps[np.arange(dim), 0, np.arange(dim)] = 1.0
        a0 = amps[:, 0, :].copy()
        a1 = amps[:, 1, :]
        amps[:, 0, :] = (a0 + a1) * SQRT_HALF
        amps[:, 1, :] = (a0 - a1) * SQRT_HALF
        amps[:, 1, :] = amps[:, 1, :] @ u_mat.T
        if im_variant:
            amps[:, 1, :] *= -1j
        a0 = amps[:, 0, :].copy()
        a1 = amps[:, 1, :]
        amps[:, 0, :] = (a0 + a1) * SQRT_HALF
        amps[:, 1, :] = (a0 - a1) * SQRT_HALF
        p0 = np.sum(np.abs(amps[:, 0, :]) ** 2, axis=1)
        values.append(float(np.mean(2.0 * p0 - 1.0)))
    return complex(values[0], values[1])
