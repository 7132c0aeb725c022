"""Weil representation of SL2(Z) on the N^2-dimensional Weyl basis.

Generator actions on basis states |p,s> (flat index p*N + s):

    rho(S)|p,s> = (1/N) sum_{r,u} t^{2(pu-sr)} |r,u>
    rho(T)|p,s> = t^{s^2} |p+s, s>

with t = exp(2*pi*i/N).  rho(S) also factors as the structured composite
(QFT_N (x) QFT_N) o (NEG (x) I) o SWAP where QFT_N|j> = (1/sqrt N) sum_k
t^{2jk}|k> (t^2 is a primitive root for odd N); both constructions are kept
and compared in tests.

rho(g) for a general monodromy is DEFINED as the word-evaluation product
over the canonical decomposition of g, which pins the projective phase.
Note that these generators satisfy rho(S)^2 = I (the kernel is a Hermitian
unitary: the character sum over the quadratic Fourier phase vanishes except
at the zero index), so rho(-I) evaluates to the identity, not to the index
parity.

The module also hosts the N x N clock-shift model used for the dimension
check of the symmetric subalgebra: U the cyclic shift, V = diag(t^{2j}),
satisfying V U = t^2 U V and U^N = V^N = I.
"""

from __future__ import annotations

import numpy as np

from .algebra import require_level, root_of_unity
from .sl2 import decompose, require_sl2

RANK_THRESHOLD = 1e-8


def qft_matrix(n: int) -> np.ndarray:
    """QFT_N at the primitive root t^2: F[k,j] = t^{2jk} / sqrt(N)."""
    require_level(n)
    j = np.arange(n)
    expo = (2 * np.outer(j, j)) % n
    return np.exp(2j * np.pi * expo / n) / np.sqrt(n)


def parity_matrix(n: int) -> np.ndarray:
    """Index negation |p,s> -> |-p,-s| as a dense permutation."""
    mat = np.zeros((n * n, n * n), dtype=complex)
    for p in range(n):
        for s in range(n):
            mat[((-p) % n) * n + (-s) % n, p * n + s] = 1.0
    return mat


def rho_s(n: int) -> np.ndarray:
    """Dense rho(S): entry <r,u|rho(S)|p,s> = t^{2(pu-sr)} / N."""
    require_level(n)
    p = np.arange(n)
    # exponent grid over (r, u, p, s), flattened to (row, column)
    r_, u_, p_, s_ = np.meshgrid(p, p, p, p, indexing="ij")
    expo = (2 * (p_ * u_ - s_ * r_)) % n
    mat = np.exp(2j * np.pi * expo / n) / n
    return mat.reshape(n * n, n * n)


def rho_s_structured(n: int) -> np.ndarray:
    """rho(S) assembled as (QFT (x) QFT) o (NEG (x) I) o SWAP."""
    require_level(n)
    dim = n * n
    swap = np.zeros((dim, dim))
    neg1 = np.zeros((dim, dim))
    for p in range(n):
        for s in range(n):
            swap[s * n + p, p * n + s] = 1.0
            neg1[((-p) % n) * n + s, p * n + s] = 1.0
    f = qft_matrix(n)
    return np.kron(f, f) @ neg1 @ swap


def rho_t(n: int) -> np.ndarray:
    """Dense rho(T): the phased permutation t^{s^2} |p+s, s>."""
    require_level(n)
    mat = np.zeros((n * n, n * n), dtype=complex)
    for p in range(n):
        for s in range(n):
            mat[((p + s) % n) * n + s, p * n + s] = root_of_unity(n, s * s)
    return mat


def rho_t_inv(n: int) -> np.ndarray:
    """Dense rho(T)^-1 = rho(T)^dagger: t^{-s^2} |p-s, s>."""
    return rho_t(n).conj().T


def rho_word(word: list[str], n: int) -> np.ndarray:
    """Left-to-right operator product over generator letters."""
    gens = {"S": rho_s(n), "T": rho_t(n), "Tinv": rho_t_inv(n)}
    out = np.eye(n * n, dtype=complex)
    for letter in word:
        out = out @ gens[letter]
    return out


def rho(g, n: int) -> np.ndarray:
    """rho(g) as the word-evaluation product over decompose(g)."""
    return rho_word(decompose(require_sl2(g)), n)


def trace_pairing(g, n: int) -> np.ndarray:
    """Table tau_g(w) = Tr(rho(g) L_{e_w}) for all w, as an (N, N) array.

    Uses the phased-permutation structure of L_{e_w}: the product's diagonal
    entry at x is t^{omega(w,x)} <x|rho(g)|x+w>, summed over x in O(N^2) per
    w without materializing the product matrix.
    """
    require_level(n)
    mat = rho(g, n)
    r_, u_ = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    flat_x = (r_ * n + u_).ravel()
    tau = np.zeros((n, n), dtype=complex)
    for wp in range(n):
        for ws in range(n):
            flat_xw = (((r_ + wp) % n) * n + (u_ + ws) % n).ravel()
            expo = ((wp * u_ - ws * r_) % n).ravel()
            phases = np.exp(2j * np.pi * expo / n)
            tau[wp, ws] = np.sum(mat[flat_x, flat_xw] * phases)
    return tau


def clock_shift_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The N x N shift U and clock V = diag(t^{2j}) with V U = t^2 U V."""
    require_level(n)
    u = np.zeros((n, n), dtype=complex)
    u[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    v = np.diag(np.exp(2j * np.pi * (2 * np.arange(n) % n) / n))
    return u, v


def clock_shift_rank(n: int, threshold: float = RANK_THRESHOLD) -> int:
    """Numerical rank of span{U^p V^s + U^-p V^-s : (p,s) in Z_N^2}.

    Flattens each symmetric clock-shift word to an N^2 vector and counts
    singular values above the threshold; for odd N the expected value is
    (N^2 + 1) / 2.
    """
    require_level(n)
    u, v = clock_shift_pair(n)
    u_pows = [np.linalg.matrix_power(u, p) for p in range(n)]
    v_pows = [np.linalg.matrix_power(v, s) for s in range(n)]
    rows = []
    for p in range(n):
        for s in range(n):
            word = u_pows[p] @ v_pows[s]
            sym = word + (u_pows[(-p) % n] @ v_pows[(-s) % n])
            rows.append(sym.ravel())
    sv = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(sv > threshold))


def random_phased_permutation(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Random dim x dim unitary with one t-power phase per column."""
    perm = rng.permutation(dim)
    expo = rng.integers(0, n, size=dim)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[perm, np.arange(dim)] = np.exp(2j * np.pi * expo / n)
    return mat
