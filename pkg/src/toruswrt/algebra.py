"""Exact arithmetic for the non-commutative torus at a root of unity.

Conventions used throughout the package:

* The level ``N`` is an odd integer >= 3 and ``t = exp(2*pi*i/N)``.
* Weyl basis elements ``e_{p,s} = t^{-ps} l^p m^s`` are indexed by pairs
  ``(p, s)`` in ``Z_N x Z_N``, reduced to least non-negative residues.
* All root-of-unity phases are carried as integer exponents of ``t`` and
  converted to complex numbers only at numeric boundaries.
* The symplectic form is ``omega((p,s),(r,u)) = p*u - s*r``; it is the source
  of every phase exponent in the algebra.
* Dense operators index the basis in row-major ``(p, s)`` order, so the flat
  index of ``e_{p,s}`` is ``p*N + s``.

Single-term multiplication: ``e_{p,s} e_{r,u} = t^{pu-sr} e_{p+r,s+u}``.
Symmetric elements ``B_v = e_v + e_{-v}`` multiply by the two-term
product-to-sum rule ``B_v B_w = t^{omega(v,w)} B_{v+w} + t^{-omega(v,w)}
B_{v-w}``, with non-primitive pairs entering as Chebyshev polynomials
(``T_0 = 2``, ``T_1 = x``, ``T_{d+1} = x T_d - T_{d-1}``) of the primitive
pair under the embedding ``B_v = e_v + e_{-v}``.
"""

from __future__ import annotations

import math

import numpy as np

IntPair = tuple[int, int]

CHEBYSHEV_TOL = 1e-8


def require_level(n: int) -> int:
    """Validate the level: an odd integer >= 3."""
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"level must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 3 or n % 2 == 0:
        raise ValueError(f"level must be an odd integer >= 3, got {n}")
    return n


def root_of_unity(n: int, k: int = 1) -> complex:
    """Return t^k for t = exp(2*pi*i/N).  Numeric boundary of the package."""
    return complex(np.exp(2j * np.pi * (k % n) / n))


def reduce_index(v: IntPair, n: int) -> IntPair:
    """Reduce an integer pair to least non-negative residues mod N."""
    return (v[0] % n, v[1] % n)


def negate_index(v: IntPair, n: int) -> IntPair:
    """The involution iota on indices: (p, s) -> (-p, -s) mod N."""
    return ((-v[0]) % n, (-v[1]) % n)


def symplectic(v: IntPair, w: IntPair) -> int:
    """omega(v, w) = p*u - s*r as an exact integer (caller reduces mod N)."""
    return v[0] * w[1] - v[1] * w[0]


def weyl_mul(v: IntPair, w: IntPair, n: int) -> tuple[int, IntPair]:
    """Single-term product e_v * e_w = t^k e_{v+w}; returns (k mod N, index)."""
    phase = symplectic(v, w) % n
    return phase, ((v[0] + w[0]) % n, (v[1] + w[1]) % n)


def fg_product(v: IntPair, w: IntPair) -> list[tuple[int, IntPair]]:
    """Two-term product-to-sum rule on symmetric elements.

    Returns ``[(+omega, v+w), (-omega, v-w)]`` with the phase exponents kept
    as exact unreduced integers so that the integer-index regime (colinear
    coefficient counting) and the mod-N regime share this code path.
    """
    om = symplectic(v, w)
    plus = (v[0] + w[0], v[1] + w[1])
    minus = (v[0] - w[0], v[1] - w[1])
    return [(om, plus), (-om, minus)]


def embed_threaded(v: IntPair, n: int) -> list[tuple[int, IntPair]]:
    """Image of the threaded element at v as unit-coefficient Weyl terms.

    Returns ``e_{v} + e_{-v}`` (indices mod N) as ``[(1, v), (1, -v)]``; the
    two indices coincide only at v = (0,0) where the result is ``2 e_{0,0}``
    (the Chebyshev base case T_0 = 2).
    """
    a = reduce_index(v, n)
    b = negate_index(a, n)
    if a == b:
        return [(2, a)]
    return [(1, a), (1, b)]


def canonical_orbit(v: IntPair, n: int) -> IntPair:
    """Canonical representative of the iota-orbit {v, -v}: the lex minimum."""
    a = reduce_index(v, n)
    return min(a, negate_index(a, n))


def orbit_count(n: int) -> int:
    """Number of iota-orbits on Z_N^2 for odd N: (N^2 + 1) / 2."""
    require_level(n)
    return (n * n + 1) // 2


def is_primitive(v: IntPair) -> bool:
    """True when gcd(p, s) = 1 (a primitive lattice pair)."""
    return math.gcd(v[0], v[1]) == 1


def left_mult_matrix(w: IntPair, n: int) -> np.ndarray:
    """Dense N^2 x N^2 matrix of left multiplication by e_w.

    ``L_{e_w} |r,u> = t^{omega(w,(r,u))} |w + (r,u)>`` in the flat row-major
    basis; a phased permutation with one nonzero per column.
    """
    require_level(n)
    p, s = reduce_index(w, n)
    mat = np.zeros((n * n, n * n), dtype=complex)
    for r in range(n):
        for u in range(n):
            phase = root_of_unity(n, p * u - s * r)
            mat[((p + r) % n) * n + (s + u) % n, r * n + u] = phase
    return mat


def insertion_matrix(v: IntPair, n: int) -> np.ndarray:
    """Dense matrix of L_{B_v} = L_{e_v} + L_{e_{-v}}."""
    a = reduce_index(v, n)
    b = negate_index(a, n)
    mat = left_mult_matrix(a, n)
    if a != b:
        mat = mat + left_mult_matrix(b, n)
    else:
        mat = 2.0 * mat
    return mat


def chebyshev_check(d: int, gamma: IntPair, n: int, tol: float = CHEBYSHEV_TOL) -> tuple[bool, float]:
    """Verify T_d(L_{B_gamma}) = L_{e_{d*gamma}} + L_{e_{-d*gamma}}.

    Runs the recursion T_0 = 2I, T_1 = x, T_{k+1} = x T_k - T_{k-1} on the
    left-regular operator image of B_gamma and compares against the direct
    operator image of the threaded element at d*gamma.  Returns the verdict
    and the max-entry residual.
    """
    require_level(n)
    if d < 0:
        raise ValueError("Chebyshev order d must be >= 0")
    if not is_primitive(gamma):
        raise ValueError(f"gamma={gamma} is not primitive (gcd != 1)")
    dim = n * n
    x = insertion_matrix(gamma, n)
    t_prev = 2.0 * np.eye(dim, dtype=complex)
    t_cur = x
    if d == 0:
        result = t_prev
    else:
        for _ in range(d - 1):
            t_prev, t_cur = t_cur, x @ t_cur - t_prev
        result = t_cur
    target_terms = embed_threaded((d * gamma[0], d * gamma[1]), n)
    target = sum(coeff * left_mult_matrix(idx, n) for coeff, idx in target_terms)
    residual = float(np.abs(result - target).max())
    return residual < tol, residual
