"""Exact SL2(Z) matrices and generator-word decomposition.

Matrices are 4-tuples ``(a, b, c, d)`` of Python integers (arbitrary
precision) with ``a*d - b*c = 1``.  Words are sequences over the letters
``"S"``, ``"T"``, ``"Tinv"`` with

    S = (0, -1; 1, 0),   T = (1, 1; 0, 1),   Tinv = T^-1,

and ``evaluate(word)`` is the left-to-right matrix product.  ``decompose``
inverts ``evaluate`` up to the relation S^2 = -I: it reduces the first column
by centered Euclidean division (each step at least halves |c|, so the number
of S-letters is logarithmic in the entries), clears the remaining shear as a
unary run of T or Tinv letters, and absorbs an overall sign as a trailing
``S, S``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

Matrix = tuple[int, int, int, int]

IDENTITY: Matrix = (1, 0, 0, 1)
S_MAT: Matrix = (0, -1, 1, 0)
T_MAT: Matrix = (1, 1, 0, 1)
TINV_MAT: Matrix = (1, -1, 0, 1)

LETTERS: dict[str, Matrix] = {"S": S_MAT, "T": T_MAT, "Tinv": TINV_MAT}


def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    a, b, c, d = g
    e, f, i, j = h
    return (a * e + b * i, a * f + b * j, c * e + d * i, c * f + d * j)


def det(g: Matrix) -> int:
    return g[0] * g[3] - g[1] * g[2]


def require_sl2(g: Sequence[int]) -> Matrix:
    """Validate and normalize a length-4 integer sequence with det 1."""
    if len(g) != 4:
        raise ValueError(f"expected 4 entries (a,b,c,d), got {len(g)}")
    mat: Matrix = (int(g[0]), int(g[1]), int(g[2]), int(g[3]))
    if det(mat) != 1:
        raise ValueError(f"matrix {mat} has det {det(mat)} != 1")
    return mat


def evaluate(word: Iterable[str]) -> Matrix:
    """Left-to-right product of generator matrices for a letter sequence."""
    out = IDENTITY
    for letter in word:
        try:
            out = mat_mul(out, LETTERS[letter])
        except KeyError:
            raise ValueError(f"unknown generator letter {letter!r}") from None
    return out


def _nearest_div(a: int, c: int) -> int:
    """Round a/c to the nearest integer; remainder magnitude <= |c|/2."""
    q, r = divmod(a, c)
    if 2 * abs(r) > abs(c):
        q += 1
    return q


def decompose(g: Sequence[int]) -> list[str]:
    """Word in {S, T, Tinv} whose evaluate() reproduces g exactly.

    Reduces the first column by left-multiplying with T^{-q} then S until
    c = 0 (recording the inverse letters), leaving +-T^k, whose sign is
    absorbed as S^2 = -I.
    """
    a, b, c, d = require_sl2(g)
    word: list[str] = []
    # Inverses of the applied reductions, recorded in order: the product of
    # these letters times the residual upper-triangular matrix equals g.
    while c != 0:
        q = _nearest_div(a, c)
        a, b = a - q * c, b - q * d
        word.extend(["T"] * q if q >= 0 else ["Tinv"] * (-q))
        # invert the S reduction: S^-1 = -S, tracked as one S plus a sign
        # flip that commutes to the end (noted below via the residual sign)
        a, b, c, d = -c, -d, a, b
        word.append("S")
    # c = 0 and det = 1 force a = d = +-1; residual is a * T^{a*b}.
    sign = a
    shear = a * b
    word.extend(["T"] * shear if shear >= 0 else ["Tinv"] * (-shear))
    # Each recorded S stands for S^{-1} = (-I) S; collect the deferred -I
    # factors together with the residual sign (-I is central).
    s_count = word.count("S")
    if (sign < 0) ^ (s_count % 2 == 1):
        word.extend(["S", "S"])
    return word


def word_length(g: Sequence[int]) -> int:
    """Letter count of the canonical decomposition of g."""
    return len(decompose(g))


def max_entry(g: Sequence[int]) -> int:
    return max(abs(int(x)) for x in g)
