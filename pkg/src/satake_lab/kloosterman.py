"""GL(r) Kloosterman sums for small rank.

Conventions
-----------
* Gamma is SL_r(Z). A permutation ``perm`` (row i has its 1 in column
  ``perm[i]``) is represented by its permutation matrix with the first row
  multiplied by the sign of the permutation, so every Weyl representative
  has determinant 1. For r = 2 the long element is [[0, -1], [1, 0]].
* ``g = b1 * cstar * w * b2`` with b1, b2 upper unitriangular and
  cstar = diag(1/c_{r-1}, c_{r-1}/c_{r-2}, ..., c_1).
* psi_m(u) = e(sum_i m_i u[i, i+1]).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

from .cyclotomic import RootOfUnitySum

log = logging.getLogger(__name__)

Matrix = list[list[Fraction]]


def _identity(r: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def _as_fractions(g: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in g]


def _det(g: Matrix) -> Fraction:
    m = [row[:] for row in g]
    n, det = len(m), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


# ---------------------------------------------------------------------------
# Weyl elements


@dataclass(frozen=True)
class WeylElement:
    """Permutation ``perm`` with w[i, perm[i]] = +-1, signed so that det w = 1."""

    perm: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.perm)

    def signs(self) -> tuple[int, ...]:
        """Row signs of the matrix representative, chosen so det = 1.

        The unsigned permutation matrix is kept when its det is already 1.
        Otherwise row i gets (-1)^(inversions starting at i), which yields
        [[0, -1], [1, 0]] for r = 2 and antidiag(1, -1, 1) for the long
        element at r = 3, the usual representatives in SL_r(Z).
        """
        p = self.perm
        left = [sum(p[j] < p[i] for j in range(i + 1, len(p))) for i in range(len(p))]
        if sum(left) % 2 == 0:
            return (1,) * len(p)
        return tuple(-1 if k % 2 else 1 for k in left)

    def matrix(self) -> Matrix:
        r, s = self.rank, self.signs()
        m = [[Fraction(0)] * r for _ in range(r)]
        for i, j in enumerate(self.perm):
            m[i][j] = Fraction(s[i])
        return m

    def column_image(self) -> tuple[tuple[int, int], ...]:
        """For each column j: (row pi(j), sign) with w e_j = sign * e_{pi(j)}."""
        out = [None] * self.rank
        for i, (j, s) in enumerate(zip(self.perm, self.signs())):
            out[j] = (i, s)
        return tuple(out)

    def is_block_antidiagonal(self) -> bool:
        return any(BlockWeylElement(b).perm == self.perm for b in compositions(self.rank))

    @classmethod
    def all(cls, r: int) -> list["WeylElement"]:
        return [cls(p) for p in permutations(range(r))]


def compositions(r: int) -> list[tuple[int, ...]]:
    if r == 0:
        return [()]
    return [(d,) + rest for d in range(r, 0, -1) for rest in compositions(r - d)]


def _block_perm(blocks: Sequence[int]) -> tuple[int, ...]:
    r = sum(blocks)
    perm = [0] * r
    start = 0
    for d in blocks:
        top = r - start - d  # block rows start..start+d-1 go to columns top..top+d-1
        for t in range(d):
            perm[start + t] = top + t
        start += d
    return tuple(perm)


class BlockWeylElement(WeylElement):
    """Block anti-diagonal Weyl element with identity blocks of sizes ``blocks``.

    Blocks (r) is the identity; blocks (1, ..., 1) is the long element.
    """

    def __init__(self, blocks: Sequence[int]):
        blocks = tuple(int(d) for d in blocks)
        if not blocks or any(d < 1 for d in blocks):
            raise ValueError("blocks must be a composition with positive parts")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "perm", _block_perm(blocks))

    def __repr__(self) -> str:
        return f"BlockWeylElement(blocks={self.blocks})"

    def label(self) -> str:
        return "-".join(map(str, self.blocks))


def admissible_weyl_elements(r: int) -> list[BlockWeylElement]:
    if r < 2:
        raise ValueError("rank must be at least 2")
    return [BlockWeylElement(b) for b in compositions(r)]


@dataclass(frozen=True)
class ModuliTuple:
    c: tuple[int, ...]

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.c)
        if any(x == 0 for x in c):
            raise ValueError("moduli must be nonzero")
        object.__setattr__(self, "c", c)

    @property
    def rank(self) -> int:
        return len(self.c) + 1

    def cstar(self) -> list[Fraction]:
        """Diagonal of c* = diag(1/c_{r-1}, c_{r-1}/c_{r-2}, ..., c_2/c_1, c_1)."""
        c = (1,) + self.c + (1,)
        r = self.rank
        # entry i (0-based) is c_{r-i} / c_{r-1-i} with c_0 = c_r = 1
        return [Fraction(c[r - i], c[r - 1 - i]) for i in range(r)]

    @classmethod
    def from_cstar(cls, diag: Sequence[Fraction]) -> "ModuliTuple":
        r = len(diag)
        vals = []
        acc = Fraction(1)
        for k in range(1, r):
            acc *= diag[r - k]
            vals.append(acc)
        if any(v.denominator != 1 for v in vals):
            raise ValueError(f"non-integral moduli {vals}")
        return cls(tuple(int(v) for v in vals))


# ---------------------------------------------------------------------------
# Compatibility condition


@dataclass
class Compatibility:
    """Outcome of the compatibility check.

    ``relations`` lists every linear condition, one per free coordinate of
    N cap w^-1 N w; ``conditions`` keeps only the violated ones.
    """

    feasible: bool
    relations: list[str] = field(default_factory=list)
    conditions: list[str] = field(default_factory=list)


def compatibility_check(w: WeylElement, m: Sequence[int], n: Sequence[int], c: ModuliTuple) -> Compatibility:
    """Check psi_m(c* w x w^-1 c*^-1) = psi_n(x) on x in N cap w^-1 N w.

    Each free coordinate x_ij contributes a linear condition; LHS and RHS
    coefficients are compared as exact rationals.
    """
    r = w.rank
    if len(m) != r - 1 or len(n) != r - 1 or c.rank != r:
        raise ValueError("rank mismatch")
    img = w.column_image()
    d = c.cstar()
    out = Compatibility(True)
    for i in range(r):
        for j in range(i + 1, r):
            (pi, si), (pj, sj) = img[i], img[j]
            if pi >= pj:
                continue  # not in w^-1 N w
            lhs = Fraction(0)
            if pj == pi + 1:
                lhs = m[pi] * d[pi] / d[pj] * si * sj
            rhs = Fraction(n[i]) if j == i + 1 else Fraction(0)
            text = f"x[{i + 1},{j + 1}]: {lhs} = {rhs}"
            out.relations.append(text)
            if lhs != rhs:
                out.feasible = False
                out.conditions.append(text)
    return out


# ---------------------------------------------------------------------------
# Bruhat decomposition


@dataclass(frozen=True)
class BruhatFactorization:
    b1: tuple[tuple[Fraction, ...], ...]
    cstar: tuple[Fraction, ...]
    w: WeylElement
    b2: tuple[tuple[Fraction, ...], ...]

    def product(self) -> Matrix:
        r = len(self.cstar)
        D = [[self.cstar[i] if i == j else Fraction(0) for j in range(r)] for i in range(r)]
        return _matmul(_matmul(_matmul([list(x) for x in self.b1], D), self.w.matrix()),
                       [list(x) for x in self.b2])

    def moduli(self) -> ModuliTuple | None:
        try:
            return ModuliTuple.from_cstar(self.cstar)
        except ValueError:
            return None


def _freeze(m: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in m)


def bruhat_decompose(g: Sequence[Sequence], canonical: bool = True) -> BruhatFactorization:
    """Exact factorisation g = b1 * cstar * w * b2.

    With ``canonical`` the right factor is moved into N cap w^-1 N^t w,
    which makes (b1, b2) unique as well.
    """
    A = _as_fractions(g)
    r = len(A)
    if any(len(row) != r for row in A):
        raise ValueError("matrix must be square")
    if _det(A) == 0:
        raise ValueError("matrix is singular")
    L = _identity(r)  # row operations: L * g
    R = _identity(r)  # column operations: g * R
    perm = [None] * r
    for i in range(r - 1, -1, -1):
        j = next(col for col in range(r) if A[i][col] != 0)
        perm[i] = j
        piv = A[i][j]
        for k in range(j + 1, r):
            f = A[i][k] / piv
            if f:
                for row in A:
                    row[k] -= f * row[j]
                for row in R:
                    row[k] -= f * row[j]
        for k in range(i):
            f = A[k][j] / piv
            if f:
                A[k] = [x - f * y for x, y in zip(A[k], A[i])]
                L[k] = [x - f * y for x, y in zip(L[k], L[i])]
    w = WeylElement(tuple(perm))
    sg = w.signs()
    cstar = tuple(A[i][perm[i]] / sg[i] for i in range(r))
    b1 = _unitri_inverse(L)
    b2 = _unitri_inverse(R)
    if canonical:
        b1, b2 = _normalise_right(b1, cstar, w, b2)
    return BruhatFactorization(_freeze(b1), cstar, w, _freeze(b2))


def _unitri_inverse(U: Matrix) -> Matrix:
    r = len(U)
    inv = _identity(r)
    for j in range(r):
        for i in range(j - 1, -1, -1):
            inv[i][j] = -sum((U[i][k] * inv[k][j] for k in range(i + 1, j + 1)), Fraction(0))
    return inv


def _upper_positions(w: WeylElement) -> set[tuple[int, int]]:
    """Positions (i, j), i < j, of N cap w^-1 N w."""
    img = w.column_image()
    return {(i, j) for i in range(w.rank) for j in range(i + 1, w.rank) if img[i][0] < img[j][0]}


def _normalise_right(b1: Matrix, cstar, w: WeylElement, b2: Matrix) -> tuple[Matrix, Matrix]:
    r = w.rank
    up = _upper_positions(w)
    # u in N cap w^-1 N w with (u b2) vanishing on those positions.
    u = _identity(r)
    for h in range(1, r):
        for i in range(r - h):
            j = i + h
            if (i, j) in up:
                u[i][j] = -b2[i][j] - sum((u[i][k] * b2[k][j] for k in range(i + 1, j)), Fraction(0))
    new_b2 = _matmul(u, b2)
    x = _unitri_inverse(u)
    # b1 c* w x = (b1 c* w x w^-1 c*^-1) c* w
    D = [[cstar[i] if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    Dinv = [[1 / cstar[i] if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    W = w.matrix()
    Winv = [list(col) for col in zip(*W)]  # signed permutation: inverse is transpose
    conj = _matmul(_matmul(_matmul(_matmul(D, W), x), Winv), Dinv)
    return _matmul(b1, conj), new_b2


def bottom_minor_pattern(g: Sequence[Sequence]) -> list[tuple[tuple[int, ...], Fraction]]:
    """For k = 1..r-1: the lexicographically first column set J with a nonzero
    bottom-k-rows minor, and that minor."""
    A = _as_fractions(g)
    r = len(A)
    from itertools import combinations

    out = []
    for k in range(1, r):
        rows = A[r - k:]
        for cols in combinations(range(r), k):
            mnr = _det([[row[c] for c in cols] for row in rows])
            if mnr != 0:
                out.append((cols, mnr))
                break
    return out


# ---------------------------------------------------------------------------
# Canonical double-coset data


def _reduce_left(b: Matrix) -> tuple[Fraction, ...]:
    """Representative of N(Z) b with entries in [0, 1), by increasing height."""
    r = len(b)
    u = _identity(r)
    red = {}
    for h in range(1, r):
        for i in range(r - h):
            j = i + h
            val = b[i][j] + sum((u[i][k] * b[k][j] for k in range(i + 1, j)), Fraction(0))
            u[i][j] = Fraction(-math.floor(val))
            red[(i, j)] = val + u[i][j]
    return tuple(red[k] for k in sorted(red))


def _reduce_right(b: Matrix, free: set[tuple[int, int]]) -> tuple[Fraction, ...]:
    """Representative of b * Gamma' with Gamma' the integral points on ``free`` positions."""
    r = len(b)
    t = _identity(r)
    red = {}
    for h in range(1, r):
        for i in range(r - h):
            j = i + h
            val = b[i][j] + sum((b[i][k] * t[k][j] for k in range(i + 1, j)), Fraction(0))
            if (i, j) in free:
                t[i][j] = Fraction(-math.floor(val))
                val += t[i][j]
                red[(i, j)] = val
    return tuple(red[k] for k in sorted(red))


def _psi(b: Sequence[Sequence[Fraction]], m: Sequence[int]) -> Fraction:
    return sum((m[i] * b[i][i + 1] for i in range(len(m))), Fraction(0))


# ---------------------------------------------------------------------------
# Classical and brute-force sums


def kloosterman_r2(m: int, n: int, c: int) -> RootOfUnitySum:
    """S(m, n; c) = sum over a d = 1 mod c of e((m a + n d) / c)."""
    if c < 1:
        raise ValueError("c must be positive")
    exps = [(m * a + n * pow(a, -1, c)) % c for a in range(c) if math.gcd(a, c) == 1] if c > 1 else [0]
    return RootOfUnitySum.from_exponents(c, exps)


@dataclass
class KloostermanResult:
    value: RootOfUnitySum
    saturated: bool
    tag: str = "ok"
    cosets: int = 0

    def __complex__(self) -> complex:
        return complex(self.value)


def _egcd_vector(v: Sequence[int]) -> tuple[int, ...]:
    """Integer y with y . v = 1 for primitive v."""
    g, coeffs = v[0], [1] + [0] * (len(v) - 1)
    for i in range(1, len(v)):
        # g = coeffs . v[:i]; combine with v[i]
        a, b = g, v[i]
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        coeffs = [c * x0 for c in coeffs]
        coeffs[i] = y0
        g = a
    if g < 0:
        coeffs = [-c for c in coeffs]
        g = -g
    if g != 1:
        raise ValueError("vector is not primitive")
    return tuple(coeffs)


def _cross(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _candidates_r2(c: ModuliTuple, bound: int) -> Iterable[list[list[int]]]:
    for cc, dd in product(range(-bound, bound + 1), repeat=2):
        if (cc, dd) == (0, 0) or math.gcd(cc, dd) != 1:
            continue
        if abs(cc or dd) != abs(c.c[0]):
            continue
        y = _egcd_vector((dd, -cc))  # a*dd - b*cc = 1
        yield [[y[0], y[1]], [cc, dd]]


def _candidates_r3(c: ModuliTuple, bound: int) -> Iterable[list[list[int]]]:
    c1, c2 = abs(c.c[0]), abs(c.c[1])
    rng = range(-bound, bound + 1)
    for v in product(rng, repeat=3):
        if v == (0, 0, 0) or math.gcd(*v) != 1:
            continue
        lead = next(x for x in v if x)
        if abs(lead) != c1:
            continue
        y = _egcd_vector(v)
        t = max(i for i in range(3) if v[i])
        others = [i for i in range(3) if i != t]
        for free in product(rng, repeat=2):
            s = free[0] * v[others[0]] + free[1] * v[others[1]]
            if s % v[t]:
                continue
            q = [0, 0, 0]
            q[others[0]], q[others[1]], q[t] = free[0], free[1], -s // v[t]
            if abs(q[t]) > bound or math.gcd(*q) != 1:
                continue
            # bottom-two minors are (p12, p13, p23) = (q3, -q2, q1)
            minors = (q[2], -q[1], q[0])
            if abs(next(x for x in minors if x)) != c2:
                continue
            row2 = _cross(y, q)  # row2 x v = q
            z = _egcd_vector(q)  # z . q = 1 gives det 1
            yield [list(z), list(row2), list(v)]


@lru_cache(maxsize=256)
def _coset_table(w_perm: tuple[int, ...], c: tuple[int, ...], bound: int) -> dict:
    w = WeylElement(w_perm)
    mod = ModuliTuple(c)
    gen = _candidates_r2 if w.rank == 2 else _candidates_r3
    target = tuple(mod.cstar())
    free = {(i, j) for i in range(w.rank) for j in range(i + 1, w.rank)} - _upper_positions(w)
    table = {}
    for g in gen(mod, bound):
        f = bruhat_decompose(g)
        if f.w.perm != w_perm or f.cstar != target:
            continue
        b1 = [list(x) for x in f.b1]
        b2 = [list(x) for x in f.b2]
        key = (_reduce_left(b1), _reduce_right(b2, free))
        table.setdefault(key, (b1, b2))
    return table


def _identity_cell(w: WeylElement, c: ModuliTuple) -> bool:
    return all(p == i for i, p in enumerate(w.perm))


def kloosterman_brute(w: WeylElement, m: Sequence[int], n: Sequence[int], c: ModuliTuple,
                      bound: int | None = None) -> KloostermanResult:
    """Double-coset sum of psi_m(b1) psi_n(b2) over SL_r(Z) in the cell (w, c), r in {2, 3}.

    ``bound`` caps the entries of the bottom row and of the bottom-two-row
    Plucker vector; saturation means the coset set was already complete at
    bound // 2.
    """
    r = w.rank
    if r not in (2, 3):
        raise ValueError("brute-force evaluation is implemented for r = 2, 3")
    if len(m) != r - 1 or len(n) != r - 1 or c.rank != r:
        raise ValueError("rank mismatch")
    if not w.is_block_antidiagonal():
        return KloostermanResult(RootOfUnitySum.zero(), True, "support-lemma")
    if _identity_cell(w, c):
        # Gamma_N itself: a single coset when c* = 1, none otherwise.
        ok = all(x == 1 for x in c.cstar())
        val = RootOfUnitySum.from_exponents(1, [0]) if ok else RootOfUnitySum.zero()
        return KloostermanResult(val, True, "identity-cell", int(ok))
    compat = compatibility_check(w, m, n, c)
    if not compat.feasible:
        return KloostermanResult(RootOfUnitySum.zero(), True, "incompatible")
    if bound is None:
        bound = 2 * math.prod(abs(x) for x in c.c)
    table = _coset_table(w.perm, c.c, bound)
    # below bound 2 there is no smaller enumeration to compare against
    saturated = bound >= 2 and set(table) == set(_coset_table(w.perm, c.c, bound // 2))
    if not saturated:
        log.warning("coset enumeration not saturated at bound %d for %s, c=%s", bound, w.perm, c.c)
    fracs = [_psi(b1, m) + _psi(b2, n) for b1, b2 in table.values()]
    val = RootOfUnitySum.from_fractions(fracs) if fracs else RootOfUnitySum.zero()
    return KloostermanResult(val, saturated, "ok" if saturated else "unsaturated", len(table))
