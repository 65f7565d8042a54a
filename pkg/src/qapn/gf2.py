"""Bit-packed exact linear algebra over GF(2).

Polynomials over GF(2) are plain ints: bit i holds the coefficient of X^i,
so X^3 + X + 1 is 0b1011 = 11.  The zero polynomial is the int 0 (its degree
is reported as -1).

Vectors in GF(2)^n are ints with coordinate 1 in the most significant bit and
coordinate n in the least significant bit.  Matrices store one int per row,
top row first, so ``apply`` shifts row parities in from the top.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = [
    "poly_degree", "poly_mul", "poly_divmod", "poly_div", "poly_mod",
    "poly_gcd", "poly_lcm", "poly_powmod", "poly_is_irreducible",
    "poly_factor", "poly_from_hex", "poly_to_hex", "poly_str",
    "BitMatrix", "Subspace", "companion", "block_diag",
    "minimal_polynomial", "matrix_order", "invariant_factors", "rcf",
    "fixed_space", "cycle_count",
]


# ---------------------------------------------------------------------------
# polynomials over GF(2)

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    r = 0
    while a:
        if a & 1:
            r ^= b
        a >>= 1
        b <<= 1
    return r


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = poly_degree(b)
    q = 0
    while poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_div(a: int, b: int) -> int:
    q, r = poly_divmod(a, b)
    if r:
        raise ValueError("non-exact polynomial division")
    return q


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return poly_div(poly_mul(a, b), poly_gcd(a, b))


def poly_powmod(p: int, e: int, m: int) -> int:
    r = 1 % m if m != 1 else 0
    p = poly_mod(p, m)
    while e:
        if e & 1:
            r = poly_mod(poly_mul(r, p), m)
        p = poly_mod(poly_mul(p, p), m)
        e >>= 1
    return r


def _poly_derivative(p: int) -> int:
    # coefficient i*p_i: only odd i survive, landing at position i-1
    r = 0
    i = 1
    while (p >> i):
        if (p >> i) & 1:
            r |= 1 << (i - 1)
        i += 2
    return r


def _poly_sqrt(p: int) -> int:
    # valid when p has even exponents only (p = r(X)^2 over GF(2))
    r = 0
    i = 0
    while (p >> (2 * i)):
        if (p >> (2 * i)) & 1:
            r |= 1 << i
        i += 1
    return r


def poly_is_irreducible(p: int) -> bool:
    d = poly_degree(p)
    if d < 1:
        return False
    if d == 1:
        return True
    if not (p & 1):  # divisible by X
        return False
    # x^(2^d) == x mod p, and x^(2^(d/r)) - x coprime to p for prime r | d
    x = 2
    if poly_powmod(x, 1 << d, p) != poly_mod(x, p):
        return False
    for r in _prime_divisors(d):
        h = poly_powmod(x, 1 << (d // r), p) ^ poly_mod(x, p)
        if poly_gcd(h, p) != 1:
            return False
    return True


def _prime_divisors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


_edf_rng = random.Random(0x6F2)


def _equal_degree_split(f: int, d: int) -> list[int]:
    # f = product of distinct irreducibles, all of degree d
    if poly_degree(f) == d:
        return [f]
    while True:
        h = _edf_rng.getrandbits(poly_degree(f)) | 1
        h = poly_mod(h, f)
        if h in (0, 1):
            continue
        # trace map of h into GF(2)
        t = 0
        cur = h
        for _ in range(d):
            t ^= cur
            cur = poly_mod(poly_mul(cur, cur), f)
        g = poly_gcd(t, f)
        if 0 < poly_degree(g) < poly_degree(f):
            rest = poly_div(f, g)
            return _equal_degree_split(g, d) + _equal_degree_split(rest, d)


def _distinct_degree_factor(f: int) -> list[int]:
    # f squarefree; returns its irreducible factors
    out = []
    x = 2
    h = x
    d = 0
    while poly_degree(f) > 0:
        d += 1
        if 2 * d > poly_degree(f):
            out.append(f)
            break
        h = poly_powmod(h, 2, f)
        g = poly_gcd(h ^ poly_mod(x, f), f)
        if poly_degree(g) > 0:
            out.extend(_equal_degree_split(g, d))
            f = poly_div(f, g)
            h = poly_mod(h, f)
    return out


def _squarefree_parts(f: int) -> dict[int, int]:
    # maps squarefree products to their multiplicity in f
    parts: dict[int, int] = {}
    fp = _poly_derivative(f)
    if fp == 0:
        for q, m in _squarefree_parts(_poly_sqrt(f)).items():
            parts[q] = parts.get(q, 0) + 2 * m
        return parts
    g = poly_gcd(f, fp)
    w = poly_div(f, g)
    i = 1
    while poly_degree(w) > 0:
        y = poly_gcd(w, g)
        z = poly_div(w, y)
        if poly_degree(z) > 0:
            parts[z] = parts.get(z, 0) + i
        i += 1
        w = y
        g = poly_div(g, y)
    if poly_degree(g) > 0:
        for q, m in _squarefree_parts(_poly_sqrt(g)).items():
            parts[q] = parts.get(q, 0) + 2 * m
    return parts


def poly_factor(p: int) -> list[tuple[int, int]]:
    """Factor p into irreducibles, returned as sorted (factor, multiplicity)."""
    if p == 0:
        raise ValueError("cannot factor the zero polynomial")
    factors: dict[int, int] = {}
    for part, mult in _squarefree_parts(p).items():
        for f in _distinct_degree_factor(part):
            factors[f] = factors.get(f, 0) + mult
    return sorted(factors.items(), key=lambda fm: (poly_degree(fm[0]), fm[0]))


def poly_from_hex(s: str) -> int:
    return int(s, 16)


def poly_to_hex(p: int) -> str:
    return format(p, "x")


def poly_str(p: int) -> str:
    if p == 0:
        return "0"
    terms = []
    for i in range(poly_degree(p), -1, -1):
        if (p >> i) & 1:
            terms.append("1" if i == 0 else ("X" if i == 1 else f"X^{i}"))
    return "+".join(terms)


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class BitMatrix:
    """n x n matrix over GF(2); rows[0] is the top row, MSB = column 1."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("row count does not match dimension")
        mask = (1 << self.n) - 1
        if any(r < 0 or r > mask for r in self.rows):
            raise ValueError("row out of range for dimension")

    @staticmethod
    def identity(n: int) -> "BitMatrix":
        return BitMatrix(n, tuple(1 << (n - 1 - i) for i in range(n)))

    @staticmethod
    def zero(n: int) -> "BitMatrix":
        return BitMatrix(n, (0,) * n)

    @staticmethod
    def from_cols(n: int, cols: list[int]) -> "BitMatrix":
        rows = []
        for r in range(n):
            acc = 0
            for c in range(n):
                acc |= ((cols[c] >> (n - 1 - r)) & 1) << (n - 1 - c)
            rows.append(acc)
        return BitMatrix(n, tuple(rows))

    def col(self, j: int) -> int:
        """Column j (0-based) as a vector int."""
        acc = 0
        for r in range(self.n):
            acc |= ((self.rows[r] >> (self.n - 1 - j)) & 1) << (self.n - 1 - r)
        return acc

    def apply(self, x: int) -> int:
        y = 0
        for r in self.rows:
            y = (y << 1) | ((r & x).bit_count() & 1)
        return y

    def apply_table(self) -> tuple[int, ...]:
        return tuple(self.apply(x) for x in range(1 << self.n))

    def __mul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        orows = other.rows
        rows = []
        for ra in self.rows:
            acc = 0
            m = ra
            while m:
                low = m & -m
                acc ^= orows[n - low.bit_length()]
                m ^= low
            rows.append(acc)
        return BitMatrix(n, tuple(rows))

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __pow__(self, k: int) -> "BitMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        acc = BitMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_cols(self.n, list(self.rows))

    def rank(self) -> int:
        pivots: dict[int, int] = {}
        for r in self.rows:
            while r:
                b = r.bit_length()
                if b in pivots:
                    r ^= pivots[b]
                else:
                    pivots[b] = r
                    break
        return len(pivots)

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> "BitMatrix":
        n = self.n
        a = list(self.rows)
        b = [1 << (n - 1 - i) for i in range(n)]
        r = 0
        for c in range(n - 1, -1, -1):
            bit = 1 << c
            piv = next((i for i in range(r, n) if a[i] & bit), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[r], a[piv] = a[piv], a[r]
            b[r], b[piv] = b[piv], b[r]
            for i in range(n):
                if i != r and a[i] & bit:
                    a[i] ^= a[r]
                    b[i] ^= b[r]
            r += 1
        return BitMatrix(n, tuple(b))

    def kernel(self) -> list[int]:
        """Basis of {x : Mx = 0}, deterministic order."""
        n = self.n
        # reduced row echelon form of the equation rows
        pivots: dict[int, int] = {}
        for r in self.rows:
            while r:
                b = r.bit_length()
                if b in pivots:
                    r ^= pivots[b]
                else:
                    pivots[b] = r
                    break
        # eliminate pivot bits from other rows (Jordan step)
        for b in sorted(pivots, reverse=True):
            for b2 in pivots:
                if b2 != b and (pivots[b2] >> (b - 1)) & 1:
                    pivots[b2] ^= pivots[b]
        pivot_bits = set(pivots)
        basis = []
        for fb in range(n, 0, -1):
            if fb in pivot_bits:
                continue
            v = 1 << (fb - 1)
            for b, row in pivots.items():
                if (row >> (fb - 1)) & 1:
                    v |= 1 << (b - 1)
            basis.append(v)
        return basis

    def to_text(self) -> str:
        return "\n".join(format(r, f"0{self.n}b") for r in self.rows)

    @staticmethod
    def from_text(text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        n = len(lines)
        rows = []
        for ln in lines:
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ValueError("malformed matrix text")
            rows.append(int(ln, 2))
        return BitMatrix(n, tuple(rows))


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of GF(2)^n given by an independent basis."""

    n: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self):
        for mask in range(1 << self.dim):
            v = 0
            m = mask
            i = 0
            while m:
                if m & 1:
                    v ^= self.basis[i]
                m >>= 1
                i += 1
            yield v

    def contains(self, v: int) -> bool:
        pivots: dict[int, int] = {}
        for r in self.basis:
            while r:
                b = r.bit_length()
                if b in pivots:
                    r ^= pivots[b]
                else:
                    pivots[b] = r
                    break
        while v:
            b = v.bit_length()
            if b not in pivots:
                return False
            v ^= pivots[b]
        return True


# ---------------------------------------------------------------------------
# canonical forms

def companion(q: int) -> BitMatrix:
    """Companion matrix of q: subdiagonal ones, coefficients in the last column."""
    d = poly_degree(q)
    if d < 1:
        raise ValueError("companion matrix needs degree >= 1")
    rows = []
    for i in range(1, d + 1):
        r = 0
        if i >= 2:
            r |= 1 << (d - (i - 1))
        if (q >> (i - 1)) & 1:
            r |= 1
        rows.append(r)
    return BitMatrix(d, tuple(rows))


def block_diag(blocks: list[BitMatrix]) -> BitMatrix:
    n = sum(b.n for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append(r << (n - offset - b.n))
        offset += b.n
    return BitMatrix(n, tuple(rows))


def _flatten(m: BitMatrix) -> int:
    acc = 0
    for r in m.rows:
        acc = (acc << m.n) | r
    return acc


def minimal_polynomial(m: BitMatrix) -> int:
    """Least-degree monic p with p(M) = 0."""
    n = m.n
    pivots: dict[int, tuple[int, int]] = {}  # leading bit -> (vector, combo)
    power = BitMatrix.identity(n)
    for k in range(n + 1):
        v = _flatten(power)
        combo = 1 << k
        while v:
            b = v.bit_length()
            if b in pivots:
                pv, pc = pivots[b]
                v ^= pv
                combo ^= pc
            else:
                pivots[b] = (v, combo)
                combo = 0
                break
        if v == 0 and combo:
            return combo
        power = power * m
    raise AssertionError("minimal polynomial not found within degree n")


def matrix_order(m: BitMatrix, cap: int | None = None) -> int:
    """Multiplicative order of an invertible matrix."""
    if not m.is_invertible():
        raise ValueError("order is defined for invertible matrices only")
    if cap is None:
        cap = (1 << m.n) * m.n
    ident = BitMatrix.identity(m.n)
    acc = m
    k = 1
    while acc != ident:
        acc = acc * m
        k += 1
        if k > cap:
            raise RuntimeError(f"order exceeds cap {cap}")
    return k


def invariant_factors(m: BitMatrix) -> list[int]:
    """Non-unit invariant factors of M, ascending under divisibility.

    Computed as the Smith normal form over GF(2)[X] of X*I + M; the product
    is the characteristic polynomial and the last entry is the minimal
    polynomial.
    """
    n = m.n
    # polynomial matrix entries; X is the int 2
    P = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = (m.rows[i] >> (n - 1 - j)) & 1
            P[i][j] = (2 if i == j else 0) ^ e

    def swap_rows(a, b):
        P[a], P[b] = P[b], P[a]

    def swap_cols(a, b):
        for row in P:
            row[a], row[b] = row[b], row[a]

    for k in range(n):
        while True:
            # locate a minimal-degree nonzero entry in the trailing block
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    if P[i][j] and (best is None or poly_degree(P[i][j]) < best[0]):
                        best = (poly_degree(P[i][j]), i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != k:
                swap_rows(k, bi)
            if bj != k:
                swap_cols(k, bj)
            piv = P[k][k]
            dirty = False
            for i in range(k + 1, n):
                if P[i][k]:
                    q, _ = poly_divmod(P[i][k], piv)
                    for j in range(k, n):
                        P[i][j] ^= poly_mul(q, P[k][j])
                    if P[i][k]:
                        dirty = True
            for j in range(k + 1, n):
                if P[k][j]:
                    q, _ = poly_divmod(P[k][j], piv)
                    for i in range(k, n):
                        P[i][j] ^= poly_mul(q, P[i][k])
                    if P[k][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if P[i][j] and poly_mod(P[i][j], piv):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(k, n):
                P[k][j] ^= P[offender][j]
        if P[k][k] == 0:
            raise AssertionError("unexpected zero pivot in Smith form")
    diag = [P[i][i] for i in range(n)]
    out = [d for d in diag if poly_degree(d) > 0]
    out.sort(key=lambda q: (poly_degree(q), q))
    for a, b in zip(out, out[1:]):
        if poly_mod(b, a):
            raise AssertionError("invariant factor chain broken")
    return out


def rcf(m: BitMatrix) -> BitMatrix:
    """Rational canonical form: block diagonal of companion matrices of the
    invariant factors, smallest block first."""
    if not m.is_invertible():
        raise ValueError("rcf restricted to invertible matrices here")
    return block_diag([companion(q) for q in invariant_factors(m)])


def fixed_space(m: BitMatrix) -> Subspace:
    """Kernel of M + I: the fixed points of x -> Mx."""
    return Subspace(m.n, tuple((m ^ BitMatrix.identity(m.n)).kernel()))


def cycle_count(m: BitMatrix) -> int:
    """Number of cycles of the permutation x -> Mx on all 2^n points."""
    if m.n > 16:
        raise ValueError("cycle_count supports n <= 16")
    if not m.is_invertible():
        raise ValueError("cycle_count needs an invertible matrix")
    size = 1 << m.n
    table = [m.apply(x) for x in range(size)]
    seen = bytearray(size)
    cycles = 0
    for x in range(size):
        if seen[x]:
            continue
        cycles += 1
        y = x
        while not seen[y]:
            seen[y] = 1
            y = table[y]
    return cycles
