"""GF(2^n) arithmetic and univariate representation of n-bit functions.

Field elements are ints whose bits are coefficients in the polynomial
basis, constant term = bit 0 (so the class of X is 2).  A univariate
polynomial is a tuple of (coefficient, exponent) terms with nonzero
coefficients and distinct exponents, sorted by exponent.

Every function F: GF(2^n) -> GF(2^n) equals a unique polynomial of
degree < 2^n in GF(2^n)[X]/(X^{2^n} + X); conversion both ways uses
discrete-log tables, with interpolation driven by the closed form
c_0 = F(0), c_{2^n-1} = sum_a F(a), c_j = sum_{a != 0} F(a) a^{-j}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gf2 import BitMatrix, poly_degree, poly_is_irreducible

Term = tuple[int, int]
UnivariatePoly = tuple[Term, ...]


def default_modulus(n: int) -> int:
    """Preferred modulus per dimension; lexicographically smallest irreducible otherwise."""
    preferred = {
        6: 0b1011011,    # X^6+X^4+X^3+X+1
        8: 0b100011101,  # X^8+X^4+X^3+X^2+1
    }
    if n in preferred:
        return preferred[n]
    for p in range((1 << n) | 1, 1 << (n + 1), 2):
        if poly_is_irreducible(p):
            return p
    raise ValueError(f"no irreducible polynomial of degree {n}")


def _prime_factors(m: int) -> list[int]:
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


@dataclass(frozen=True)
class Field:
    """GF(2^n) with a fixed irreducible modulus."""

    n: int
    modulus: int = 0
    generator_hint: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.modulus == 0:
            object.__setattr__(self, "modulus", default_modulus(self.n))
        if poly_degree(self.modulus) != self.n or not poly_is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is not irreducible of degree {self.n}")

    @property
    def size(self) -> int:
        return 1 << self.n

    def mul(self, a: int, b: int) -> int:
        """Carry-less product reduced by the modulus."""
        acc = 0
        top = 1 << self.n
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return acc

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        e %= (1 << self.n) - 1
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        m = (1 << self.n) - 1
        order = m
        for q in _prime_factors(m):
            while order % q == 0 and self.pow(a, order // q) == 1:
                order //= q
        return order

    @cached_property
    def generator(self) -> int:
        m = (1 << self.n) - 1
        if self.generator_hint is not None:
            if self.order(self.generator_hint) != m:
                raise ValueError(f"element {self.generator_hint} does not generate the group")
            return self.generator_hint
        for g in range(2, self.size):
            if self.order(g) == m:
                return g
        return 1  # GF(2)

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log): exp[i] = g^i for i < 2^n-1; log[e] defined for e != 0."""
        m = self.size - 1
        exp = np.zeros(m, dtype=np.int64)
        log = np.zeros(self.size, dtype=np.int64)
        x = 1
        for i in range(m):
            exp[i] = x
            log[x] = i
            x = self.mul(x, self.generator)
        if x != 1:
            raise AssertionError("generator order mismatch")
        return exp, log

    def element_with_min_poly(self, p: int) -> int:
        """Smallest root of the irreducible p in this field; p's degree must divide n."""
        d = poly_degree(p)
        if d < 1 or self.n % d != 0 or not poly_is_irreducible(p):
            raise ValueError(f"{p:#x} is not an irreducible polynomial of degree dividing {self.n}")
        for e in range(self.size):
            acc = 0
            bits = p
            i = 0
            while bits:
                if bits & 1:
                    acc ^= self.pow(e, i)
                bits >>= 1
                i += 1
            if acc == 0:
                return e
        raise ValueError(f"no root of {p:#x} found")


def gf_mul(spec: Field, a: int, b: int) -> int:
    return spec.mul(a, b)


def multiplication_matrix(spec: Field, a: int) -> BitMatrix:
    """Multiplication by a as a matrix acting on coefficient vectors."""
    n = spec.n
    return BitMatrix.from_cols(n, [spec.mul(a, 1 << (n - 1 - c)) for c in range(n)])


def normalize_poly(terms) -> UnivariatePoly:
    by_exp: dict[int, int] = {}
    for c, e in terms:
        by_exp[e] = by_exp.get(e, 0) ^ c
    return tuple(sorted((c, e) for e, c in by_exp.items() if c))


def univariate_to_lut(spec: Field, poly) -> list[int]:
    terms = normalize_poly(poly)
    q = spec.size
    m = q - 1
    exp, log = spec._tables
    lut = np.zeros(q, dtype=np.int64)
    nonzero = np.arange(1, q)
    loga = log[nonzero]
    for c, e in terms:
        if e >= q:
            raise ValueError(f"exponent {e} out of range for n={spec.n}")
        if e == 0:
            lut ^= c
        else:
            lut[nonzero] ^= exp[(log[c] + e * loga) % m]
    return [int(v) for v in lut]


def lut_to_univariate(spec: Field, lut) -> UnivariatePoly:
    q = spec.size
    if len(lut) != q:
        raise ValueError(f"LUT length {len(lut)} does not match field size {q}")
    m = q - 1
    exp, log = spec._tables
    arr = np.asarray(lut, dtype=np.int64)
    terms: list[Term] = []
    if arr[0]:
        terms.append((int(arr[0]), 0))
    total = 0
    for v in lut:
        total ^= v
    if total:
        terms.append((total, m))
    support = np.nonzero(arr[1:])[0] + 1  # elements a != 0 with F(a) != 0
    if support.size:
        logs_fa = log[arr[support]]
        logs_a = log[support]
        for j in range(1, m):
            vals = exp[(logs_fa - j * logs_a) % m]
            c = int(np.bitwise_xor.reduce(vals))
            if c:
                terms.append((c, j))
    return normalize_poly(terms)


# --- CLI text form ---------------------------------------------------------
#
#   x^3 + g^60*x^5 + g*x^24 + g^7 + 1
#
# 'g' denotes the declared coefficient element (the field generator unless a
# generator minimal polynomial picks out another element).

def parse_polynomial(text: str, spec: Field, g: int | None = None) -> UnivariatePoly:
    if g is None:
        g = spec.generator
    terms: list[Term] = []
    for raw in text.replace("-", "+").split("+"):
        part = raw.strip().replace(" ", "")
        if not part:
            continue
        coeff = 1
        expo = 0
        for factor in part.split("*"):
            if not factor:
                raise ValueError(f"malformed term {raw!r}")
            if factor[0] in "gu":
                k = 1
                if factor[1:]:
                    if not factor[1] == "^":
                        raise ValueError(f"malformed term {raw!r}")
                    k = int(factor[2:])
                coeff = spec.mul(coeff, spec.pow(g, k))
            elif factor[0] == "x":
                e = 1
                if factor[1:]:
                    if not factor[1] == "^":
                        raise ValueError(f"malformed term {raw!r}")
                    e = int(factor[2:])
                expo += e
            else:
                try:
                    c = int(factor)
                except ValueError as exc:
                    raise ValueError(f"malformed term {raw!r}") from exc
                if c not in (0, 1):
                    raise ValueError(f"integer coefficients must be 0 or 1, got {factor!r}")
                coeff = spec.mul(coeff, c)
        if coeff:
            terms.append((coeff, expo))
    return normalize_poly(terms)


def format_polynomial(spec: Field, poly, g: int | None = None) -> str:
    """Render with coefficients as powers of g; every coefficient must be one."""
    if g is None:
        g = spec.generator
    powers: dict[int, int] = {}
    x = 1
    for k in range(spec.order(g)):
        powers.setdefault(x, k)
        x = spec.mul(x, g)
    parts = []
    for c, e in sorted(poly, key=lambda t: t[1]):
        if c not in powers:
            raise ValueError(f"coefficient {c:#x} is not a power of the display element")
        k = powers[c]
        if c == 1:
            cs = ""
        else:
            cs = "g*" if k == 1 else f"g^{k}*"
        if e == 0:
            parts.append("1" if c == 1 else cs[:-1])
        elif e == 1:
            parts.append(cs + "x")
        else:
            parts.append(cs + f"x^{e}")
    return " + ".join(parts) if parts else "0"


def parse_field_decl(text: str) -> tuple[Field, int]:
    """Parse 'n[,modulus-hex[,gen-minpoly-hex]]'; returns (field, coefficient element g)."""
    parts = [p.strip() for p in text.split(",")]
    if not 1 <= len(parts) <= 3:
        raise ValueError(f"malformed field declaration {text!r}")
    try:
        n = int(parts[0])
    except ValueError as exc:
        raise ValueError(f"bad dimension in field declaration {text!r}") from exc
    modulus = int(parts[1], 16) if len(parts) > 1 and parts[1] else 0
    spec = Field(n, modulus)
    if len(parts) > 2 and parts[2]:
        g = spec.element_with_min_poly(int(parts[2], 16))
    else:
        g = spec.generator
    return spec, g
