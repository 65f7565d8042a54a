"""Extended-affine inequivalence testing for quadratic APN functions.

For quadratic APN F and any a != 0 the set {F(x)+F(x+a)+F(a)+F(0)} is a
linear space of dimension n-1, so it has a unique nonzero orthogonal
vector; a -> that vector is the ortho-derivative of F.  EA-equivalent
functions have linear-equivalent ortho-derivatives, hence equal spectra.
Comparing the spectra therefore separates EA-classes one-sidedly:
different means inequivalent, equal decides nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .boolfun import (
    algebraic_degree,
    differential_spectrum,
    extended_walsh_spectrum,
    format_spectrum,
    is_apn,
)
from .gf2 import BitMatrix

INEQUIVALENT = "INEQUIVALENT"
UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class Fingerprint:
    """Spectra of the ortho-derivative, canonically serialized."""

    odw: str
    odd: str

    def __str__(self) -> str:
        return f"odw={self.odw} odd={self.odd}"


def ortho_derivative(table) -> list[int]:
    """The map a -> unique nonzero vector orthogonal to the derivative space."""
    table = list(table)
    size = len(table)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError("table length must be a power of two")
    if algebraic_degree(table) != 2:
        raise ValueError("ortho-derivative is defined for quadratic functions only")
    if not is_apn(table):
        raise ValueError("ortho-derivative needs an APN function")
    arr = np.asarray(table, dtype=np.int64)
    idx = np.arange(size)
    f0 = table[0]
    out = [0] * size
    for a in range(1, size):
        vals = np.unique(arr ^ arr[idx ^ a] ^ (table[a] ^ f0))
        if vals.shape[0] != 1 << (n - 1):
            raise ValueError("derivative image is not an (n-1)-dimensional space")
        pivots: dict[int, int] = {}
        for w in vals:
            w = int(w)
            while w:
                b = w.bit_length()
                if b in pivots:
                    w ^= pivots[b]
                else:
                    pivots[b] = w
                    break
            if len(pivots) == n - 1:
                break
        rows = sorted(pivots.values(), reverse=True)
        rows += [0] * (n - len(rows))
        kern = list(BitMatrix(n, tuple(rows)).kernel())
        if len(kern) != 1 or kern[0] == 0:
            raise ValueError("derivative space has no unique nonzero complement")
        w = kern[0]
        if np.any(np.bitwise_count(vals & w) & 1):
            raise AssertionError("complement fails the orthogonality identity")
        out[a] = w
    return out


def fingerprint(table) -> Fingerprint:
    pi = ortho_derivative(table)
    return Fingerprint(
        odw=format_spectrum(extended_walsh_spectrum(pi)),
        odd=format_spectrum(differential_spectrum(pi)),
    )


def inequivalent(f, g) -> str:
    """One-sided verdict: INEQUIVALENT on differing fingerprints, else UNDECIDED."""
    return INEQUIVALENT if fingerprint(f) != fingerprint(g) else UNDECIDED


# ---------------------------------------------------------------------------
# EA transformations, used to exercise fingerprint invariance

def random_invertible(n: int, rng: random.Random) -> BitMatrix:
    while True:
        m = BitMatrix(n, tuple(rng.randrange(1, 1 << n) for _ in range(n)))
        if m.is_invertible():
            return m


def random_ea_transform(table, rng: random.Random) -> list[int]:
    """B(F(Ax + a)) + Lx + c for random invertible A, B and arbitrary L."""
    size = len(table)
    n = size.bit_length() - 1
    outer = random_invertible(n, rng)
    inner = random_invertible(n, rng)
    lin = BitMatrix(n, tuple(rng.randrange(0, 1 << n) for _ in range(n)))
    a = rng.randrange(size)
    c = rng.randrange(size)
    return [
        outer.apply(table[inner.apply(x) ^ a]) ^ lin.apply(x) ^ c
        for x in range(size)
    ]
