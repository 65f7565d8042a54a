"""Reference functions with externally recorded properties.

Each entry pins a univariate representation over a small field together
with the element its coefficients are powers of.  That element is
anchored by its minimal polynomial rather than by whatever generator the
field implementation prefers, so the tables come out the same under any
internal representation; picking a different root only moves the
function within its linear-equivalence class, which no recorded property
can see.  `run_checks` rebuilds every table from scratch and re-derives
each claim, one report line per claim.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .boolfun import (
    algebraic_degree,
    component_walsh_spectrum,
    format_spectrum,
    is_apn,
    linearity,
)
from .field import Field, lut_to_univariate, univariate_to_lut

# extended Walsh value distributions (rows b != 0) seen on known eight-bit
# quadratic APN functions; the first is the classical one, the last is the
# linearity-128 outlier
SPECTRA_8 = (
    Counter({0: 16320, 16: 43520, 32: 5440}),
    Counter({0: 15600, 16: 44544, 32: 5120, 64: 16}),
    Counter({0: 14880, 16: 45568, 32: 4800, 64: 32}),
    Counter({0: 14160, 16: 46592, 32: 4480, 64: 48}),
    Counter({0: 13440, 16: 47616, 32: 4160, 64: 64}),
    Counter({0: 12540, 16: 48640, 32: 4096, 128: 4}),
)

SPECTRUM_CLASSICAL_8 = SPECTRA_8[0]
SPECTRUM_LINEARITY128_8 = SPECTRA_8[5]


@dataclass(frozen=True)
class ReferenceFunction:
    """A univariate polynomial with coefficients written as anchor powers."""

    name: str
    n: int
    anchor_min_poly: int | None          # None: all coefficients equal 1
    terms: tuple[tuple[int, int], ...]   # (anchor power, exponent)

    def anchor(self, spec: Field) -> int:
        if self.anchor_min_poly is None:
            return 1
        return spec.element_with_min_poly(self.anchor_min_poly)

    def table(self) -> list[int]:
        spec = Field(self.n)
        u = self.anchor(spec)
        return univariate_to_lut(
            spec, [(spec.pow(u, p), e) for p, e in self.terms])


PERMUTATION_9A = ReferenceFunction(
    "nine-bit-permutation-a", 9, 0b1011,
    ((0, 3), (1, 10), (2, 17), (4, 80), (5, 192)))

PERMUTATION_9B = ReferenceFunction(
    "nine-bit-permutation-b", 9, 0b1011,
    ((0, 3), (2, 10), (1, 24), (4, 80), (6, 136)))

LINEARITY128_8 = ReferenceFunction(
    "eight-bit-linearity-128", 8, 0b1_0001_1101,
    ((0, 3), (60, 5), (191, 6), (198, 9), (232, 10), (120, 12), (54, 17),
     (64, 18), (159, 20), (144, 24), (248, 33), (203, 34), (32, 36),
     (18, 40), (216, 48), (78, 65), (46, 66), (91, 68), (27, 72), (70, 80),
     (52, 96), (224, 129), (18, 130), (197, 136), (253, 144), (0, 160)))

CUBE_8 = ReferenceFunction("eight-bit-cube", 8, None, ((0, 3),))

KIM_6 = ReferenceFunction("six-bit-kim", 6, 0b101_1011,
                          ((0, 3), (0, 10), (1, 24)))

REFERENCE_FUNCTIONS = (PERMUTATION_9A, PERMUTATION_9B, LINEARITY128_8,
                       CUBE_8, KIM_6)


@dataclass(frozen=True)
class Claim:
    subject: str
    what: str
    expected: str
    got: str

    @property
    def passed(self) -> bool:
        return self.expected == self.got

    def line(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        return f"{word} {self.subject}: {self.what} expected={self.expected} got={self.got}"


def _spectrum_claim(subject: str, what: str, expected: Counter,
                    got: Counter) -> Claim:
    return Claim(subject, what, format_spectrum(expected), format_spectrum(got))


def _exponents_mod(spec: Field, table, modulus: int) -> set[int]:
    return {e % modulus for _, e in lut_to_univariate(spec, table)}


def _self_similar(spec: Field, table, u: int) -> bool:
    # F(u^5 x) = u F(x) at every point
    u5 = spec.pow(u, 5)
    return all(table[spec.mul(u5, x)] == spec.mul(u, table[x])
               for x in range(spec.size))


def run_checks(names: Iterable[str] | None = None) -> list[Claim]:
    """Re-derive every recorded property; one Claim per check."""
    wanted = set(names) if names is not None else None
    out: list[Claim] = []

    def claim(subject: str, what: str, expected, got) -> None:
        out.append(Claim(subject, what, str(expected), str(got)))

    for ref in (PERMUTATION_9A, PERMUTATION_9B):
        if wanted is not None and ref.name not in wanted:
            continue
        spec = Field(ref.n)
        t = ref.table()
        claim(ref.name, "bijective", True, len(set(t)) == len(t))
        claim(ref.name, "APN", True, is_apn(t))
        claim(ref.name, "degree", 2, algebraic_degree(t))
        claim(ref.name, "exponents are 3 mod 7", {3}, _exponents_mod(spec, t, 7))
        claim(ref.name, "F(u^5 x) = u F(x)", True,
              _self_similar(spec, t, ref.anchor(spec)))

    if wanted is None or LINEARITY128_8.name in wanted:
        t = LINEARITY128_8.table()
        claim(LINEARITY128_8.name, "APN", True, is_apn(t))
        claim(LINEARITY128_8.name, "degree", 2, algebraic_degree(t))
        claim(LINEARITY128_8.name, "linearity", 128, linearity(t))
        out.append(_spectrum_claim(LINEARITY128_8.name, "Walsh spectrum",
                                   SPECTRUM_LINEARITY128_8,
                                   component_walsh_spectrum(t)))

    if wanted is None or CUBE_8.name in wanted:
        t = CUBE_8.table()
        claim(CUBE_8.name, "APN", True, is_apn(t))
        claim(CUBE_8.name, "degree", 2, algebraic_degree(t))
        claim(CUBE_8.name, "linearity", 32, linearity(t))
        out.append(_spectrum_claim(CUBE_8.name, "Walsh spectrum",
                                   SPECTRUM_CLASSICAL_8,
                                   component_walsh_spectrum(t)))

    if wanted is None or KIM_6.name in wanted:
        spec = Field(6)
        t = KIM_6.table()
        claim(KIM_6.name, "APN", True, is_apn(t))
        claim(KIM_6.name, "degree", 2, algebraic_degree(t))
        claim(KIM_6.name, "exponents are 3 mod 7", {3}, _exponents_mod(spec, t, 7))

    return out


def format_report(claims: Iterable[Claim]) -> str:
    return "\n".join(c.line() for c in claims)
