"""Vectorial Boolean functions on n-bit words.

A function F: F_2^n -> F_2^n is stored as a lookup table of length 2^n,
``lut[x] = F(x)`` with both sides plain ints.  Input and output masks use
the same convention as :mod:`qapn.gf2`: coordinate 1 of a vector is the
most significant bit, and the pairing <a, x> is the parity of ``a & x``
(symmetric, so mask arithmetic never needs to know about bit order).

Walsh values are W(a, b) = sum_x (-1)^{<a,x> + <b,F(x)>}.  The extended
Walsh spectrum collects |W| over *all* pairs (a, b) including b = 0;
component spectra that drop the b = 0 row are available separately since
tabulated spectra usually omit it.
"""

from __future__ import annotations

from collections import Counter
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


def mobius_transform(lut: Sequence[int]) -> list[int]:
    """XOR-subset (Moebius) transform; self-inverse, maps LUT <-> ANF table."""
    out = list(lut)
    size = len(out)
    h = 1
    while h < size:
        for base in range(0, size, h * 2):
            for i in range(base, base + h):
                out[i + h] ^= out[i]
        h *= 2
    return out


def anf(lut: Sequence[int]) -> list[int]:
    """Coefficient table a_u of F(x) = xor_{u subset x} a_u."""
    return mobius_transform(lut)


def algebraic_degree(lut: Sequence[int]) -> int:
    coeffs = mobius_transform(lut)
    deg = 0
    for u, a_u in enumerate(coeffs):
        if a_u and u.bit_count() > deg:
            deg = u.bit_count()
    return deg


def walsh_matrix(lut: Sequence[int]) -> np.ndarray:
    """All Walsh values as an int32 array, rows = output mask b, cols = input mask a."""
    size = len(lut)
    arr = np.asarray(lut, dtype=np.uint32)
    masks = np.arange(size, dtype=np.uint32)
    signs = 1 - 2 * (np.bitwise_count(masks[:, None] & arr[None, :]).astype(np.int32) & 1)
    # in-place fast Walsh-Hadamard transform along the x axis
    h = 1
    while h < size:
        for base in range(0, size, h * 2):
            top = signs[:, base:base + h].copy()
            bot = signs[:, base + h:base + 2 * h]
            signs[:, base:base + h] = top + bot
            signs[:, base + h:base + 2 * h] = top - bot
        h *= 2
    return signs


def component_walsh_spectrum(lut: Sequence[int]) -> Counter[int]:
    """Multiset of |W(a, b)| over all a and b != 0."""
    w = walsh_matrix(lut)
    values, counts = np.unique(np.abs(w[1:, :]), return_counts=True)
    return Counter(dict(zip(values.tolist(), counts.tolist())))


def extended_walsh_spectrum(lut: Sequence[int]) -> Counter[int]:
    """Multiset of |W(a, b)| over all pairs, the b = 0 row included."""
    w = walsh_matrix(lut)
    values, counts = np.unique(np.abs(w), return_counts=True)
    return Counter(dict(zip(values.tolist(), counts.tolist())))


def linearity(lut: Sequence[int]) -> int:
    w = walsh_matrix(lut)
    return int(np.abs(w[1:, :]).max())


def ddt(lut: Sequence[int]) -> np.ndarray:
    """Difference distribution table, ddt[a][b] = #{x : F(x+a)+F(x) = b}."""
    size = len(lut)
    arr = np.asarray(lut, dtype=np.int64)
    idx = np.arange(size)
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        table[a] = np.bincount(arr[idx ^ a] ^ arr, minlength=size)
    return table


def differential_spectrum(lut: Sequence[int]) -> Counter[int]:
    """Multiset of DDT entries over rows a != 0 (all b, zero entries included)."""
    table = ddt(lut)
    values, counts = np.unique(table[1:, :], return_counts=True)
    return Counter(dict(zip(values.tolist(), counts.tolist())))


def is_apn(lut: Sequence[int]) -> bool:
    """True when every equation F(x)+F(x+a) = b with a != 0 has at most 2 solutions."""
    table = ddt(lut)
    return int(table[1:, :].max()) <= 2


def is_permutation(lut: Sequence[int]) -> bool:
    return sorted(lut) == list(range(len(lut)))


def format_spectrum(spec: Counter[int] | dict[int, int]) -> str:
    inner = ",".join(f"{v}:{spec[v]}" for v in sorted(spec) if spec[v])
    return "{" + inner + "}"


def parse_spectrum(text: str) -> Counter[int]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"malformed spectrum: {text!r}")
    body = text[1:-1].strip()
    out: Counter[int] = Counter()
    if not body:
        return out
    for item in body.split(","):
        v, _, m = item.partition(":")
        out[int(v)] = int(m)
    return out


class Vbf:
    """A vectorial Boolean function with cached derived data."""

    __slots__ = ("n", "lut", "__dict__")

    def __init__(self, lut: Iterable[int]):
        table = tuple(int(v) for v in lut)
        size = len(table)
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise ValueError(f"LUT length {size} is not a power of two >= 2")
        if any(v < 0 or v >= size for v in table):
            raise ValueError("LUT values out of range")
        self.n = n
        self.lut = table

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vbf) and self.lut == other.lut

    def __hash__(self) -> int:
        return hash(self.lut)

    def __repr__(self) -> str:
        return f"Vbf(n={self.n}, lut={list(self.lut)})"

    def __call__(self, x: int) -> int:
        return self.lut[x]

    @cached_property
    def degree(self) -> int:
        return algebraic_degree(self.lut)

    @cached_property
    def ddt(self) -> np.ndarray:
        return ddt(self.lut)

    @cached_property
    def is_apn(self) -> bool:
        return int(self.ddt[1:, :].max()) <= 2

    @cached_property
    def is_permutation(self) -> bool:
        return is_permutation(self.lut)

    @cached_property
    def walsh(self) -> np.ndarray:
        return walsh_matrix(self.lut)

    @cached_property
    def linearity(self) -> int:
        return int(np.abs(self.walsh[1:, :]).max())

    @cached_property
    def component_spectrum(self) -> Counter[int]:
        values, counts = np.unique(np.abs(self.walsh[1:, :]), return_counts=True)
        return Counter(dict(zip(values.tolist(), counts.tolist())))

    @cached_property
    def extended_spectrum(self) -> Counter[int]:
        values, counts = np.unique(np.abs(self.walsh), return_counts=True)
        return Counter(dict(zip(values.tolist(), counts.tolist())))

    @cached_property
    def differential_spectrum(self) -> Counter[int]:
        values, counts = np.unique(self.ddt[1:, :], return_counts=True)
        return Counter(dict(zip(values.tolist(), counts.tolist())))


# --- LUT file format -------------------------------------------------------
#
#   # optional comment lines
#   n=8
#   00 01 1d 2f ...          (2^n hex values, whitespace separated, any split
#                             across subsequent lines)

def parse_lut_text(text: str) -> Vbf:
    lines = text.splitlines()
    i = 0
    while i < len(lines) and (not lines[i].strip() or lines[i].lstrip().startswith("#")):
        i += 1
    if i == len(lines) or not lines[i].strip().startswith("n="):
        raise ValueError("LUT file must start with an 'n=<dim>' line")
    try:
        n = int(lines[i].strip()[2:])
    except ValueError as exc:
        raise ValueError(f"bad dimension line: {lines[i].strip()!r}") from exc
    if not 1 <= n <= 20:
        raise ValueError(f"dimension {n} out of range")
    tokens: list[str] = []
    for line in lines[i + 1:]:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens.extend(line.split())
    if len(tokens) != 1 << n:
        raise ValueError(f"expected {1 << n} values, found {len(tokens)}")
    try:
        values = [int(t, 16) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"non-hex value in LUT body: {exc}") from exc
    if any(v >= 1 << n for v in values):
        raise ValueError("LUT value out of range for declared dimension")
    return Vbf(values)


def format_lut_text(f: Vbf | Sequence[int], comment: str | None = None) -> str:
    lut = f.lut if isinstance(f, Vbf) else tuple(f)
    n = (len(lut)).bit_length() - 1
    width = (n + 3) // 4
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"n={n}")
    per_line = max(1, 64 // (width + 1))
    for base in range(0, len(lut), per_line):
        lines.append(" ".join(f"{v:0{width}x}" for v in lut[base:base + per_line]))
    return "\n".join(lines) + "\n"


def read_lut_file(path: str) -> Vbf:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lut_text(fh.read())


def write_lut_file(path: str, f: Vbf | Sequence[int], comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_lut_text(f, comment))
