"""Bit-packed linear algebra over GF(2).

A vector in GF(2)^n is a Python int whose bit i is coordinate i, so the
int 0b110 = 6 encodes the vector (0, 1, 1).  A matrix is a tuple of row
ints.  Matrices act on column vectors from the left: mat_vec(M, v) is
M @ v, and bit j of a text row is column j.  Widths up to 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

MAX_WIDTH = 64


class FormatError(ValueError):
    """Malformed text input; message carries a 1-based line number."""


class SingularMatrixError(ValueError):
    """Inverse or order requested for a non-invertible matrix."""


@dataclass(frozen=True)
class BitMatrix:
    """Immutable GF(2) matrix: rows[i] packs row i, bit j = column j."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if not 1 <= self.ncols <= MAX_WIDTH:
            raise ValueError(f"ncols must be in 1..{MAX_WIDTH}, got {self.ncols}")
        object.__setattr__(self, "rows", tuple(self.rows))
        mask = (1 << self.ncols) - 1
        for i, r in enumerate(self.rows):
            if not isinstance(r, int) or r < 0 or r > mask:
                raise ValueError(f"row {i} does not fit in {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_bits(cls, bits: Iterable[Iterable[int]]) -> "BitMatrix":
        """Build from dense 0/1 lists; bits[i][j] is entry (i, j)."""
        rows = []
        width = None
        for dense in bits:
            dense = list(dense)
            if width is None:
                width = len(dense)
            elif len(dense) != width:
                raise ValueError("ragged rows")
            rows.append(sum((1 << j) for j, b in enumerate(dense) if b))
        if width is None:
            raise ValueError("empty matrix needs an explicit width")
        return cls(tuple(rows), width)

    def column(self, j: int) -> int:
        """Column j packed as an int (bit i = entry in row i)."""
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r >> j) & 1) << i
        return out

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def identity(n: int) -> BitMatrix:
    return BitMatrix(tuple(1 << i for i in range(n)), n)


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix(tuple(m.column(j) for j in range(m.ncols)), max(m.nrows, 1))


def mat_vec(m: BitMatrix, v: int) -> int:
    """M @ v for a column vector v: bit i of the result is <row i, v>."""
    out = 0
    for i, r in enumerate(m.rows):
        out |= ((r & v).bit_count() & 1) << i
    return out


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product a @ b."""
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch: {a.nrows}x{a.ncols} @ {b.nrows}x{b.ncols}")
    rows = []
    for r in a.rows:
        acc = 0
        x = r
        while x:
            low = x & -x
            acc ^= b.rows[low.bit_length() - 1]
            x ^= low
        rows.append(acc)
    return BitMatrix(tuple(rows), b.ncols)


def _xor_table(vectors: list[int]) -> list[list[int]]:
    """Byte-chunk XOR tables: chunk c, byte b -> XOR of vectors[8c+i] over bits i of b."""
    tables = []
    for c in range(0, len(vectors), 8):
        chunk = vectors[c : c + 8]
        t = [0] * (1 << len(chunk))
        for b in range(1, len(t)):
            low = b & -b
            t[b] = t[b ^ low] ^ chunk[low.bit_length() - 1]
        tables.append(t)
    return tables


def row_action(m: BitMatrix):
    """Fast v |-> v @ m for row vectors v (tables built once per matrix)."""
    tables = _xor_table(list(m.rows))

    def apply(v: int) -> int:
        out = 0
        c = 0
        while v:
            out ^= tables[c][v & 0xFF]
            v >>= 8
            c += 1
        return out

    return apply


def column_action(m: BitMatrix):
    """Fast v |-> m @ v for column vectors v."""
    tables = _xor_table([m.column(j) for j in range(m.ncols)])

    def apply(v: int) -> int:
        out = 0
        c = 0
        while v:
            out ^= tables[c][v & 0xFF]
            v >>= 8
            c += 1
        return out

    return apply


def rref_rows(rows: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reduced row echelon form of packed rows.

    Returns (rows, pivots) with zero rows dropped, rows ordered by pivot
    column, each pivot being the lowest set bit of its row, and every
    pivot column cleared in all other rows.
    """
    basis: list[int] = []  # kept fully reduced, sorted by pivot
    for r in rows:
        for b in basis:
            if (r >> (b & -b).bit_length() - 1) & 1:
                r ^= b
        if r == 0:
            continue
        piv = r & -r
        for i, b in enumerate(basis):
            if b & piv:
                basis[i] = b ^ r
        basis.append(r)
        basis.sort(key=lambda x: x & -x)
    return tuple(basis), tuple((b & -b).bit_length() - 1 for b in basis)


def rref(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    """RREF of a BitMatrix; see rref_rows for the normal form."""
    rows, pivots = rref_rows(m.rows)
    return BitMatrix(rows, m.ncols), pivots


def rank(m: BitMatrix) -> int:
    return len(rref_rows(m.rows)[0])


def mat_inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix; SingularMatrixError otherwise.

    Gauss-Jordan on [M | I]; the augmented rows live in plain Python ints,
    so the doubled width needs no special casing.
    """
    n = m.ncols
    if m.nrows != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [m.rows[i] | (1 << (n + i)) for i in range(n)]
    red, pivots = rref_rows(aug)
    if any(p != i for i, p in enumerate(pivots[:n])) or len(red) != n:
        raise SingularMatrixError("matrix is singular")
    return BitMatrix(tuple(r >> n for r in red), n)


def matrix_order(m: BitMatrix, bound: int = 10**7) -> int:
    """Multiplicative order of an invertible matrix, by iteration.

    Raises SingularMatrixError for singular input and RuntimeError when
    the order exceeds bound.
    """
    if m.nrows != m.ncols:
        raise ValueError("order of a non-square matrix")
    if rank(m) != m.ncols:
        raise SingularMatrixError("singular matrix has no multiplicative order")
    ident = identity(m.ncols).rows
    step = row_action(m)
    cur = m.rows
    k = 1
    while tuple(cur) != ident:
        cur = tuple(step(r) for r in cur)
        k += 1
        if k > bound:
            raise RuntimeError(f"matrix order exceeds bound {bound}")
    return k


# ---------------------------------------------------------------------------
# polynomials over GF(2)


@dataclass(frozen=True)
class GF2Polynomial:
    """Polynomial over GF(2); bit i of bits is the coefficient of x^i."""

    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError("negative coefficient mask")

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.bits.bit_length() - 1, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(terms)


def poly_mulmod(a: int, b: int, mod: int) -> int:
    """(a * b) mod `mod` for packed GF(2)[x] polynomials."""
    deg = mod.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> deg) & 1:
            a ^= mod
    top = out.bit_length() - 1
    while top >= deg:
        out ^= mod << (top - deg)
        top = out.bit_length() - 1
    return out


def poly_powmod(a: int, e: int, mod: int) -> int:
    """a**e mod `mod` in GF(2)[x], by square and multiply."""
    out = 1
    while e:
        if e & 1:
            out = poly_mulmod(out, a, mod)
        a = poly_mulmod(a, a, mod)
        e >>= 1
    return out


# one primitive polynomial per degree (low-weight classics); each entry is
# checked for primitivity by the test suite, so a typo here cannot survive
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100000000101011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
    17: 0b100000000000001001,
    18: 0b1000000000000100111,
    19: 0b10000000000000100111,
    20: 0b100000000000000001001,
    21: 0b1000000000000000000101,
    22: 0b10000000000000000000011,
    23: 0b100000000000000000100001,
    24: 0b1000000000000000010000111,
    25: 0b10000000000000000000001001,
    26: 0b100000000000000000001000111,
    27: 0b1000000000000000000000100111,
    28: 0b10000000000000000000000001001,
    29: 0b100000000000000000000000000101,
    30: 0b1000000100000000000000000000111,
    31: 0b10000000000000000000000000001001,
    32: 0b100000000010000000000000000000111,
}


def primitive_polynomial(n: int) -> GF2Polynomial:
    """A primitive polynomial of degree n over GF(2), for 2 <= n <= 32."""
    if n not in PRIMITIVE_POLYNOMIALS:
        raise ValueError(f"no primitive polynomial tabulated for degree {n}")
    return GF2Polynomial(PRIMITIVE_POLYNOMIALS[n])


def companion_matrix(p: GF2Polynomial | int) -> BitMatrix:
    """Companion matrix of a monic polynomial, acting on column vectors.

    Column j is the image of basis vector e_j: multiplication by x in
    GF(2)[x]/(p), so e_j -> e_{j+1} for j < n-1 and e_{n-1} -> p - x^n.
    """
    bits = p.bits if isinstance(p, GF2Polynomial) else p
    n = bits.bit_length() - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    low = bits & ((1 << n) - 1)
    rows = []
    for i in range(n):
        r = (1 << (i - 1)) if i >= 1 else 0
        r |= ((low >> i) & 1) << (n - 1)
        rows.append(r)
    return BitMatrix(tuple(rows), n)


def frobenius_matrix(p: GF2Polynomial | int) -> BitMatrix:
    """Matrix of the squaring map y -> y^2 on GF(2)[x]/(p), column convention.

    Column j holds x^(2j) mod p.  For primitive p of degree n the result
    has multiplicative order n and conjugates the companion matrix C to
    C^2: F C F^-1 = C^2.
    """
    bits = p.bits if isinstance(p, GF2Polynomial) else p
    n = bits.bit_length() - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    cols = [poly_powmod(0b10, 2 * j, bits) for j in range(n)]
    rows = []
    for i in range(n):
        r = 0
        for j in range(n):
            r |= ((cols[j] >> i) & 1) << j
        rows.append(r)
    return BitMatrix(tuple(rows), n)


# ---------------------------------------------------------------------------
# text format: one matrix = consecutive lines of 0/1 characters, leftmost
# character is column 0; '#' starts a comment; a blank line ends a matrix


def format_matrix(m: BitMatrix) -> str:
    lines = []
    for r in m.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(m.ncols)))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> list[BitMatrix]:
    """Parse every matrix block in text; FormatError carries line numbers."""
    matrices: list[BitMatrix] = []
    cur_rows: list[int] = []
    cur_width = 0

    def flush() -> None:
        nonlocal cur_rows, cur_width
        if cur_rows:
            matrices.append(BitMatrix(tuple(cur_rows), cur_width))
        cur_rows = []
        cur_width = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if "#" not in raw:
                flush()
            continue
        if any(c not in "01" for c in line):
            raise FormatError(f"line {lineno}: expected a row of 0/1 characters")
        if cur_rows and len(line) != cur_width:
            raise FormatError(
                f"line {lineno}: row width {len(line)} != matrix width {cur_width}"
            )
        if len(line) > MAX_WIDTH:
            raise FormatError(f"line {lineno}: width {len(line)} exceeds {MAX_WIDTH}")
        cur_width = len(line)
        cur_rows.append(sum((1 << j) for j, c in enumerate(line) if c == "1"))
    flush()
    return matrices


def load_matrix_file(path: str) -> list[BitMatrix]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())


# ---------------------------------------------------------------------------
# numpy bulk kernels, shared by the orbit and verification machinery


_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


def popcount_u64(x: np.ndarray) -> np.ndarray:
    """Per-element population count of a uint64 array."""
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


def rref_bulk(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce many small bases at once.

    rows is (N, k) uint64, one k-row basis per entry.  Returns (rref, ranks)
    where rref[i] holds the reduced rows sorted by pivot with zero rows
    sunk to the end, and ranks[i] counts the nonzero rows.
    """
    r = np.ascontiguousarray(rows, dtype=np.uint64).copy()
    n, k = r.shape
    top = np.uint64(0xFFFFFFFFFFFFFFFF)
    zero = np.uint64(0)
    for i in range(k):
        for j in range(i + 1, k):
            a = r[:, i]
            b = r[:, j]
            ka = np.where(a == zero, top, a & (zero - a))
            kb = np.where(b == zero, top, b & (zero - b))
            swap = kb < ka
            if swap.any():
                tmp = a[swap].copy()
                r[swap, i] = b[swap]
                r[swap, j] = tmp
        piv = r[:, i] & (zero - r[:, i])
        for j in range(k):
            if j == i:
                continue
            hit = (r[:, j] & piv) != zero
            if hit.any():
                r[hit, j] ^= r[hit, i]
    ranks = (r != zero).sum(axis=1).astype(np.int64)
    return r, ranks
