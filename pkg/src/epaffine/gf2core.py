"""Dense linear algebra over GF(2) with rows packed into Python ints.

Conventions used throughout the package:

* a vector of length ``n`` is an ``int`` whose bit ``j`` is coordinate ``j``;
* a matrix is a tuple of row ints, so row ``i`` is the image of ``e_i``;
* vectors act on the left, ``v -> v * g`` (row-vector convention).

Python ints play the role of packed machine words, so there is no hard
upper limit on the number of columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Sequence


class GF2Error(ValueError):
    """Malformed or dimensionally incompatible GF(2) data."""


def _bit_string(v: int, n: int) -> str:
    return "".join("1" if (v >> j) & 1 else "0" for j in range(n))


def _parse_bits(s: str) -> int:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise GF2Error(f"not a 0/1 string: {s!r}")
    v = 0
    for j, ch in enumerate(s):
        if ch == "1":
            v |= 1 << j
    return v


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise GF2Error("vector length must be positive")
        if self.bits < 0 or self.bits >> self.length:
            raise GF2Error("bits exceed vector length")

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        return cls(len(s.strip()), _parse_bits(s))

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        return cls(len(entries), sum(1 << j for j, x in enumerate(entries) if x % 2))

    def __str__(self) -> str:
        return _bit_string(self.bits, self.length)

    def __add__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise GF2Error("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    def __getitem__(self, j: int) -> int:
        return (self.bits >> j) & 1

    def weight(self) -> int:
        return bin(self.bits).count("1")


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise GF2Error("matrix dimensions must be positive")
        if len(self.data) != self.rows:
            raise GF2Error(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise GF2Error("row has bits beyond the column count")

    # construction

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise GF2Error("ragged matrix")
        return cls(len(entries), cols, tuple(BitVector.from_list(r).bits for r in entries))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        rows = [r.strip() for r in rows]
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise GF2Error("ragged matrix")
        return cls(len(rows), cols, tuple(_parse_bits(r) for r in rows))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "BitMatrix":
        """Matrix sending ``e_i`` to ``e_perm[i]``."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise GF2Error("not a permutation")
        return cls(n, n, tuple(1 << perm[i] for i in range(n)))

    # access

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def to_strings(self) -> list[str]:
        return [_bit_string(r, self.cols) for r in self.data]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic

    def apply(self, v: int) -> int:
        """Image ``v * self`` of a packed row vector."""
        out = 0
        data = self.data
        i = 0
        while v:
            if v & 1:
                out ^= data[i]
            v >>= 1
            i += 1
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise GF2Error("shape mismatch in addition")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(self.cols, self.rows, tuple(out))

    def rank(self) -> int:
        return len(echelon(self.data))

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def inverse(self) -> "BitMatrix":
        if not self.is_square:
            raise GF2Error("inverse of a non-square matrix")
        n = self.rows
        work = [(self.data[i], 1 << i) for i in range(n)]
        for col in range(n):
            bit = 1 << col
            piv = next((k for k in range(col, n) if work[k][0] & bit), None)
            if piv is None:
                raise GF2Error("matrix is singular")
            work[col], work[piv] = work[piv], work[col]
            pr, pa = work[col]
            for k in range(n):
                if k != col and work[k][0] & bit:
                    work[k] = (work[k][0] ^ pr, work[k][1] ^ pa)
        return BitMatrix(n, n, tuple(a for _, a in work))

    def __pow__(self, e: int) -> "BitMatrix":
        if not self.is_square:
            raise GF2Error("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        result = BitMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def order(self, limit: int = 1 << 20) -> int:
        """Multiplicative order, by repeated multiplication up to ``limit``."""
        ident = BitMatrix.identity(self.rows)
        g = self
        for k in range(1, limit + 1):
            if g == ident:
                return k
            g = g @ self
        raise GF2Error(f"order exceeds {limit}")


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise GF2Error(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return BitMatrix(a.rows, b.cols, tuple(b.apply(r) for r in a.data))


def echelon(rows: Iterable[int]) -> list[int]:
    """Canonical reduced row-echelon basis of the span of ``rows``.

    Pivot of a row is its lowest set bit; rows come back sorted by pivot and
    every pivot bit is cleared from all other rows.
    """
    basis: list[int] = []  # kept reduced against each other
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            low = r & -r
            basis = [b ^ r if b & low else b for b in basis]
            basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return basis


def reduce_vector(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` against an echelon basis; zero iff ``v`` is in the span."""
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ambient_dim < 1:
            raise GF2Error("ambient dimension must be positive")
        if any(b <= 0 or b >> self.ambient_dim for b in self.basis):
            raise GF2Error("basis vector out of range")
        if list(self.basis) != echelon(self.basis):
            raise GF2Error("basis is not in canonical echelon form")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, tuple(echelon(vectors)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v: int) -> bool:
        return reduce_vector(v, self.basis) == 0

    def __iter__(self) -> Iterator[int]:
        """All ``2**dim`` vectors of the subspace."""
        basis = self.basis
        for mask in range(1 << len(basis)):
            v = 0
            i = 0
            while mask:
                if mask & 1:
                    v ^= basis[i]
                mask >>= 1
                i += 1
            yield v

    def image(self, g: BitMatrix) -> "Subspace":
        return Subspace.span(self.ambient_dim, (g.apply(b) for b in self.basis))

    def basis_vectors(self) -> list[BitVector]:
        return [BitVector(self.ambient_dim, b) for b in self.basis]


def kernel(a: BitMatrix) -> Subspace:
    """Left kernel ``{v : v * a = 0}``, a subspace of ``GF(2)^a.rows``."""
    # Track which original rows make up each reduced row.
    work: list[tuple[int, int]] = []
    null: list[int] = []
    for i, r in enumerate(a.data):
        comb = 1 << i
        for wr, wc in work:
            if r & (wr & -wr):
                r ^= wr
                comb ^= wc
        if r:
            work.append((r, comb))
        else:
            null.append(comb)
    return Subspace.span(a.rows, null)


def fixed_space(g: BitMatrix) -> Subspace:
    """The 1-eigenspace of ``g``: ``kernel(g + I)``."""
    if not g.is_square:
        raise GF2Error("fixed space of a non-square matrix")
    return kernel(g + BitMatrix.identity(g.rows))


def intersect(s: Subspace, t: Subspace) -> Subspace:
    """Zassenhaus intersection: reduce ``[s|s]`` stacked on ``[t|0]``."""
    n = s.ambient_dim
    if t.ambient_dim != n:
        raise GF2Error("ambient dimension mismatch")
    if s.dim == 0 or t.dim == 0:
        return Subspace.zero(n)
    if s.dim == n:
        return t
    if t.dim == n:
        return s
    rows = [b | (b << n) for b in s.basis] + list(t.basis)
    low = (1 << n) - 1
    return Subspace.span(n, (r >> n for r in echelon(rows) if not r & low))


def common_fixed_space(gens: Sequence[BitMatrix], dim: int | None = None) -> Subspace:
    """Vectors fixed by every matrix in ``gens``; the full space if empty."""
    if not gens:
        if dim is None:
            raise GF2Error("dimension required for an empty generator list")
        return Subspace.full(dim)
    n = gens[0].rows
    if dim is not None and dim != n:
        raise GF2Error("dimension mismatch")
    if any(not g.is_square or g.rows != n for g in gens):
        raise GF2Error("generators must be square of equal size")
    return reduce(intersect, (fixed_space(g) for g in gens), Subspace.full(n))


# text format

def format_matrix(m: BitMatrix) -> str:
    return "\n".join([f"GF2 {m.rows} {m.cols}", *m.to_strings()]) + "\n"


def parse_matrices(text: str) -> list[BitMatrix]:
    """Parse consecutive ``GF2 <rows> <cols>`` blocks."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    out: list[BitMatrix] = []
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 3 or head[0] != "GF2":
            raise GF2Error(f"expected 'GF2 <rows> <cols>', got {lines[i]!r}")
        try:
            rows, cols = int(head[1]), int(head[2])
        except ValueError as exc:
            raise GF2Error(f"bad matrix header {lines[i]!r}") from exc
        body = lines[i + 1:i + 1 + rows]
        if len(body) != rows or any(len(r) != cols for r in body):
            raise GF2Error(f"matrix block at line {i + 1} has the wrong shape")
        out.append(BitMatrix(rows, cols, tuple(_parse_bits(r) for r in body)))
        i += 1 + rows
    return out


def parse_matrix(text: str) -> BitMatrix:
    ms = parse_matrices(text)
    if len(ms) != 1:
        raise GF2Error(f"expected one matrix, found {len(ms)}")
    return ms[0]
