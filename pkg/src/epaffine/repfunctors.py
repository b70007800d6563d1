"""Induced module actions: exterior powers, tensor products, semisimple
elements with prescribed eigenvalues, and an irreducibility test."""

from __future__ import annotations

import logging
import random
import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .gf2core import BitMatrix, GF2Error, echelon, kernel, reduce_vector

log = logging.getLogger(__name__)


# -- module tags ----------------------------------------------------------

@dataclass(frozen=True)
class ModuleTag:
    """How a matrix on the natural module W induces a matrix on V.

    ``kind`` is ``"natural"``, ``"wedge"`` (with ``m``) or ``"tensor"`` (with
    ``factors``).  The string forms are ``natural``, ``wedge3`` and
    ``tensor(natural,natural)``.
    """

    kind: str
    m: int = 0
    factors: tuple["ModuleTag", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("natural", "wedge", "tensor"):
            raise ValueError(f"unknown module kind {self.kind!r}")
        if self.kind == "wedge" and self.m < 2:
            raise ValueError("wedge power must be at least 2")
        if self.kind == "tensor" and len(self.factors) < 2:
            raise ValueError("tensor needs at least two factors")

    def __str__(self) -> str:
        if self.kind == "natural":
            return "natural"
        if self.kind == "wedge":
            return f"wedge{self.m}"
        return "tensor(" + ",".join(str(f) for f in self.factors) + ")"

    def dim(self, k: int) -> int:
        if self.kind == "natural":
            return k
        if self.kind == "wedge":
            if self.m > k:
                raise ValueError(f"wedge{self.m} needs k >= {self.m}, got k={k}")
            return comb(k, self.m)
        d = 1
        for f in self.factors:
            d *= f.dim(k)
        return d

    def induce(self, g: BitMatrix) -> BitMatrix:
        if self.kind == "natural":
            return g
        if self.kind == "wedge":
            return wedge_action(g, self.m)
        out = self.factors[0].induce(g)
        for f in self.factors[1:]:
            out = tensor_action(out, f.induce(g))
        return out


NATURAL = ModuleTag("natural")


def parse_tag(s: str) -> ModuleTag:
    s = s.strip()
    if s == "natural":
        return NATURAL
    m = re.fullmatch(r"wedge(\d+)", s)
    if m:
        return ModuleTag("wedge", m=int(m.group(1)))
    if s.startswith("tensor(") and s.endswith(")"):
        inner = s[len("tensor("):-1]
        parts, depth, start = [], 0, 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(inner[start:i])
                start = i + 1
        parts.append(inner[start:])
        return ModuleTag("tensor", factors=tuple(parse_tag(p) for p in parts))
    raise ValueError(f"cannot parse module tag {s!r}")


# -- exterior and tensor powers ---------------------------------------------

def colex_index(subset: Sequence[int]) -> int:
    """Position of a sorted subset in colexicographic order."""
    return sum(comb(s, i + 1) for i, s in enumerate(subset))


def colex_subsets(k: int, m: int) -> list[tuple[int, ...]]:
    subs = list(combinations(range(k), m))
    subs.sort(key=lambda s: s[::-1])
    return subs


def _wedge_row(vectors: Sequence[int]) -> int:
    """Coordinates of ``v_1 ^ ... ^ v_m`` in the colex basis, packed."""
    # terms: frozenset-free representation as sorted tuples with F_2 coefficients
    terms = {(): 1}
    for v in vectors:
        support = [j for j in range(v.bit_length()) if (v >> j) & 1]
        nxt: dict[tuple[int, ...], int] = {}
        for t in terms:
            for j in support:
                if j in t:
                    continue
                key = tuple(sorted(t + (j,)))
                nxt[key] = nxt.get(key, 0) ^ 1
        terms = {t: 1 for t, c in nxt.items() if c}
    out = 0
    for t in terms:
        out |= 1 << colex_index(t)
    return out


def wedge_action(g: BitMatrix, m: int) -> BitMatrix:
    """Matrix of the m-th exterior power of ``g`` in the colex basis."""
    k = g.rows
    if not g.is_square:
        raise GF2Error("wedge power of a non-square matrix")
    if not 2 <= m <= k:
        raise ValueError(f"need 2 <= m <= {k}, got m={m}")
    rows = tuple(_wedge_row([g.data[i] for i in s]) for s in colex_subsets(k, m))
    return BitMatrix(len(rows), len(rows), rows)


def tensor_action(g: BitMatrix, h: BitMatrix) -> BitMatrix:
    """Kronecker product; basis vector ``e_i (x) e_j`` has index ``i*l + j``."""
    if not (g.is_square and h.is_square):
        raise GF2Error("tensor product of non-square matrices")
    l = h.rows
    rows = []
    for gi in g.data:
        for hj in h.data:
            r = 0
            a = gi
            i = 0
            while a:
                if a & 1:
                    r |= hj << (i * l)
                a >>= 1
                i += 1
            rows.append(r)
    n = g.rows * l
    return BitMatrix(n, n, tuple(rows))


def tensor_vector(v: int, w: int, l: int) -> int:
    """Packed ``v (x) w`` where ``w`` has length ``l``."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out |= w << (i * l)
        v >>= 1
        i += 1
    return out


# -- semisimple elements -----------------------------------------------------

def _pmulmod(a: int, b: int, mod: int) -> int:
    deg = mod.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> deg) & 1:
            a ^= mod
    return out


def _ppowmod(a: int, e: int, mod: int) -> int:
    out = 1
    while e:
        if e & 1:
            out = _pmulmod(out, a, mod)
        a = _pmulmod(a, a, mod)
        e >>= 1
    return out


def _pmod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _is_irreducible_poly(p: int) -> bool:
    deg = p.bit_length() - 1
    for q in range(2, 1 << (deg // 2 + 1)):
        if q.bit_length() - 1 <= deg // 2 and _pmod(p, q) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def doubling_orbits(r: int) -> list[tuple[int, ...]]:
    """Orbits of ``e -> 2e mod r`` on the nonzero residues, by least element."""
    seen: set[int] = set()
    out = []
    for a in range(1, r):
        if a in seen:
            continue
        orb = []
        x = a
        while x not in orb:
            orb.append(x)
            x = 2 * x % r
        seen.update(orb)
        out.append(tuple(orb))
    return out


def root_field(r: int) -> int:
    """Irreducible polynomial over GF(2) whose root ``x`` has order exactly r.

    Found by exhaustive search over polynomials of degree ord_r(2); the
    least such polynomial (as an int) is returned, fixing the choice of
    primitive r-th root of unity for the whole package.
    """
    if r < 3 or r % 2 == 0:
        raise ValueError(f"r must be odd and at least 3, got {r}")
    n = 1
    while pow(2, n, r) != 1:
        n += 1
    primes = _prime_factors(r)
    for p in range((1 << n) | 1, 1 << (n + 1), 2):
        if _ppowmod(2, r, p) != 1:
            continue
        if any(_ppowmod(2, r // q, p) == 1 for q in primes):
            continue
        if _is_irreducible_poly(p):
            return p
    raise AssertionError(f"no degree-{n} factor of x^{r}-1 has a root of order {r}")


def minimal_polynomial(r: int, a: int) -> int:
    """Minimal polynomial over GF(2) of ``w**a`` for the fixed root ``w``."""
    a %= r
    if a == 0:
        return 0b11  # x + 1
    mod = root_field(r)
    beta = _ppowmod(2, a, mod)
    conj = []
    x = beta
    while x not in conj:
        conj.append(x)
        x = _pmulmod(x, x, mod)
    # multiply out prod (y + c) with coefficients in GF(2^n), lowest degree first
    coeffs = [1]
    for c in conj:
        shifted = [0] + coeffs
        for i, co in enumerate(coeffs):
            shifted[i] ^= _pmulmod(co, c, mod)
        coeffs = shifted
    if any(co not in (0, 1) for co in coeffs):
        raise AssertionError("minimal polynomial has coefficients outside GF(2)")
    return sum(co << i for i, co in enumerate(coeffs))


def companion_matrix(poly: int) -> BitMatrix:
    """Row-convention companion matrix: ``e_i -> e_{i+1}``, last row gives x^n."""
    n = poly.bit_length() - 1
    if n < 1:
        raise ValueError("polynomial must have positive degree")
    rows = [1 << (i + 1) for i in range(n - 1)]
    rows.append(poly ^ (1 << n))
    return BitMatrix(n, n, tuple(rows))


def block_diagonal(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows = []
    offset = 0
    for b in blocks:
        rows.extend(r << offset for r in b.data)
        offset += b.cols
    return BitMatrix(offset, offset, tuple(rows))


def semisimple_witness(r: int, exps: Iterable[int]) -> BitMatrix:
    """Matrix over GF(2) whose eigenvalues are ``w**e`` for ``e`` in ``exps``.

    Zero exponents give 1x1 identity blocks; each doubling orbit of nonzero
    exponents gives one companion block of the minimal polynomial.
    """
    from .weights import validate_f2_realizable

    exps = [e % r for e in exps]
    if not exps:
        raise ValueError("empty exponent multiset")
    if not validate_f2_realizable(r, exps):
        raise ValueError(f"exponents {sorted(exps)} are not closed under doubling mod {r}")
    counts = Counter(exps)
    blocks = [BitMatrix.identity(1)] * counts.pop(0, 0)
    for orb in doubling_orbits(r):
        mult = counts.get(orb[0], 0)
        if mult:
            blocks.extend([companion_matrix(minimal_polynomial(r, orb[0]))] * mult)
    return block_diagonal(blocks)


# -- irreducibility -------------------------------------------------------

def spin(v: int, gens: Sequence[BitMatrix], limit: int | None = None) -> list[int]:
    """Echelon basis of the smallest invariant subspace containing ``v``.

    Stops early once the span reaches ``limit`` dimensions.
    """
    basis = echelon([v])
    queue = list(basis)
    while queue:
        w = queue.pop()
        for g in gens:
            u = reduce_vector(g.apply(w), basis)
            if u:
                basis = echelon(basis + [u])
                queue.append(u)
                if limit is not None and len(basis) >= limit:
                    return basis
    return basis


def _all_nonzero(basis: Sequence[int]) -> Iterable[int]:
    for mask in range(1, 1 << len(basis)):
        v = 0
        for i, b in enumerate(basis):
            if (mask >> i) & 1:
                v ^= b
        yield v


def _norton(theta: BitMatrix, gens, tgens, d: int, max_nullity: int):
    """Norton's test for one algebra element.

    Returns ``False`` (a proper submodule was found), ``True`` (the module is
    irreducible) or ``None`` when ``theta`` is unusable.
    """
    null = kernel(theta).basis
    if not null or len(null) > max_nullity:
        return None
    for v in _all_nonzero(null):
        if len(spin(v, gens, d)) < d:
            return False
    tnull = kernel(theta.transpose()).basis
    for w in _all_nonzero(tnull):
        if len(spin(w, tgens, d)) < d:
            return False
    return True


def is_irreducible(
    gens: Sequence[BitMatrix],
    seed: int = 0,
    attempts: int = 64,
    max_nullity: int = 6,
) -> bool:
    """True iff no proper nonzero subspace is invariant under all ``gens``."""
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].rows
    if any(not g.is_square or g.rows != d for g in gens):
        raise GF2Error("generators must be square of equal size")
    if any(not g.is_invertible() for g in gens):
        raise GF2Error("non-invertible generator")
    if d == 1:
        return True
    tgens = [g.transpose() for g in gens]
    ident = BitMatrix.identity(d)

    rng = random.Random(seed)
    words = list(gens)
    for _ in range(attempts):
        a, b = rng.choice(words), rng.choice(words)
        words.append(a @ b)
        theta = BitMatrix.zero(d, d)
        for w in words:
            if rng.random() < 0.5:
                theta = theta + w
        if rng.random() < 0.5:
            theta = theta + ident
        verdict = _norton(theta, gens, tgens, d, max_nullity)
        if verdict is not None:
            return verdict

    # Deterministic phase.  theta = 0 makes Norton's test an exhaustive
    # search, which is affordable only for small d.
    if d <= 12:
        return _norton(BitMatrix.zero(d, d), gens, tgens, d, d)
    for w in words:
        for theta in (w + ident, w):
            verdict = _norton(theta, gens, tgens, d, max_nullity + 4)
            if verdict is not None:
                return verdict
    candidates = [1 << i for i in range(d)]
    for w in words:
        candidates.extend(kernel(w + ident).basis)
    for v in candidates:
        if len(spin(v, gens, d)) < d:
            return False
    log.warning("irreducibility of a %d-dimensional module accepted without a Norton certificate", d)
    return True


def invariant_subspace(gens: Sequence[BitMatrix], seed: int = 0) -> list[int] | None:
    """A proper nonzero invariant subspace if one is easy to find, else None.

    Tries standard basis vectors and fixed vectors of generators; used for
    error messages, not as a decision procedure.
    """
    d = gens[0].rows
    candidates = [1 << i for i in range(d)]
    ident = BitMatrix.identity(d)
    for g in gens:
        candidates.extend(kernel(g + ident).basis)
    for v in candidates:
        sub = spin(v, gens, d)
        if len(sub) < d:
            return sub
    return None
