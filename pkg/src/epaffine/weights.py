"""Fixed-space dimensions of odd-order semisimple elements, by counting.

An element x of odd order r is described by the exponents of its
eigenvalues w**e on the natural module (w a primitive r-th root of unity).
On an exterior power the eigenvalues are sums of exponents over subsets; on
a spin module they are signed sums sum(eps_i * t_i).  The 1-eigenspace
dimension is the number of zero sums, counted here by dynamic programming
over residues mod r.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .repfunctors import doubling_orbits


@dataclass(frozen=True)
class ExponentMultiset:
    r: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.r < 3 or self.r % 2 == 0:
            raise ValueError(f"r must be odd and >= 3, got {self.r}")
        if any(not 0 <= e < self.r for e in self.entries):
            raise ValueError("exponent out of range [0, r)")

    @classmethod
    def of(cls, r: int, entries: Iterable[int]) -> "ExponentMultiset":
        return cls(r, tuple(sorted(e % r for e in entries)))

    @property
    def fixed_dim_on_natural(self) -> int:
        return self.entries.count(0)

    def __len__(self) -> int:
        return len(self.entries)


SPIN_KINDS = ("B", "Deven", "Dodd")


@dataclass(frozen=True)
class SpinExponentVector:
    """Spin coordinates: factor i contributes eigenvalues w**t_i, w**-t_i.

    ``kind`` is ``"B"`` (full spin, all sign patterns) or ``"Deven"`` /
    ``"Dodd"`` (half-spin, sign patterns with an even/odd number of minus
    signs).
    """

    r: int
    t: tuple[int, ...]
    kind: str = "B"

    def __post_init__(self) -> None:
        if self.r < 3 or self.r % 2 == 0:
            raise ValueError(f"r must be odd and >= 3, got {self.r}")
        if not self.t:
            raise ValueError("need at least one coordinate")
        if self.kind not in SPIN_KINDS:
            raise ValueError(f"kind must be one of {SPIN_KINDS}")


def validate_f2_realizable(r: int, entries: Iterable[int]) -> bool:
    """True iff the multiset is invariant under e -> 2e mod r."""
    c = Counter(e % r for e in entries)
    return c == Counter({2 * e % r: n for e, n in c.items()})


def subset_sum_counts(entries: Sequence[int], m: int, r: int) -> list[int]:
    """counts[s] = number of m-subsets (by position) with sum = s mod r."""
    # dp[j][s]: j-subsets of the prefix with sum s
    dp = [[0] * r for _ in range(m + 1)]
    dp[0][0] = 1
    for e in entries:
        e %= r
        for j in range(m, 0, -1):
            prev, cur = dp[j - 1], dp[j]
            for s in range(r):
                if prev[s]:
                    cur[(s + e) % r] += prev[s]
    return dp[m]


def wedge_fixed_dim(e: ExponentMultiset | Sequence[int], m: int, r: int | None = None) -> int:
    """Dimension of the fixed space of x on the m-th exterior power."""
    if isinstance(e, ExponentMultiset):
        r, entries = e.r, e.entries
    else:
        if r is None:
            raise ValueError("r required with a plain exponent list")
        entries = tuple(e)
    if not 1 <= m <= len(entries):
        raise ValueError(f"need 1 <= m <= {len(entries)}, got {m}")
    return subset_sum_counts(entries, m, r)[0]


def signed_sum_counts(t: Sequence[int], r: int) -> tuple[list[int], list[int]]:
    """Counts of sign patterns by residue of sum(eps_i t_i), split by parity of minus signs."""
    even = [0] * r
    odd = [0] * r
    even[0] = 1
    for ti in t:
        ti %= r
        ne = [0] * r
        no = [0] * r
        for s in range(r):
            if even[s]:
                ne[(s + ti) % r] += even[s]
                no[(s - ti) % r] += even[s]
            if odd[s]:
                no[(s + ti) % r] += odd[s]
                ne[(s - ti) % r] += odd[s]
        even, odd = ne, no
    return even, odd


def spin_fixed_dim(s: SpinExponentVector) -> int:
    even, odd = signed_sum_counts(s.t, s.r)
    if s.kind == "B":
        return even[0] + odd[0]
    return even[0] if s.kind == "Deven" else odd[0]


@dataclass
class WedgeMax:
    """Result of the exhaustive search over elements of one order."""

    k: int
    r: int
    max: int | None
    witnesses: list[ExponentMultiset] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return self.max is not None


WEDGE_BOUND_ORDERS = (7, 11, 13)


def realizable_multisets(k: int, r: int, nontrivial: bool = True) -> list[ExponentMultiset]:
    """All doubling-stable exponent multisets of size k, via orbit multiplicities."""
    orbits = doubling_orbits(r)
    sizes = [len(o) for o in orbits]
    out = []

    def rec(i: int, left: int, mults: list[int]) -> None:
        if i == len(orbits):
            if nontrivial and not any(mults):
                return
            entries = [0] * left
            for orb, mu in zip(orbits, mults):
                entries.extend(list(orb) * mu)
            out.append(ExponentMultiset.of(r, entries))
            return
        for mu in range(left // sizes[i] + 1):
            rec(i + 1, left - mu * sizes[i], mults + [mu])

    rec(0, k, [])
    return out


def max_wedge_dim_over_order_r(k: int, r: int, m: int = 3) -> WedgeMax:
    """Largest fixed-space dimension on the m-th exterior power over all
    elements of order exactly r in GL_k(2) (r prime), with all maximizers."""
    if r not in WEDGE_BOUND_ORDERS:
        raise ValueError(f"r must be one of {WEDGE_BOUND_ORDERS}, got {r}")
    if not 7 <= k <= 14:
        raise ValueError(f"k must lie in 7..14, got {k}")
    best: int | None = None
    wit: list[ExponentMultiset] = []
    for e in realizable_multisets(k, r):
        dim = wedge_fixed_dim(e, m)
        if best is None or dim > best:
            best, wit = dim, [e]
        elif dim == best:
            wit.append(e)
    return WedgeMax(k, r, best, wit)


@lru_cache(maxsize=None)
def uniform_wedge_cap(k: int) -> int:
    """Largest fixed dim on the wedge-cube over elements of order 7, 11 or 13."""
    vals = [w.max for r in WEDGE_BOUND_ORDERS if (w := max_wedge_dim_over_order_r(k, r)).exists]
    return max(vals)


def expected_uniform_cap(k: int) -> int:
    return comb(k - 3, 3) + 1
