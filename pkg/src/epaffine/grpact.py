"""Matrix group actions on F_2-vector spaces.

Orbits of H on the nonzero vectors of a module, the permutation action on
each orbit, block systems, and exhaustive machinery (element enumeration,
maximal subgroups) for groups small enough to list.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .gf2core import BitMatrix, GF2Error, format_matrix, parse_matrices
from .repfunctors import NATURAL, ModuleTag

DEFAULT_CAP_DIM = 28
DEFAULT_CAP_ORDER = 200_000


class CapExceeded(RuntimeError):
    """The requested exhaustive computation is beyond the configured cap."""


@dataclass(frozen=True)
class MatrixGroup:
    dim: int
    generators: tuple[BitMatrix, ...]
    order: int | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if not g.is_square or g.rows != self.dim:
                raise GF2Error(f"generator is {g.rows}x{g.cols}, expected {self.dim}x{self.dim}")
            if not g.is_invertible():
                raise GF2Error("non-invertible generator")
        if self.order is not None and self.order < 1:
            raise ValueError("order must be positive")

    def induced(self, tag: ModuleTag = NATURAL) -> list[BitMatrix]:
        return [tag.induce(g) for g in self.generators]


# -- group files --------------------------------------------------------------

def format_group(h: MatrixGroup) -> str:
    head = f"GF2GROUP {h.dim} {len(h.generators)}"
    if h.order is not None:
        head += f" order={h.order}"
    if h.name:
        head += f" name={h.name}"
    return head + "\n" + "".join(format_matrix(g) for g in h.generators)


def parse_group(text: str) -> MatrixGroup:
    lines = text.splitlines()
    idx = next((i for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")), None)
    if idx is None:
        raise GF2Error("empty group file")
    head = lines[idx].split()
    if len(head) < 3 or head[0] != "GF2GROUP":
        raise GF2Error(f"expected 'GF2GROUP <k> <ngens>', got {lines[idx]!r}")
    try:
        k, ngens = int(head[1]), int(head[2])
    except ValueError as exc:
        raise GF2Error(f"bad group header {lines[idx]!r}") from exc
    order = name = None
    for tok in head[3:]:
        key, _, val = tok.partition("=")
        if key == "order":
            order = int(val)
        elif key == "name":
            name = val
        else:
            raise GF2Error(f"unknown header field {tok!r}")
    gens = parse_matrices("\n".join(lines[idx + 1:]))
    if len(gens) != ngens:
        raise GF2Error(f"header declares {ngens} generators, found {len(gens)}")
    return MatrixGroup(k, tuple(gens), order=order, name=name)


def load_group(path) -> MatrixGroup:
    with open(path, encoding="utf-8") as fh:
        return parse_group(fh.read())


# -- vectorised action on packed vectors ---------------------------------------

def _span_table(rows: Sequence[int]) -> np.ndarray:
    """table[u] = XOR of rows[i] over the set bits i of u."""
    table = np.zeros(1 << len(rows), dtype=np.uint64)
    for i, r in enumerate(rows):
        n = 1 << i
        table[n:2 * n] = table[:n] ^ np.uint64(r)
    return table


class _Applier:
    """Applies one matrix to arrays of packed vectors via two half tables."""

    def __init__(self, g: BitMatrix):
        d = g.rows
        self.split = d // 2
        self.low = _span_table(g.data[:self.split])
        self.high = _span_table(g.data[self.split:])
        self.mask = np.uint64((1 << self.split) - 1)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.low[v & self.mask] ^ self.high[v >> np.uint64(self.split)]


# -- orbits -------------------------------------------------------------------

@dataclass
class OrbitDecomposition:
    """Orbits of a matrix group on the nonzero vectors of a module.

    Vectors are packed ints (bit j = coordinate j).  Orbits are sorted
    tuples, listed by their least element, which is the representative.
    Transversal words are built on first request.
    """

    d: int
    gens: list[BitMatrix]
    orbits: list[tuple[int, ...]]
    _words: dict[int, dict[int, tuple[int, ...]]] = field(default_factory=dict, repr=False)

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def representative(self, i: int) -> int:
        return self.orbits[i][0]

    def orbit_of(self, v: int) -> int:
        for i, orb in enumerate(self.orbits):
            j = np.searchsorted(orb, v)
            if j < len(orb) and orb[j] == v:
                return i
        raise KeyError(v)

    def transversal(self, i: int) -> dict[int, tuple[int, ...]]:
        """Generator-index words carrying the representative to each point."""
        if i not in self._words:
            rep = self.representative(i)
            words = {rep: ()}
            queue = deque([rep])
            while queue:
                v = queue.popleft()
                for s, g in enumerate(self.gens):
                    w = g.apply(v)
                    if w not in words:
                        words[w] = words[v] + (s,)
                        queue.append(w)
            self._words[i] = words
        return self._words[i]

    def word_matrix(self, word: Sequence[int]) -> BitMatrix:
        m = BitMatrix.identity(self.d)
        for s in word:
            m = m @ self.gens[s]
        return m

    def stabilizer_generators(self, i: int) -> list[BitMatrix]:
        """Schreier generators for the stabilizer of the orbit representative."""
        words = self.transversal(i)
        mats = {p: self.word_matrix(w) for p, w in words.items()}
        ident = BitMatrix.identity(self.d)
        out: dict[tuple[int, ...], BitMatrix] = {}
        for p, u in mats.items():
            for g in self.gens:
                x = u @ g @ mats[g.apply(p)].inverse()
                if x != ident:
                    out.setdefault(x.data, x)
        return [out[key] for key in sorted(out)]


def _next_unvisited(visited: np.ndarray, pos: int) -> int:
    n = len(visited)
    step = 1024
    while pos < n:
        window = visited[pos:pos + step]
        j = int(np.argmin(window))
        if not window[j]:
            return pos + j
        pos += len(window)
        step *= 2
    return n


def orbit_decomposition(h: MatrixGroup, tag: ModuleTag = NATURAL, cap_dim: int = DEFAULT_CAP_DIM) -> OrbitDecomposition:
    d = tag.dim(h.dim)
    if d > cap_dim or d > 62:
        raise CapExceeded(f"module dimension {d} exceeds the orbit cap {min(cap_dim, 62)}; use bounds instead")
    gens = h.induced(tag)
    appliers = [_Applier(g) for g in gens]
    n = 1 << d
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    orbits: list[tuple[int, ...]] = []
    pos = 1
    while True:
        pos = _next_unvisited(visited, pos)
        if pos >= n:
            break
        visited[pos] = True
        members = [np.array([pos], dtype=np.uint64)]
        frontier = members[0]
        while frontier.size:
            imgs = np.concatenate([ap(frontier) for ap in appliers]) if appliers else frontier[:0]
            imgs = np.unique(imgs[~visited[imgs]])
            visited[imgs] = True
            if imgs.size:
                members.append(imgs)
            frontier = imgs
        orb = np.sort(np.concatenate(members))
        orbits.append(tuple(int(x) for x in orb))
    return OrbitDecomposition(d, gens, orbits)


# -- permutation actions and blocks --------------------------------------------

@dataclass(frozen=True)
class PermAction:
    degree: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for img in self.images:
            if len(img) != self.degree or sorted(img) != list(range(self.degree)):
                raise ValueError("generator image is not a permutation of the points")


def induced_permutation(h: MatrixGroup, orbit: Sequence[int], tag: ModuleTag = NATURAL) -> PermAction:
    return _perm_action(h.induced(tag), orbit)


def _perm_action(gens: Sequence[BitMatrix], orbit: Sequence[int]) -> PermAction:
    pts = np.asarray(sorted(orbit), dtype=np.uint64)
    images = []
    for g in gens:
        img = _Applier(g)(pts)
        idx = np.searchsorted(pts, img)
        idx = np.minimum(idx, len(pts) - 1)
        if not np.array_equal(pts[idx], img):
            raise ValueError("orbit is not closed under the generators")
        images.append(tuple(int(i) for i in idx))
    return PermAction(len(pts), tuple(images))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def is_transitive(p: PermAction) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for img in p.images:
            y = img[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == p.degree


def minimal_block_system(p: PermAction, beta: int) -> list[tuple[int, ...]]:
    """Finest block system in which 0 and ``beta`` share a block."""
    uf = _UnionFind(p.degree)
    uf.union(0, beta)
    queue = deque([(0, beta)])
    while queue:
        a, b = queue.popleft()
        for img in p.images:
            x, y = img[a], img[b]
            if uf.union(x, y):
                queue.append((x, y))
    classes: dict[int, list[int]] = {}
    for x in range(p.degree):
        classes.setdefault(uf.find(x), []).append(x)
    return sorted(tuple(c) for c in classes.values())


def is_primitive(p: PermAction) -> tuple[bool, list[tuple[int, ...]] | None]:
    """Primitivity test; on failure returns a nontrivial block system."""
    if not is_transitive(p):
        raise ValueError("action is not transitive")
    for beta in range(1, p.degree):
        blocks = minimal_block_system(p, beta)
        if len(blocks) > 1:
            return False, blocks
    return True, None


def verify_block_system(p: PermAction, blocks: Sequence[Sequence[int]]) -> bool:
    """Nontrivial partition of the points preserved by every generator."""
    where = {}
    for i, b in enumerate(blocks):
        for x in b:
            if x in where:
                return False
            where[x] = i
    if len(where) != p.degree or not 1 < len(blocks) < p.degree:
        return False
    for img in p.images:
        for b in blocks:
            if len({where[img[x]] for x in b}) != 1:
                return False
    return True


# -- exhaustive element machinery --------------------------------------------

class EnumeratedGroup:
    """All elements of a small matrix group, indexed 0..N-1 (0 = identity).

    Element i is stored as the row array ``rows[i]``; products are computed
    for all elements at once through image tables of the natural module.
    """

    def __init__(self, h: MatrixGroup, cap: int = DEFAULT_CAP_ORDER):
        k = h.dim
        if k > 8:
            raise CapExceeded("element enumeration supports matrices of size at most 8")
        self.group = h
        self.k = k
        self._shifts = (np.arange(k, dtype=np.uint64) * np.uint64(k))
        ident = np.array([[1 << i for i in range(k)]], dtype=np.uint64)
        gen_tables = [_span_table(g.data) for g in h.generators]
        blocks = [ident]
        seen = set(self._keys(ident).tolist())
        frontier = ident
        total = 1
        while frontier.size:
            new = []
            for t in gen_tables:
                prod = t[frontier]
                keys = self._keys(prod)
                _, first = np.unique(keys, return_index=True)
                for j in first:
                    key = int(keys[j])
                    if key not in seen:
                        seen.add(key)
                        new.append(prod[j])
            if not new:
                break
            frontier = np.array(new, dtype=np.uint64)
            total += len(frontier)
            if total > cap:
                raise CapExceeded(f"group order exceeds the enumeration cap {cap}")
            blocks.append(frontier)
        self.rows = np.concatenate(blocks)
        self.order = len(self.rows)
        if h.order is not None and h.order != self.order:
            raise ValueError(f"declared order {h.order} but the group has {self.order} elements")
        keys = self._keys(self.rows)
        self._sort = np.argsort(keys)
        self._sorted_keys = keys[self._sort]
        self._cols = [np.ascontiguousarray(self.rows[:, i]) for i in range(k)]
        self._dense = None
        if k * k <= 24:
            self._dense = np.full(1 << (k * k), -1, dtype=np.int64)
            self._dense[keys.astype(np.int64)] = np.arange(self.order)

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        key = rows[:, 0].copy()
        for i in range(1, self.k):
            key |= rows[:, i] << np.uint64(self.k * i)
        return key

    def _lookup(self, keys: np.ndarray) -> np.ndarray:
        if self._dense is not None:
            idx = self._dense[keys.astype(np.int64)]
            if (idx < 0).any():
                raise ValueError("product left the group")
            return idx
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if not np.array_equal(self._sorted_keys[pos], keys):
            raise ValueError("product left the group")
        return self._sort[pos]

    def index_of_rows(self, rows: np.ndarray) -> np.ndarray:
        return self._lookup(self._keys(rows))

    def index(self, g: BitMatrix) -> int:
        return int(self.index_of_rows(np.array([g.data], dtype=np.uint64))[0])

    def element(self, i: int) -> BitMatrix:
        return BitMatrix(self.k, self.k, tuple(int(x) for x in self.rows[i]))

    def elements(self) -> list[BitMatrix]:
        return [self.element(i) for i in range(self.order)]

    def right_table(self, x: int) -> np.ndarray:
        """R[g] = index of g*x."""
        t = _span_table(self.element(x).data)
        key = t[self._cols[0]]
        for i in range(1, self.k):
            key |= (t << np.uint64(self.k * i))[self._cols[i]]
        return self._lookup(key)

    def left_table(self, x: int) -> np.ndarray:
        """L[g] = index of x*g."""
        xr = self.element(x).data
        out = np.zeros_like(self.rows)
        for i, r in enumerate(xr):
            acc = np.zeros(self.order, dtype=np.uint64)
            for j in range(self.k):
                if (r >> j) & 1:
                    acc ^= self.rows[:, j]
            out[:, i] = acc
        return self.index_of_rows(out)

    def conj_table(self, s: BitMatrix) -> np.ndarray:
        """C[g] = index of s^-1 * g * s."""
        si = self.index(s)
        sinv = self.index(s.inverse())
        return self.left_table(sinv)[self.right_table(si)]

    def closure(self, gens: Sequence[int], tables: dict[int, np.ndarray] | None = None,
                stop_above: int | None = None) -> np.ndarray | None:
        """Sorted element indices of the subgroup generated by ``gens``.

        Right-multiplication tables are taken from (and stored in) ``tables``
        when given.  Returns None as soon as the closure exceeds
        ``stop_above`` elements.
        """
        tabs = []
        for x in gens:
            if tables is not None:
                if x not in tables:
                    tables[x] = self.right_table(x)
                tabs.append(tables[x])
            else:
                tabs.append(self.right_table(x))
        return self._closure_from_tables(tabs, stop_above)

    def _closure_from_tables(self, tabs: Sequence[np.ndarray], stop_above: int | None = None) -> np.ndarray | None:
        member = np.zeros(self.order, dtype=bool)
        member[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            imgs = np.concatenate([t[frontier] for t in tabs]) if tabs else frontier[:0]
            imgs = imgs[~member[imgs]]
            member[imgs] = True
            if stop_above is not None and np.count_nonzero(member) > stop_above:
                return None
            frontier = imgs
        return np.flatnonzero(member)

    def element_order(self, i: int) -> int:
        return self.element(i).order()


def enumerate_elements(h: MatrixGroup, cap: int = DEFAULT_CAP_ORDER) -> list[BitMatrix]:
    """All elements of ``h``, identity first, in breadth-first order."""
    return EnumeratedGroup(h, cap).elements()


def _components(n: int, tables: Iterable[np.ndarray]) -> np.ndarray:
    src, dst = [], []
    for t in tables:
        src.append(np.arange(n))
        dst.append(t)
    if not src:
        return np.arange(n)
    s = np.concatenate(src)
    t = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, t)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def _min_reps(labels: np.ndarray, allowed: np.ndarray | None = None) -> list[int]:
    idx = np.arange(len(labels)) if allowed is None else np.flatnonzero(allowed)
    lab = labels[idx]
    order = np.lexsort((idx, lab))
    lab_sorted = lab[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = lab_sorted[1:] != lab_sorted[:-1]
    return sorted(int(x) for x in idx[order][first])


@dataclass
class SubgroupClass:
    """One conjugacy class of subgroups of an enumerated group."""

    label: str
    order: int
    class_size: int
    generators: list[BitMatrix]
    members: np.ndarray = field(repr=False)  # element indices of the representative


class _SubgroupPool:
    """Proper subgroups up to conjugacy, with all conjugates of each."""

    def __init__(self, g: EnumeratedGroup):
        self.g = g
        self.conj = [g.conj_table(s) for s in g.group.generators]
        self.key_to_class: dict[bytes, int] = {}
        self.classes: list[dict] = []

    def add(self, members: np.ndarray, gens: Sequence[int]) -> int:
        key = members.astype(np.int32).tobytes()
        if key in self.key_to_class:
            return self.key_to_class[key]
        cid = len(self.classes)
        conjugates = {key: members}
        queue = [members]
        while queue:
            m = queue.pop()
            for c in self.conj:
                img = np.sort(c[m])
                k2 = img.astype(np.int32).tobytes()
                if k2 not in conjugates:
                    conjugates[k2] = img
                    queue.append(img)
        for k2 in conjugates:
            self.key_to_class[k2] = cid
        self.classes.append({
            "members": members,
            "gens": list(gens),
            "order": len(members),
            "conjugates": list(conjugates.values()),
        })
        return cid


def _bits(members: np.ndarray, n: int) -> int:
    mask = np.zeros(n, dtype=bool)
    mask[members] = True
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def tiny_maximal_subgroups(h: MatrixGroup, cap: int = DEFAULT_CAP_ORDER) -> list[SubgroupClass]:
    """All maximal subgroups of a small group, one entry per conjugacy class.

    Every 2-generated proper subgroup is found up to conjugacy; the maximal
    ones among them are then certified by checking that adjoining any
    double-coset representative generates the whole group.  A failed check
    yields a larger proper subgroup, which joins the pool.
    """
    g = EnumeratedGroup(h, cap)
    n = g.order
    if n == 1:
        return []
    half = n // 2
    tables: dict[int, np.ndarray] = {}
    pool = _SubgroupPool(g)

    # conjugacy classes of elements, merged into rational classes
    labels = _components(n, pool.conj)
    rat = {int(l): int(l) for l in np.unique(labels)}

    def rfind(x: int) -> int:
        while rat[x] != x:
            x = rat[x]
        return x

    reps = _min_reps(labels)
    for x in reps:
        if x == 0:
            continue
        rx = tables.setdefault(x, g.right_table(x))
        ordx = 0
        p = 0
        powers = []
        while True:
            p = int(rx[p])
            ordx += 1
            if p == 0:
                break
            powers.append(p)
        for j, pw in enumerate(powers, start=1):
            if gcd(j, ordx) == 1:
                a, b = rfind(int(labels[x])), rfind(int(labels[pw]))
                if a != b:
                    rat[max(a, b)] = min(a, b)
    rclass = np.array([rfind(int(l)) for l in labels])
    rsize = {c: int((rclass == c).sum()) for c in set(rclass.tolist())}
    ident_class = int(rclass[0])
    order_of_classes = sorted((c for c in rsize if c != ident_class), key=lambda c: (rsize[c], c))
    position = {c: i for i, c in enumerate(order_of_classes)}
    rank = np.array([position.get(int(c), -1) for c in rclass])

    pool.add(np.array([0]), [])
    for c in order_of_classes:
        x = int(np.flatnonzero(rclass == c)[0])
        cyc = g.closure([x], tables)
        if len(cyc) < n:
            pool.add(cyc, [x])
        rx = tables[x]
        lx = g.left_table(x)
        centralizer = np.flatnonzero(rx == lx)
        cgens: list[int] = []
        cmem = np.array([0])
        for y in centralizer:
            if not np.isin(y, cmem):
                cgens.append(int(y))
                cmem = g.closure(cgens, tables)
                if len(cmem) == len(centralizer):
                    break
        ctabs = [pool.g.left_table(int(g.index(g.element(y).inverse())))[tables[y]] for y in cgens]
        orbit_labels = _components(n, ctabs)
        allowed = rank >= position[c]
        for y in _min_reps(orbit_labels, allowed):
            sub = g._closure_from_tables([rx, g.right_table(y)], stop_above=half)
            if sub is not None:
                pool.add(sub, [x, y])

    accepted: list[int] = []
    while True:
        accepted = []
        accepted_bits: list[int] = []
        for cid in sorted(range(len(pool.classes)), key=lambda i: -pool.classes[i]["order"]):
            cls = pool.classes[cid]
            rep_bits = _bits(cls["members"], n)
            if any(rep_bits & ~b == 0 for b in accepted_bits):
                continue
            accepted.append(cid)
            accepted_bits.extend(_bits(m, n) for m in cls["conjugates"])
        before = len(pool.classes)
        for cid in accepted:
            cls = pool.classes[cid]
            mgens = cls["gens"]
            tabs = [tables.setdefault(x, g.right_table(x)) for x in mgens]
            tabs += [g.left_table(x) for x in mgens]
            dlabels = _components(n, tabs)
            inside = np.zeros(n, dtype=bool)
            inside[cls["members"]] = True
            for y in _min_reps(dlabels, ~inside):
                sub = g._closure_from_tables(tabs[:len(mgens)] + [g.right_table(y)], stop_above=half)
                if sub is not None:
                    pool.add(sub, mgens + [y])
                    break
        if len(pool.classes) == before:
            break

    result = []
    for cid in accepted:
        cls = pool.classes[cid]
        result.append(SubgroupClass(
            label="",
            order=cls["order"],
            class_size=len(cls["conjugates"]),
            generators=[g.element(x) for x in cls["gens"]],
            members=cls["members"],
        ))
    result.sort(key=lambda s: (-s.order, s.class_size, s.members.tobytes()))
    for i, s in enumerate(result):
        s.label = f"M{i + 1}[order={s.order}]"
    return result
