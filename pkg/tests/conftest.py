import random
from pathlib import Path

import pytest

from epaffine.gf2core import BitMatrix

DATA = Path(__file__).resolve().parent.parent / "data"


def rand_matrix(rng: random.Random, rows: int, cols: int) -> BitMatrix:
    return BitMatrix(rows, cols, tuple(rng.getrandbits(cols) for _ in range(rows)))


def rand_invertible(rng: random.Random, n: int) -> BitMatrix:
    while True:
        m = rand_matrix(rng, n, n)
        if m.is_invertible():
            return m


def brute_left_kernel(a: BitMatrix) -> set[int]:
    return {v for v in range(1 << a.rows) if a.apply(v) == 0}


def brute_closure(gens, k):
    """All products of the generators, by plain breadth-first search."""
    ident = BitMatrix.identity(k)
    seen = {ident.data: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y.data not in seen:
                    seen[y.data] = y
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA
