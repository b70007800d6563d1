"""Standard matrix generators and the shipped maximal-subgroup datasets."""

from __future__ import annotations

from math import prod

from .gf2core import BitMatrix
from .grpact import MatrixGroup
from .repfunctors import companion_matrix, parse_tag

# least primitive polynomial of each small degree, bit i = coefficient of x^i
PRIMITIVE_POLYS = {2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011, 7: 0b10000011}


def transvection(k: int, i: int, j: int) -> BitMatrix:
    """I + E_ij: sends e_i to e_i + e_j."""
    rows = [1 << a for a in range(k)]
    rows[i] ^= 1 << j
    return BitMatrix(k, k, tuple(rows))


def gl_generators(k: int) -> list[BitMatrix]:
    """Adjacent elementary transvections; they generate GL_k(2) = SL_k(2)."""
    if k == 1:
        return [BitMatrix.identity(1)]
    gens = []
    for i in range(k - 1):
        gens.append(transvection(k, i, i + 1))
        gens.append(transvection(k, i + 1, i))
    return gens


def gl_order(k: int) -> int:
    return prod((1 << k) - (1 << i) for i in range(k))


def gaussian_binomial(n: int, m: int, q: int = 2) -> int:
    """Number of m-dimensional subspaces of F_q^n."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    num = prod(q ** (n - i) - 1 for i in range(m))
    den = prod(q ** (m - i) - 1 for i in range(m))
    return num // den


def singer_cycle(k: int) -> BitMatrix:
    """Multiplication by x on F_2[x]/(p), p primitive of degree k."""
    return companion_matrix(PRIMITIVE_POLYS[k])


def frobenius_matrix(k: int) -> BitMatrix:
    """The squaring map on F_2[x]/(p) in the basis 1, x, ..., x^(k-1)."""
    poly = PRIMITIVE_POLYS[k]
    rows = []
    for i in range(k):
        v = 1 << (2 * i)
        while v.bit_length() > k:
            v ^= poly << (v.bit_length() - 1 - k)
        rows.append(v)
    return BitMatrix(k, k, tuple(rows))


def parabolic_generators(k: int, m: int) -> list[BitMatrix]:
    """Generators of the stabilizer of <e_1, ..., e_m> in GL_k(2).

    Levi factor GL_m x GL_(k-m) plus one transvection from the unipotent
    radical, which is an irreducible module for the Levi factor.
    """
    if not 1 <= m < k:
        raise ValueError("need 1 <= m < k")
    gens = []
    for g in gl_generators(m) if m > 1 else []:
        gens.append(BitMatrix(k, k, g.data + tuple(1 << a for a in range(m, k))))
    for g in gl_generators(k - m) if k - m > 1 else []:
        gens.append(BitMatrix(k, k, tuple(1 << a for a in range(m)) + tuple(r << m for r in g.data)))
    gens.append(transvection(k, m, 0))
    return gens


def general_linear(k: int) -> MatrixGroup:
    return MatrixGroup(k, tuple(gl_generators(k)), order=gl_order(k), name=f"GL{k}(2)")


def singer_group(k: int) -> MatrixGroup:
    return MatrixGroup(k, (singer_cycle(k),), order=(1 << k) - 1, name=f"Singer{(1 << k) - 1}")


def singer_normalizer(k: int) -> MatrixGroup:
    return MatrixGroup(k, (singer_cycle(k), frobenius_matrix(k)), order=((1 << k) - 1) * k,
                       name=f"{(1 << k) - 1}:{k}")


def l7_wedge3_dataset() -> dict:
    """Maximal subgroup classes of L_7(2) acting on the wedge-cube.

    Parabolics P_1..P_6 (class sizes are Gaussian binomials) and the
    normalizer 127:7 of a Singer cycle (class size |GL_7(2)|/889).
    """
    k = 7
    tag = parse_tag("wedge3")
    classes = []
    for m in range(1, k):
        classes.append({
            "label": f"P{m}",
            "class_size": gaussian_binomial(k, m),
            "module_tag": tag,
            "gens": parabolic_generators(k, m),
        })
    classes.append({
        "label": "127:7",
        "class_size": gl_order(k) // 889,
        "module_tag": tag,
        "gens": [singer_cycle(k), frobenius_matrix(k)],
    })
    return {"group": "L7(2)", "order": gl_order(k), "complete": True, "classes": classes}
