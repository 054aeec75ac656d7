"""Finite fields GF(p^k) and constructive generators: PG(2, q) and Hermitian unitals.

Moduli are fixed (not searched at runtime) so that point labels are stable
across runs and machines:

    GF(4):  x^2 + x + 1      GF(9):  x^2 + 1       GF(25): x^2 + 2
    GF(8):  x^3 + x + 1      GF(16): x^4 + x + 1

Field elements are encoded as integers 0 .. p^k-1 via base-p digit vectors,
least significant digit first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import PointSet, ProjectivePlane
from .errors import ParameterError, UnitalsError

# coefficient lists are low-degree-first and include the leading 1
_FIXED_MODULI = {
    (2, 2): (1, 1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 2): (1, 0, 1),        # x^2 + 1
    (5, 2): (2, 0, 1),        # x^2 + 2
}

SUPPORTED_SIZES = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25)


def _factor_prime_power(size: int) -> tuple[int, int]:
    for p in (2, 3, 5, 7, 11, 13):
        if size % p == 0:
            k = 0
            m = size
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ParameterError(f"{size} is not a prime power")
            return p, k
    raise ParameterError(f"{size} is not a supported prime power")


def _poly_mul_mod(a, b, modulus, p):
    # dense coefficient arithmetic; fine for the tiny degrees in scope
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    deg_m = len(modulus) - 1
    for i in range(len(prod) - 1, deg_m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg_m):
                prod[i - deg_m + j] = (prod[i - deg_m + j] - c * modulus[j]) % p
    return prod[:deg_m] + [0] * (deg_m - len(prod))


def _is_irreducible(modulus, p) -> bool:
    """Trial division by every monic polynomial of degree up to deg/2."""
    deg = len(modulus) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            divisor = _digits(code, p, d) + [1]
            if _poly_divides(divisor, modulus, p):
                return False
    return True


def _poly_divides(divisor, dividend, p) -> bool:
    rem = list(dividend)
    dd = len(divisor) - 1
    inv_lead = pow(divisor[-1], -1, p)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = (rem[i] * inv_lead) % p
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - c * divisor[j]) % p
    return not any(rem)


def _digits(value: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(value % p)
        value //= p
    return out


def _undigits(digits, p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^k) with table-driven arithmetic over integer-encoded elements."""

    p: int
    k: int
    size: int
    modulus: tuple[int, ...]
    add_table: np.ndarray
    mul_table: np.ndarray
    inv_table: np.ndarray

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        digs = _digits(a, self.p, self.k)
        return _undigits([(-d) % self.p for d in digs], self.p)

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self) -> range:
        return range(self.size)

    def __repr__(self):
        return f"GF({self.size})"


_FIELD_CACHE: dict[int, FiniteField] = {}


def make_field(size: int) -> FiniteField:
    """Build GF(size) for size in the supported range, with construction self-checks."""
    if size in _FIELD_CACHE:
        return _FIELD_CACHE[size]
    if size not in SUPPORTED_SIZES:
        raise ParameterError(f"field size {size} not supported; expected one of {SUPPORTED_SIZES}")
    p, k = _factor_prime_power(size)
    if k == 1:
        modulus = (0, 1)  # placeholder: prime fields reduce mod p directly
    else:
        modulus = _FIXED_MODULI[(p, k)]
        if not _is_irreducible(list(modulus), p):
            raise UnitalsError(f"internal error: fixed modulus for GF({size}) is reducible")

    add_table = np.empty((size, size), dtype=np.int16)
    mul_table = np.empty((size, size), dtype=np.int16)
    digit_cache = [_digits(a, p, k) for a in range(size)]
    for a in range(size):
        da = digit_cache[a]
        for b in range(a, size):
            db = digit_cache[b]
            s = _undigits([(x + y) % p for x, y in zip(da, db)], p)
            add_table[a, b] = s
            add_table[b, a] = s
            if k == 1:
                m = (a * b) % p
            else:
                m = _undigits(_poly_mul_mod(da, db, list(modulus), p), p)
            mul_table[a, b] = m
            mul_table[b, a] = m

    inv_table = np.zeros(size, dtype=np.int16)
    for a in range(1, size):
        row = mul_table[a]
        hits = np.nonzero(row == 1)[0]
        if len(hits) != 1:
            raise UnitalsError(f"internal error: GF({size}) element {a} has {len(hits)} inverses")
        inv_table[a] = hits[0]

    field = FiniteField(p=p, k=k, size=size, modulus=tuple(modulus),
                        add_table=add_table, mul_table=mul_table, inv_table=inv_table)
    _check_cyclic(field)
    _FIELD_CACHE[size] = field
    return field


def _check_cyclic(field: FiniteField) -> None:
    """Spot-check that the multiplicative group is cyclic by finding a generator."""
    n = field.size - 1
    primes = set()
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            primes.add(d)
            m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for g in range(2, field.size):
        if all(field.pow(g, n // q) != 1 for q in primes):
            return
    if field.size > 2:
        raise UnitalsError(f"internal error: no multiplicative generator found in GF({field.size})")


def _normalized_triples(field: FiniteField) -> list[tuple[int, int, int]]:
    """Projective points as triples with first nonzero coordinate 1, in lex order of encodings."""
    q = field.size
    triples = [(0, 0, 1)]
    triples += [(0, 1, z) for z in range(q)]
    triples += [(1, y, z) for y in range(q) for z in range(q)]
    triples.sort()
    return triples


def desarguesian_plane(q: int) -> ProjectivePlane:
    """PG(2, q): normalized homogeneous triples over GF(q), lines cut out by dual triples."""
    field = make_field(q)
    triples = _normalized_triples(field)
    index_of = {t: i for i, t in enumerate(triples)}
    xs = np.array([t[0] for t in triples], dtype=np.int64)
    ys = np.array([t[1] for t in triples], dtype=np.int64)
    zs = np.array([t[2] for t in triples], dtype=np.int64)
    add = field.add_table
    mul = field.mul_table
    lines = []
    for (a, b, c) in triples:
        acc = add[mul[a, xs], mul[b, ys]]
        acc = add[acc, mul[c, zs]]
        on_line = np.nonzero(acc == 0)[0]
        lines.append(tuple(int(i) for i in on_line))
    plane = ProjectivePlane(q, lines, validate=False)
    plane.coords = (triples, index_of, field)
    return plane


def plane_point_triples(plane: ProjectivePlane) -> list[tuple[int, int, int]]:
    if plane.coords is None:
        raise ParameterError("plane carries no coordinates; build it with desarguesian_plane")
    return plane.coords[0]


def _primitive_element(field: FiniteField) -> int:
    n = field.size - 1
    primes = set()
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            primes.add(d)
            m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for g in range(1, field.size):
        if all(field.pow(g, n // r) != 1 for r in primes):
            return g
    return 1


def pgammal_order(q: int) -> int:
    """|PGammaL(3, q)| by the closed formula, q = p^h."""
    p, h = _factor_prime_power(q)
    gl = (q ** 3 - 1) * (q ** 3 - q) * (q ** 3 - q ** 2)
    return gl // (q - 1) * h


def _apply_matrix(field: FiniteField, mat, triple):
    x, y, z = triple
    out = []
    for row in mat:
        s = field.add(field.add(field.mul(row[0], x), field.mul(row[1], y)), field.mul(row[2], z))
        out.append(s)
    # rescale so the first nonzero coordinate is 1
    for c in out:
        if c:
            inv = field.inv(c)
            return tuple(field.mul(inv, v) for v in out)
    raise UnitalsError("matrix sent a projective point to zero")


def classical_collineation_generators(plane: ProjectivePlane) -> list:
    """Point permutations generating the full collineation group PGammaL(3, q)
    of a coordinatized desarguesian plane.

    Generators: diag(a,1,1) with a primitive, the coordinate 3-cycle, one
    transvection, and the Frobenius map. Every returned permutation is
    checked to map lines onto lines.
    """
    if plane.coords is None:
        raise ParameterError("plane carries no coordinates; build it with desarguesian_plane")
    triples, index_of, field = plane.coords
    alpha = _primitive_element(field)
    mats = [
        ((alpha, 0, 0), (0, 1, 0), (0, 0, 1)),
        ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
        ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
    ]
    perms = []
    for mat in mats:
        perm = np.array([index_of[_apply_matrix(field, mat, t)] for t in triples], dtype=np.int32)
        perms.append(perm)
    if field.k > 1:
        frob = np.array(
            [index_of[tuple(field.frobenius(c) for c in t)] for t in triples], dtype=np.int32)
        perms.append(frob)

    line_set = {frozenset(line) for line in plane.lines}
    for perm in perms:
        for line in plane.lines:
            if frozenset(int(perm[p]) for p in line) not in line_set:
                raise UnitalsError("constructed map is not a collineation")
    return perms


def hermitian_unital(q: int) -> tuple[ProjectivePlane, PointSet]:
    """The Hermitian point set x^(q+1) + y^(q+1) + z^(q+1) = 0 inside PG(2, q^2).

    Returns the host plane together with the q^3+1 point indices.
    """
    if q not in (2, 3, 4, 5):
        raise ParameterError(f"hermitian_unital supports q in (2, 3, 4, 5), got {q}")
    plane = desarguesian_plane(q * q)
    triples, _, field = plane.coords
    e = q + 1
    members = []
    for i, (x, y, z) in enumerate(triples):
        s = field.add(field.add(field.pow(x, e), field.pow(y, e)), field.pow(z, e))
        if s == 0:
            members.append(i)
    return plane, tuple(members)
