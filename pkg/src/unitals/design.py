"""Incidence-structure core: projective planes, the unital predicate, induced designs.

Points are 0-based integer indices everywhere inside the library; the 1-based
convention of published tables is applied only at the I/O boundary.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, MalformedInputError, ParameterError, PlaneValidationError

PointSet = tuple[int, ...]


def as_point_set(members, v: int | None = None) -> PointSet:
    """Normalize an iterable of point indices to a sorted duplicate-free tuple."""
    pts = sorted(set(int(p) for p in members))
    if pts and (pts[0] < 0 or (v is not None and pts[-1] >= v)):
        raise MalformedInputError(f"point index out of range [0, {v}): {pts[0] if pts[0] < 0 else pts[-1]}")
    return tuple(pts)


@dataclass(frozen=True)
class DesignParams:
    """Parameters of a t-(v, k, lambda) design."""

    t: int
    v: int
    k: int
    lam: int

    def __post_init__(self):
        if not (1 <= self.t <= self.k <= self.v):
            raise ParameterError(f"need 1 <= t <= k <= v, got t={self.t}, k={self.k}, v={self.v}")
        if self.lam < 1:
            raise ParameterError(f"lambda must be >= 1, got {self.lam}")


@dataclass(frozen=True)
class Violation:
    """One violated plane axiom with a concrete witness."""

    axiom: str
    witness: tuple
    message: str

    def __str__(self):
        return f"{self.axiom}: {self.message} (witness {self.witness})"


@dataclass
class ValidationReport:
    """Outcome of checking a candidate incidence structure against the plane axioms."""

    order: int
    v: int
    ok: bool
    violations: list[Violation] = field(default_factory=list)

    def __str__(self):
        if self.ok:
            return f"valid projective plane of order {self.order} (v={self.v})"
        lines = [f"invalid plane candidate for order {self.order}: {len(self.violations)} violation(s)"]
        lines += [f"  - {viol}" for viol in self.violations]
        return "\n".join(lines)


def _check_indices(lines, v: int) -> None:
    for j, line in enumerate(lines):
        for p in line:
            if not isinstance(p, (int, np.integer)):
                raise MalformedInputError(f"line {j}: non-integer point label {p!r}")
            if p < 0 or p >= v:
                raise MalformedInputError(f"line {j}: point index {p} out of range [0, {v})")


def validate_plane(lines, expected_order: int) -> ValidationReport:
    """Check raw incidence lists against every axiom of a projective plane of the given order.

    Returns a report listing all violated axioms, each with a witness; indices
    outside [0, v) raise MalformedInputError instead, since such input cannot
    be meaningfully checked.
    """
    n = int(expected_order)
    if n < 2:
        raise ParameterError(f"plane order must be >= 2, got {n}")
    v = n * n + n + 1
    k = n + 1
    lines = [list(line) for line in lines]
    _check_indices(lines, v)

    violations: list[Violation] = []

    if len(lines) != v:
        violations.append(Violation("line-count", (len(lines),), f"expected {v} lines, got {len(lines)}"))

    masks = []
    degree = [0] * v
    for j, line in enumerate(lines):
        distinct = set(line)
        if len(distinct) != k or len(line) != k:
            violations.append(
                Violation("line-size", (j,), f"line {j} has {len(distinct)} distinct points, expected {k}")
            )
        m = 0
        for p in distinct:
            m |= 1 << p
            degree[p] += 1
        masks.append(m)

    for p in range(v):
        if degree[p] != k:
            violations.append(Violation("point-degree", (p,), f"point {p} lies on {degree[p]} lines, expected {k}"))

    # Pair coverage over the upper triangle; count per pair, then report extremes.
    cover = bytearray(v * v)
    double_seen = set()
    for j, line in enumerate(lines):
        pts = sorted(set(line))
        for a_idx in range(len(pts)):
            a = pts[a_idx]
            row = a * v
            for b in pts[a_idx + 1:]:
                slot = row + b
                cover[slot] += 1
                if cover[slot] == 2:
                    double_seen.add((a, b))
    for a, b in sorted(double_seen):
        where = [j for j, line in enumerate(lines) if a in line and b in line]
        violations.append(
            Violation("pair-coverage", (a, b, tuple(where)), f"pair covered twice: ({a}, {b}) on lines {where}")
        )
    uncovered = []
    for a in range(v):
        row = a * v
        for b in range(a + 1, v):
            if cover[row + b] == 0:
                uncovered.append((a, b))
                if len(uncovered) >= 16:
                    break
        if len(uncovered) >= 16:
            break
    for a, b in uncovered:
        violations.append(Violation("pair-coverage", (a, b), f"pair never covered: ({a}, {b})"))

    for i in range(len(masks)):
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            meet = (mi & masks[j]).bit_count()
            if meet != 1:
                violations.append(
                    Violation("line-intersection", (i, j), f"lines {i} and {j} meet in {meet} points")
                )
                if len(violations) > 4 * v:
                    # Degenerate candidates would otherwise drown the report.
                    report = ValidationReport(n, v, False, violations)
                    return report

    return ValidationReport(n, v, not violations, violations)


class ProjectivePlane:
    """Immutable incidence structure of a projective plane of order n.

    Lines are stored as sorted point-index tuples together with a per-point
    incidence index and per-line bitmasks; the bitmasks make intersection
    profiles O(v) big-integer popcounts, which the search leans on heavily.
    """

    __slots__ = ("order_n", "v", "k", "lines", "line_masks", "point_to_lines", "coords",
                 "_pt_lines_flat", "_pt_lines_indptr")

    def __init__(self, order_n: int, lines, validate: bool = True):
        if validate:
            report = validate_plane(lines, order_n)
            if not report.ok:
                raise PlaneValidationError(report)
        self.order_n = int(order_n)
        self.v = self.order_n * self.order_n + self.order_n + 1
        self.k = self.order_n + 1
        self.lines: tuple[PointSet, ...] = tuple(tuple(sorted(line)) for line in lines)
        self.line_masks: list[int] = []
        point_to_lines: list[list[int]] = [[] for _ in range(self.v)]
        for j, line in enumerate(self.lines):
            m = 0
            for p in line:
                m |= 1 << p
                point_to_lines[p].append(j)
            self.line_masks.append(m)
        self.point_to_lines: tuple[tuple[int, ...], ...] = tuple(tuple(ls) for ls in point_to_lines)
        indptr = np.zeros(self.v + 1, dtype=np.int32)
        for p in range(self.v):
            indptr[p + 1] = indptr[p] + len(point_to_lines[p])
        flat = np.empty(int(indptr[-1]), dtype=np.int32)
        for p in range(self.v):
            flat[indptr[p]:indptr[p + 1]] = point_to_lines[p]
        self._pt_lines_indptr = indptr
        self._pt_lines_flat = flat
        # optional annotation set by constructive generators (homogeneous coordinates)
        self.coords = None

    @property
    def points(self) -> range:
        return range(self.v)

    def incidence_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR view of the point -> lines incidence (indptr, flat line indices)."""
        return self._pt_lines_indptr, self._pt_lines_flat

    def __eq__(self, other):
        return isinstance(other, ProjectivePlane) and self.order_n == other.order_n and self.lines == other.lines

    def __hash__(self):
        return hash((self.order_n, self.lines))

    def __repr__(self):
        return f"ProjectivePlane(order={self.order_n}, v={self.v})"


def intersection_profile(plane: ProjectivePlane, s) -> dict[int, int]:
    """Histogram of |line ∩ s| over all lines of the plane; values sum to v."""
    members = as_point_set(s, plane.v)
    mask = 0
    for p in members:
        mask |= 1 << p
    return dict(Counter((m & mask).bit_count() for m in plane.line_masks))


def unital_size(q: int) -> int:
    return q * q * q + 1


def check_unital_host(plane: ProjectivePlane, q: int) -> None:
    """Raise unless the plane's order is q^2 (only square orders host unitals)."""
    if q < 2:
        raise ParameterError(f"unital parameter q must be >= 2, got {q}")
    if plane.order_n != q * q:
        raise ParameterError(f"plane order {plane.order_n} is not {q}^2; not a host for q={q} unitals")


def is_unital(plane: ProjectivePlane, s, q: int) -> bool:
    """True iff s has q^3+1 points and every line meets it in 1 or q+1 points."""
    check_unital_host(plane, q)
    members = as_point_set(s, plane.v)
    if len(members) != unital_size(q):
        return False
    profile = intersection_profile(plane, members)
    return set(profile) <= {1, q + 1}


@dataclass(frozen=True)
class Unital:
    """A verified unital: q^3+1 points of a plane of order q^2 meeting every line in 1 or q+1 points."""

    q: int
    members: PointSet

    @classmethod
    def from_points(cls, plane: ProjectivePlane, members, q: int) -> "Unital":
        """Construct after re-verifying the line-intersection property; never trusts the caller."""
        pts = as_point_set(members, plane.v)
        if not is_unital(plane, pts, q):
            raise ContractViolationError(f"{len(pts)}-point set is not a unital of the order-{plane.order_n} plane")
        return cls(q=q, members=pts)


@dataclass(frozen=True)
class InducedDesign:
    """The 2-(q^3+1, q+1, 1) design cut out of a plane by a unital.

    Points are the unital members relabeled 0..q^3 in ascending original-index
    order; blocks are the secant-line intersections under that relabeling.
    """

    params: DesignParams
    blocks: tuple[tuple[int, ...], ...]

    @property
    def v(self) -> int:
        return self.params.v

    @property
    def k(self) -> int:
        return self.params.k


def induced_design(plane: ProjectivePlane, unital: Unital) -> InducedDesign:
    """Restrict the plane's secant lines to the unital, relabeling points to 0..q^3."""
    q = unital.q
    check_unital_host(plane, q)
    members = unital.members
    if not is_unital(plane, members, q):
        raise ContractViolationError("induced_design requires a verified unital")
    rank = {p: i for i, p in enumerate(members)}
    mask = 0
    for p in members:
        mask |= 1 << p
    blocks = []
    for line, lmask in zip(plane.lines, plane.line_masks):
        if (lmask & mask).bit_count() == q + 1:
            blocks.append(tuple(sorted(rank[p] for p in line if p in rank)))
    blocks.sort()
    params = DesignParams(2, unital_size(q), q + 1, 1)
    expected_blocks = q * q * (q * q - q + 1)
    if len(blocks) != expected_blocks:
        raise ContractViolationError(f"expected {expected_blocks} secant blocks, found {len(blocks)}")
    return InducedDesign(params=params, blocks=tuple(blocks))


def tangent_secant_counts(plane: ProjectivePlane, unital: Unital) -> dict[int, tuple[int, int]]:
    """Per-member (tangent, secant) line counts; a true unital gives (1, q^2) everywhere."""
    mask = 0
    for p in unital.members:
        mask |= 1 << p
    out = {}
    for p in unital.members:
        tangents = secants = 0
        for j in plane.point_to_lines[p]:
            meet = (plane.line_masks[j] & mask).bit_count()
            if meet == 1:
                tangents += 1
            elif meet == unital.q + 1:
                secants += 1
        out[p] = (tangents, secants)
    return out


def pair_coverage_exhaustive(design: InducedDesign) -> bool:
    """Direct check that every point pair of the design lies in exactly one block."""
    v = design.v
    seen = Counter()
    for block in design.blocks:
        for i in range(len(block)):
            for j in range(i + 1, len(block)):
                seen[(block[i], block[j])] += 1
    return len(seen) == v * (v - 1) // 2 and set(seen.values()) == {1}


def isqrt_exact(n: int) -> int | None:
    """Integer square root if n is a perfect square, else None."""
    r = math.isqrt(n)
    return r if r * r == n else None
