"""Orbit-union unital search.

The heuristic: pick a subgroup H of the plane's collineation group, split
the points into H-orbits, and search for unions of orbits of total size
q^3+1 meeting every line in 1 or q+1 points. Candidate sets found by the
backtracking walk are always re-verified with the full unital predicate
before being reported; the walk itself is exhaustive over the given family
unless a node or time budget interrupts it, in which case the result is
flagged incomplete.

The trivial subgroup (order 1) gives the singleton-orbit family, turning
the same walk into a full exhaustive search over all point subsets.
"""

from __future__ import annotations

import math
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import gcd

import numpy as np

from .autgroup import PermGroup, plane_automorphism_group, point_orbits, setwise_stabilizer
from .design import ProjectivePlane, Unital, check_unital_host, induced_design, is_unital, unital_size
from .errors import MalformedInputError, ParameterError
from .kernels import get_backend
from .report import CampaignResult, UnitalRecord


@dataclass(frozen=True)
class OrbitFamily:
    """A partition of the plane's points into orbits of one subgroup."""

    label: str
    subgroup_order: int
    orbits: tuple[tuple[int, ...], ...]

    @staticmethod
    def singletons(v: int) -> "OrbitFamily":
        return OrbitFamily(
            label="trivial",
            subgroup_order=1,
            orbits=tuple((p,) for p in range(v)),
        )

    def partition_key(self):
        return frozenset(self.orbits)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for sampling and the walk. ``orders=None`` derives subgroup
    element orders from the primes up to 13 dividing the group order."""

    seed: int = 0
    orders: tuple[int, ...] | None = None
    max_families: int = 24
    attempts_per_order: int = 60
    node_budget: int | None = None
    time_budget: float | None = None
    threads: int = 1
    prune: bool = True


@dataclass(frozen=True)
class FamilyResult:
    family: OrbitFamily
    hits: tuple[tuple[int, ...], ...]
    nodes: int
    complete: bool


def _compose(a, b):
    # (a o b)(x) = a[b[x]]
    return a[b]


def _perm_order(p) -> int:
    n = len(p)
    seen = bytearray(n)
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = 1
            x = int(p[x])
            length += 1
        order = order * length // gcd(order, length)
    return order


def _perm_power(p, e: int):
    result = np.arange(len(p), dtype=p.dtype)
    base = p
    while e:
        if e & 1:
            result = _compose(base, result)
        base = _compose(base, base)
        e >>= 1
    return result


def subgroup_orbit_families(group: PermGroup, config: SearchConfig) -> list[OrbitFamily]:
    """Sample cyclic subgroups of the prescribed element orders and return
    their distinct point-orbit partitions. Order 1 yields the singleton
    family. Deterministic for a fixed (group, config)."""
    rng = random.Random(config.seed)
    v = group.degree
    if config.orders is None:
        orders = tuple(r for r in (2, 3, 5, 7, 11, 13) if group.order % r == 0)
    else:
        orders = tuple(config.orders)
    if not orders:
        raise ParameterError("no subgroup orders to sample")
    gens = group.generator_arrays()
    families: list[OrbitFamily] = []
    seen_partitions = set()
    seq = 0
    for r in orders:
        if r == 1:
            fam = OrbitFamily.singletons(v)
            if fam.partition_key() not in seen_partitions:
                seen_partitions.add(fam.partition_key())
                families.append(fam)
            continue
        if r < 1:
            raise ParameterError(f"subgroup order must be >= 1, got {r}")
        if not gens:
            continue
        found = 0
        for _ in range(config.attempts_per_order):
            if len(families) >= config.max_families:
                break
            word = gens[rng.randrange(len(gens))]
            for _ in range(rng.randint(0, 5)):
                word = _compose(word, gens[rng.randrange(len(gens))])
            m = _perm_order(word)
            if m % r != 0:
                continue
            h = _perm_power(word, m // r)
            orbits = point_orbits([h], v).orbits
            seq += 1
            fam = OrbitFamily(label=f"C{r}-{seq}", subgroup_order=r, orbits=orbits)
            key = fam.partition_key()
            if key in seen_partitions:
                continue
            seen_partitions.add(key)
            families.append(fam)
            found += 1
        if len(families) >= config.max_families:
            break
    return families


def _check_family(plane: ProjectivePlane, family: OrbitFamily):
    covered = sorted(p for orbit in family.orbits for p in orbit)
    if covered != list(range(plane.v)):
        raise MalformedInputError(
            f"orbit family {family.label!r} does not partition the {plane.v} plane points")


def orbit_union_search(plane: ProjectivePlane, q: int, family: OrbitFamily, *,
                       node_budget: int | None = None,
                       time_budget: float | None = None,
                       prune: bool = True) -> FamilyResult:
    """Depth-first walk over take/skip decisions for each orbit, largest
    orbits first. Complete (within the family) unless a budget fires.

    With ``prune=False`` the feasibility cuts are disabled (budgets still
    apply); the set of emitted unitals is unchanged, only slower - the
    pruning rules only ever remove subtrees that cannot contain one.
    """
    check_unital_host(plane, q)
    _check_family(plane, family)
    target = unital_size(q)
    kmax = q + 1
    orbits = sorted(family.orbits, key=lambda o: (-len(o), o[0]))
    sizes = [len(o) for o in orbits]
    nd = len(orbits)

    # reach[d] = bitmask of sums achievable with orbits d..nd-1
    full = (1 << (target + 1)) - 1
    reach = [0] * (nd + 1)
    reach[nd] = 1
    for d in range(nd - 1, -1, -1):
        b = reach[d + 1]
        reach[d] = (b | (b << sizes[d])) & full

    # the walk recurses once per orbit; singleton families on big planes
    # need more frames than CPython's default allowance
    if nd + 200 > sys.getrecursionlimit():
        sys.setrecursionlimit(nd + 200)

    backend = get_backend()
    indptr, flat = plane.incidence_arrays()
    csr = backend.prepare_csr(indptr, flat)
    pts = [backend.prepare_pts(np.asarray(o, dtype=np.int32)) for o in orbits]
    n_lines = len(plane.lines)
    cnt = np.zeros(n_lines, dtype=np.int32)
    avail = np.full(n_lines, plane.k, dtype=np.int32)

    hits: list[tuple[int, ...]] = []
    taken: list[int] = []
    nodes = 0
    stopped = False
    t_end = time.monotonic() + time_budget if time_budget is not None else None

    take_orbit = backend.take_orbit
    untake_orbit = backend.untake_orbit
    skip_orbit = backend.skip_orbit
    unskip_orbit = backend.unskip_orbit

    def walk(d: int, s: int):
        nonlocal nodes, stopped
        if stopped:
            return
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            stopped = True
            return
        if t_end is not None and nodes % 1024 == 0 and time.monotonic() > t_end:
            stopped = True
            return
        if s == target:
            cand = tuple(sorted(p for i in taken for p in orbits[i]))
            if is_unital(plane, cand, q):
                hits.append(cand)
            return
        if d == nd:
            return
        if prune and not (reach[d] >> (target - s)) & 1:
            return
        if s + sizes[d] <= target:
            ok = take_orbit(csr, pts[d], cnt, avail, kmax)
            if ok or not prune:
                taken.append(d)
                walk(d + 1, s + sizes[d])
                taken.pop()
            untake_orbit(csr, pts[d], cnt, avail)
        ok = skip_orbit(csr, pts[d], cnt, avail, kmax)
        if ok or not prune:
            walk(d + 1, s)
        unskip_orbit(csr, pts[d], cnt, avail)

    walk(0, 0)
    return FamilyResult(family=family, hits=tuple(sorted(hits)), nodes=nodes,
                        complete=not stopped)


def exhaustive_search(plane: ProjectivePlane, q: int, cap: int = 2_000_000):
    """Filter every (q^3+1)-subset of the points through the unital
    predicate. Refuses when the binomial count exceeds ``cap``; this is the
    independent slow oracle, kept free of the walk's pruning machinery."""
    check_unital_host(plane, q)
    target = unital_size(q)
    total = math.comb(plane.v, target)
    if total > cap:
        raise ParameterError(
            f"C({plane.v},{target}) = {total} subsets exceeds the cap of {cap}")
    masks = plane.line_masks
    good = (1, q + 1)
    hits = []
    for comb in combinations(range(plane.v), target):
        m = 0
        for p in comb:
            m |= 1 << p
        if all((lm & m).bit_count() in good for lm in masks):
            hits.append(comb)
    return tuple(hits)


def run_campaign(plane: ProjectivePlane, q: int, *,
                 group: PermGroup | None = None,
                 config: SearchConfig = SearchConfig(),
                 plane_name: str = "PLANE") -> CampaignResult:
    """Sample orbit families, walk each, and aggregate verified unitals into
    isomorphism-class records sorted the way the source listings are: by
    descending unital group order."""
    check_unital_host(plane, q)
    if group is None:
        group = plane_automorphism_group(plane)
    if group.degree != plane.v:
        raise ParameterError("group degree does not match the plane's point count")
    plane_orbits = point_orbits(group.generator_arrays(), plane.v)
    families = subgroup_orbit_families(group, config)

    def run_one(fam: OrbitFamily) -> FamilyResult:
        return orbit_union_search(plane, q, fam,
                                  node_budget=config.node_budget,
                                  time_budget=config.time_budget,
                                  prune=config.prune)

    if config.threads > 1 and len(families) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(run_one, families))
    else:
        results = [run_one(fam) for fam in families]

    # aggregate: one record per isomorphism class of induced design
    from .isomorph import canonical_certificate, unital_aut_group

    seen_members: set[tuple[int, ...]] = set()
    by_cert: dict[bytes, UnitalRecord] = {}
    for res in results:
        for members in res.hits:
            if members in seen_members:
                continue
            seen_members.add(members)
            unital = Unital.from_points(plane, members, q)
            design = induced_design(plane, unital)
            cert = canonical_certificate(design)
            if cert in by_cert:
                continue
            ugroup, uorbits = unital_aut_group(design)
            stab = setwise_stabilizer(plane, members)
            record = UnitalRecord(
                plane_name=plane_name,
                plane_group_order=group.order,
                plane_orbit_count=len(plane_orbits),
                unital_group_order=ugroup.order,
                unital_orbit_count=len(uorbits),
                unital_orbit_sizes=uorbits.sizes,
                members=members,
                q=q,
                certificate_hex=cert.hex(),
                stabilizer_order=stab.order,
                provenance={
                    "family": res.family.label,
                    "subgroup_order": res.family.subgroup_order,
                    "seed": config.seed,
                    "complete": res.complete,
                },
            )
            by_cert[cert] = record
    records = sorted(by_cert.values(),
                     key=lambda r: (-r.unital_group_order, r.certificate_hex, r.members))
    return CampaignResult(
        plane_name=plane_name,
        order=plane.order_n,
        q=q,
        plane_group_order=group.order,
        plane_orbit_count=len(plane_orbits),
        seed=config.seed,
        complete=all(res.complete for res in results),
        nodes=sum(res.nodes for res in results),
        family_count=len(families),
        records=tuple(records),
    )
