"""Design isomorphism: certificates, verified isomorphisms, and the full
automorphism group of an induced unital design.

Equality of two designs' certificates decides abstract design isomorphism,
the relation used when comparing unitals found in different planes.
"""

from __future__ import annotations

from .autgroup import (
    OrbitPartition,
    PermGroup,
    _IR,
    _cert_header,
    _restrict_gens,
    blocks_to_graph,
    graph_certificate,
    point_orbits,
)
from .design import InducedDesign
from .errors import ContractViolationError


def canonical_certificate(design: InducedDesign) -> bytes:
    """Relabeling-invariant byte string of a design; equal iff isomorphic."""
    return graph_certificate(blocks_to_graph(design.v, design.blocks))


def are_isomorphic(a: InducedDesign, b: InducedDesign):
    """Decide isomorphism. On success the witness point bijection (tuple w
    with w[point of a] = point of b) is returned and has been verified to
    map every block of a onto a block of b."""
    if (a.params, len(a.blocks)) != (b.params, len(b.blocks)):
        return False, None
    ga = blocks_to_graph(a.v, a.blocks)
    gb = blocks_to_graph(b.v, b.blocks)
    ira = _IR(ga)
    perm_a, pos_a, _, leaf_a = ira.run_canonical()
    irb = _IR(gb)
    perm_b, pos_b, _, leaf_b = irb.run_canonical()
    if _cert_header(ga, ira.colors_key) + leaf_a != _cert_header(gb, irb.colors_key) + leaf_b:
        return False, None
    # same canonical form: position i of a's labeling corresponds to i of b's
    mapping = perm_b[pos_a]
    witness = tuple(int(x) for x in mapping[:a.v])
    block_set = {frozenset(blk) for blk in b.blocks}
    for blk in a.blocks:
        if frozenset(witness[p] for p in blk) not in block_set:
            raise ContractViolationError("certificate match produced an unverifiable witness")
    return True, witness


def unital_aut_group(design: InducedDesign) -> tuple[PermGroup, OrbitPartition]:
    """Automorphism group of the design acting on its points, with the
    corresponding point orbit partition."""
    g = blocks_to_graph(design.v, design.blocks)
    ir = _IR(g)
    gens = ir.run_automorphisms()
    for gen in gens:
        if not ir._is_automorphism(gen):
            raise ContractViolationError("engine produced a non-automorphism")
    pts = _restrict_gens(gens, design.v)
    if not pts:
        group = PermGroup(degree=design.v, generators=(), order=1, base=(), basic_orbit_sizes=())
    else:
        group = PermGroup.from_generators(pts, design.v)
    orbits = point_orbits(group.generator_arrays(), design.v)
    return group, orbits
