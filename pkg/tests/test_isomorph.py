import random

import pytest

from unitals.design import DesignParams, InducedDesign, Unital, induced_design
from unitals.geometry import hermitian_unital
from unitals.isomorph import are_isomorphic, canonical_certificate, unital_aut_group

from _oracles import ag23_blocks


def relabel_design(design, perm):
    blocks = [tuple(sorted(perm[p] for p in b)) for b in design.blocks]
    return InducedDesign(design.params, tuple(sorted(blocks)))


def test_relabeled_designs_isomorphic(hermitian2_design):
    rng = random.Random(5)
    perm = list(range(hermitian2_design.v))
    rng.shuffle(perm)
    other = relabel_design(hermitian2_design, perm)
    iso, witness = are_isomorphic(hermitian2_design, other)
    assert iso
    # witness maps blocks of the first design into the second
    bset = {frozenset(b) for b in other.blocks}
    for b in hermitian2_design.blocks:
        assert frozenset(witness[p] for p in b) in bset


def test_certificate_equals_ag23(hermitian2_design):
    ag = InducedDesign(DesignParams(2, 9, 3, 1), tuple(ag23_blocks()))
    assert canonical_certificate(hermitian2_design) == canonical_certificate(ag)
    iso, witness = are_isomorphic(hermitian2_design, ag)
    assert iso and witness is not None


def test_non_isomorphic_detected(hermitian2_design):
    # swap two points inside one block only; pair coverage breaks symmetry
    blocks = list(hermitian2_design.blocks)
    blocks[0] = (0, 1, 2) if blocks[0] != (0, 1, 2) else (0, 1, 3)
    tweaked = InducedDesign(DesignParams(2, 9, 3, 1), tuple(sorted(set(blocks))))
    iso, witness = are_isomorphic(hermitian2_design, tweaked)
    assert not iso
    assert witness is None


def test_param_mismatch_short_circuits(hermitian2_design):
    small = InducedDesign(DesignParams(2, 3, 3, 1), ((0, 1, 2),))
    iso, witness = are_isomorphic(hermitian2_design, small)
    assert not iso


def test_certificate_invariance_under_relabeling(hermitian2_design):
    rng = random.Random(17)
    cert = canonical_certificate(hermitian2_design)
    perm = list(range(hermitian2_design.v))
    for _ in range(25):
        rng.shuffle(perm)
        assert canonical_certificate(relabel_design(hermitian2_design, perm)) == cert


def test_unital_aut_group_q2(hermitian2_design):
    group, orbits = unital_aut_group(hermitian2_design)
    # 2-(9,3,1) is AG(2,3); full automorphism group is AGL(2,3)
    assert group.order == 432
    assert len(orbits) == 1
    assert orbits.sizes == (9,)


@pytest.mark.slow
def test_unital_aut_group_q3():
    plane, members = hermitian_unital(3)
    d = induced_design(plane, Unital.from_points(plane, members, 3))
    group, orbits = unital_aut_group(d)
    assert group.order == 12096
    assert len(orbits) == 1
