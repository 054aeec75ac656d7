import pytest

from unitals.design import (
    DesignParams,
    ProjectivePlane,
    Unital,
    induced_design,
    intersection_profile,
    is_unital,
    pair_coverage_exhaustive,
    tangent_secant_counts,
    unital_size,
    validate_plane,
)
from unitals.errors import (
    ContractViolationError,
    MalformedInputError,
    ParameterError,
    PlaneValidationError,
)
from unitals.geometry import desarguesian_plane, hermitian_unital

FANO_LINES = [
    (0, 1, 2), (0, 3, 4), (0, 5, 6),
    (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5),
]


def test_valid_fano():
    report = validate_plane(FANO_LINES, 2)
    assert report.ok
    assert report.violations == []
    assert report.v == 7


def test_plane_constructor_validates():
    plane = ProjectivePlane(2, FANO_LINES)
    assert plane.v == 7 and plane.k == 3
    assert len(plane.lines) == 7


def test_line_count_axiom():
    report = validate_plane(FANO_LINES[:-1], 2)
    assert not report.ok
    assert any(v.axiom == "line-count" for v in report.violations)


def test_line_size_axiom():
    bad = [tuple(l) for l in FANO_LINES]
    bad[0] = (0, 1, 1)  # repeated point shrinks the line
    report = validate_plane(bad, 2)
    assert not report.ok
    assert any(v.axiom == "line-size" and v.witness[0] == 0 for v in report.violations)


def test_point_degree_axiom():
    bad = [list(l) for l in FANO_LINES]
    bad[6] = [2, 4, 6]  # point 5 now on two lines, point 6 on four
    report = validate_plane(bad, 2)
    assert not report.ok
    assert any(v.axiom == "point-degree" for v in report.violations)


def test_pair_coverage_axiom():
    bad = [list(l) for l in FANO_LINES]
    bad[3] = [1, 3, 6]
    report = validate_plane(bad, 2)
    assert not report.ok
    kinds = {v.axiom for v in report.violations}
    assert "pair-coverage" in kinds


def test_line_intersection_axiom():
    # two disjoint lines cannot happen in a projective plane
    bad = [list(l) for l in FANO_LINES]
    bad[1] = [3, 4, 5]
    report = validate_plane(bad, 2)
    assert not report.ok
    assert any(v.axiom == "line-intersection" for v in report.violations)


def test_out_of_range_label_rejected():
    bad = [list(l) for l in FANO_LINES]
    bad[0] = [0, 1, 99]
    with pytest.raises(MalformedInputError):
        validate_plane(bad, 2)


def test_invalid_plane_raises_with_report():
    with pytest.raises(PlaneValidationError) as ei:
        ProjectivePlane(2, FANO_LINES[:-1])
    assert ei.value.report.violations


def test_design_params():
    p = DesignParams(2, 21, 5, 1)
    assert (p.v, p.k, p.lam) == (21, 5, 1)
    with pytest.raises(ParameterError):
        DesignParams(2, 5, 9, 1)


def test_pair_coverage_exhaustive(hermitian2_design):
    assert pair_coverage_exhaustive(hermitian2_design)


@pytest.mark.parametrize("q", [2, 3])
def test_hermitian_is_unital(q):
    plane, members = hermitian_unital(q)
    assert len(members) == unital_size(q)
    assert is_unital(plane, members, q)


def test_hermitian2_profile(hermitian2):
    plane, members = hermitian2
    profile = intersection_profile(plane, members)
    # 9 tangent lines and 12 secants in PG(2,4)
    assert profile == {1: 9, 3: 12}
    assert sum(profile.values()) == plane.v


def test_profile_counts_all_lines(pg2_4):
    profile = intersection_profile(pg2_4, {0, 1, 2})
    assert sum(profile.values()) == pg2_4.v


def test_not_unital_wrong_size(pg2_4):
    assert not is_unital(pg2_4, set(range(8)), 2)


def test_not_unital_bad_line(pg2_4):
    # a full line plus fillers has a (q+2)-secant or worse
    line = set(pg2_4.lines[0])
    extra = [p for p in range(pg2_4.v) if p not in line]
    cand = line | set(extra[:9 - len(line)])
    assert not is_unital(pg2_4, cand, 2)


def test_unital_host_check(pg2_9):
    with pytest.raises(ParameterError):
        is_unital(pg2_9, set(range(9)), 2)  # order 9 is not 2^2


def test_induced_design_params(hermitian2):
    plane, members = hermitian2
    u = Unital.from_points(plane, members, 2)
    d = induced_design(plane, u)
    assert d.v == 9 and d.k == 3
    # 2-(9,3,1): 12 blocks, every pair in exactly one
    assert len(d.blocks) == 12
    seen = {}
    for b in d.blocks:
        for i in range(3):
            for j in range(i + 1, 3):
                key = (b[i], b[j])
                assert key not in seen
                seen[key] = b
    assert len(seen) == 36


def test_tangent_secant_counts(hermitian2):
    plane, members = hermitian2
    counts = tangent_secant_counts(plane, Unital.from_points(plane, members, 2))
    assert set(counts) == set(members)
    for tangents, secants in counts.values():
        assert tangents == 1
        assert secants == 4  # q^2


def test_unital_from_points_rejects_non_unital(pg2_4):
    with pytest.raises(ContractViolationError):
        Unital.from_points(pg2_4, set(range(9)), 2)


def test_unital_size_values():
    assert unital_size(2) == 9
    assert unital_size(3) == 28
    assert unital_size(5) == 126


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_generated_planes_validate(q):
    plane = desarguesian_plane(q)
    report = validate_plane(plane.lines, q)
    assert report.ok
