"""
Matrix groups: enumeration, orbits, fixed spaces, bireflections and the related criteria.
"""
import pytest

from src.errors import CapExceeded, NotNormalError, SigmaInNError, SingularGeneratorError
from src.mechanics.gf import FieldCtx
from src.mechanics.group import (GroupElement, act, bireflection_analysis, check_bireflection_criterion, direct_sum,
                                 element_order, enumerate_group, fixed_space, index_p_bireflection_criterion, is_p_group,
                                 maximal_subgroups, min_order_p_codim, normal_subgroups_of_index_p, orbits_of_points,
                                 parse_permutation, permutation_matrix, regular_representation, subgroup_lattice)
from src.mechanics.mpoly import PolyRing

F2 = FieldCtx(2)


def permutation_matrix_element(G, cycles):
    return GroupElement(G.field, permutation_matrix(parse_permutation(cycles, G.dim)))


def _unit(n, extra):
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for r, c in extra:
        rows[r][c] = 1
    return rows


@pytest.fixture
def c4perm():
    return enumerate_group(F2, [permutation_matrix(parse_permutation("(1 2 3 4)"))], ["s"])


@pytest.fixture
def reflect7():
    mats = [_unit(7, [(4, 0)]), _unit(7, [(5, 1)]), _unit(7, [(6, 2)]), _unit(7, [(4, 3), (5, 3), (6, 3)])]
    return enumerate_group(F2, mats, ["a1", "a2", "a3", "a4"])


def test_c4_orbits(c4perm):
    assert c4perm.order == 4
    partition = orbits_of_points(c4perm)
    assert partition.num_points == 16
    assert len(partition.orbits) == 6
    assert partition.burnside_count == 6
    assert sorted(partition.sizes) == [1, 1, 2, 4, 4, 4]


def test_orbits_over_extension(c4perm):
    partition = orbits_of_points(c4perm, e=2)
    assert partition.num_points == 256
    # (256 + 4 + 16 + 4) / 4
    assert len(partition.orbits) == 70


def test_action_permutes_variables(c4perm):
    ring = PolyRing(F2, ["x1", "x2", "x3", "x4"])
    s = c4perm.generator("s")
    assert act(s, ring.parse("x1")) == ring.parse("x2")
    c2 = ring.parse("x1*x3 + x2*x4")
    assert act(s, c2) == c2


def test_element_orders(c4perm):
    s = c4perm.generator("s")
    assert element_order(s) == 4
    assert element_order(s * s) == 2
    assert is_p_group(c4perm)


def test_singular_generator_and_cap():
    with pytest.raises(SingularGeneratorError):
        enumerate_group(F2, [[[1, 1], [1, 1]]])
    with pytest.raises(CapExceeded):
        enumerate_group(FieldCtx(7), [[[3, 0], [0, 1]], [[1, 1], [0, 1]]], cap=10)


def test_reflection_example(reflect7):
    assert reflect7.order == 16
    for name in ("a1", "a2", "a3", "a4"):
        assert fixed_space(reflect7.generator(name)).codim == 1
    report = bireflection_analysis(reflect7)
    assert report.generated_by_reflections
    assert report.generated_by_bireflections
    assert not report.no_cm_separating_algebra


def test_bireflection_criterion(reflect7):
    N = reflect7.subgroup([reflect7.generator(n) for n in ("a1", "a2", "a3")], ["a1", "a2", "a3"])
    sigma = reflect7.generator("a1") * reflect7.generator("a2") * reflect7.generator("a3") * reflect7.generator("a4")
    assert check_bireflection_criterion(reflect7, N, sigma)
    with pytest.raises(SigmaInNError):
        check_bireflection_criterion(reflect7, N, reflect7.generator("a1"))
    assert not index_p_bireflection_criterion(reflect7, N)


def test_not_normal():
    S3 = enumerate_group(F2, [permutation_matrix(parse_permutation("(1 2 3)")),
                              permutation_matrix(parse_permutation("(1 2)", 3))])
    H = S3.subgroup([permutation_matrix_element(S3, "(1 2)")])
    with pytest.raises(NotNormalError):
        index_p_bireflection_criterion(S3, H)


def test_index_p_criterion_c4(c4perm):
    normals = normal_subgroups_of_index_p(c4perm)
    assert [N.order for N in normals] == [2]
    # s^2 is the only bireflection
    assert index_p_bireflection_criterion(c4perm, normals[0])
    assert min_order_p_codim(c4perm) == 2


def test_subgroups_of_klein_four():
    sigma = [[1, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    tau = [[1, 0, 0, 1, 0], [0, 1, 0, 0, 1], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    G = enumerate_group(F2, [sigma, tau], ["sigma", "tau"])
    assert G.order == 4
    assert [H.order for H in subgroup_lattice(G)] == [1, 2, 2, 2, 4]
    assert len(maximal_subgroups(G)) == 3
    assert bireflection_analysis(G).generated_by_bireflections
    assert len(orbits_of_points(G).orbits) == 14


def test_direct_sum_and_regular_representation():
    G = enumerate_group(F2, [[[1, 0], [1, 1]]], ["s"])
    G3 = direct_sum(G, 3)
    assert (G3.dim, G3.order) == (6, 2)
    assert len(orbits_of_points(G3).orbits) == 36

    R = regular_representation(FieldCtx(3), [parse_permutation("(1 2 3)")], ["s"])
    assert (R.dim, R.order) == (3, 3)
    assert min_order_p_codim(R) == 2
