import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from flechains.intlin import identity, mat, mat_rank
from flechains.ogroups import (
    DOWN,
    TRIVIAL,
    UP,
    OGroupHom,
    OrderSearchFailure,
    SubgroupSpec,
    atom,
    box_elements,
    cone_compatibility_sample,
    full_subgroup,
    group_pushout,
    hom_apply,
    hom_compose,
    hom_embedding_check,
    hom_order_preserving,
    identity_hom,
    int_lex,
    lex_group,
    og_add,
    og_compare,
    og_cover,
    og_is_discrete,
    og_neg,
    og_sample,
    og_unit,
    order_extension_search,
    rat_lex,
    subgroup_contains,
    trivial_subgroup,
    zero_hom,
)
from support import brute_order_preserving, int_rank

Z = int_lex(1)
Z2 = int_lex(2)


# -- arithmetic and comparison ------------------------------------------------


def test_arithmetic_examples():
    assert og_add(Z2, (1, 2), (3, -1)) == (4, 1)
    assert og_neg(Z2, (2, -3)) == (-2, 3)
    assert og_unit(TRIVIAL) == ()


def test_arith_dimension_mismatch():
    with pytest.raises(ValueError):
        og_add(Z2, (1,), (2, 3))


def test_compare_examples():
    assert og_compare(Z2, (1, -5), (0, 100)) == 1
    assert og_compare(Z2, (3, 4), (3, 4)) == 0
    skew = int_lex(2, ((1, 1), (0, 1)))
    assert og_compare(skew, (1, -1), (0, 0)) == -1


def test_cover_examples():
    assert og_cover(Z2, (0, 0), UP) == (0, 1)
    assert og_cover(TRIVIAL, (), UP) == ()
    q = rat_lex(1)
    assert og_cover(q, (Fraction(1, 2),), DOWN) == (Fraction(1, 2),)


def test_cover_laws():
    up = og_cover(Z2, og_unit(Z2), UP)
    down = og_cover(Z2, og_unit(Z2), DOWN)
    assert up == og_neg(Z2, down)
    # the up cover is the least box element strictly above the unit
    above = [x for x in box_elements(Z2, 3) if og_compare(Z2, x, og_unit(Z2)) > 0]
    least = min(above, key=lambda x: sum(1 for y in above if og_compare(Z2, y, x) < 0))
    assert least == up


def test_atom_of_skew_order():
    skew = int_lex(2, ((1, 1), (0, 1)))
    a = atom(skew)
    # kernel of the first functional, positively oriented by the second
    assert a[0] + a[1] == 0 and a[1] > 0
    assert a == (-1, 1)


def test_is_discrete():
    assert og_is_discrete(Z)
    assert not og_is_discrete(TRIVIAL)
    assert not og_is_discrete(rat_lex(1))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
    st.lists(st.integers(-4, 4), min_size=2, max_size=2),
    st.lists(st.integers(-4, 4), min_size=2, max_size=2),
    st.lists(st.integers(-4, 4), min_size=2, max_size=2),
)
def test_total_order_properties(f_rows, xs, ys, zs):
    assume(mat_rank(mat(f_rows)) == 2)
    group = int_lex(2, f_rows)
    x, y, z = tuple(xs), tuple(ys), tuple(zs)
    # exactly one of <, =, > holds
    assert og_compare(group, x, y) == -og_compare(group, y, x)
    assert (og_compare(group, x, y) == 0) == (x == y)
    # transitivity and translation invariance
    if og_compare(group, x, y) <= 0 and og_compare(group, y, z) <= 0:
        assert og_compare(group, x, z) <= 0
    assert og_compare(group, x, y) == og_compare(group, og_add(group, x, z), og_add(group, y, z))


# -- homs ---------------------------------------------------------------------


def test_hom_apply_examples():
    column = OGroupHom(Z, Z2, ((1,), (0,)))
    assert hom_apply(column, (3,)) == (3, 0)
    assert hom_apply(zero_hom(Z2, Z2), (5, -7)) == (0, 0)
    dot = OGroupHom(Z2, Z, ((2, 1),))
    assert hom_apply(dot, (1, 1)) == (3,)


def test_hom_lattice_guard():
    with pytest.raises(ValueError):
        OGroupHom(Z, Z, ((Fraction(1, 2),),))
    with pytest.raises(ValueError):
        OGroupHom(rat_lex(1), Z, ((1,),))
    OGroupHom(rat_lex(1), Z, ((0,),))  # the zero hom is fine


def test_order_preserving_examples():
    assert hom_order_preserving(OGroupHom(Z, Z2, ((1,), (0,))))
    swapped = int_lex(2, ((0, 1), (1, 0)))
    assert not hom_order_preserving(OGroupHom(Z2, swapped, identity(2)))
    assert hom_order_preserving(zero_hom(Z2, Z2))


def test_embedding_examples():
    assert hom_embedding_check(OGroupHom(Z, Z2, ((1,), (0,))))
    assert not hom_embedding_check(zero_hom(Z, Z))
    assert hom_embedding_check(OGroupHom(Z, Z, ((2,),)))


def test_compose_examples():
    h = OGroupHom(Z, Z2, ((1,), (0,)))
    assert hom_compose(identity_hom(Z2), h).matrix == h.matrix
    assert hom_compose(zero_hom(Z2, Z), h).matrix == ((0,),)
    p = OGroupHom(Z2, Z, ((1, 0),))
    assert hom_compose(p, h).matrix == identity(1)


def test_compose_lattice_mismatch():
    h = OGroupHom(Z, Z2, ((1,), (0,)))
    with pytest.raises(ValueError):
        hom_compose(h, h)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
def test_criterion_matches_brute_force_on_plain_lex(source_rank, target_rank, data):
    matrix = tuple(
        tuple(data.draw(st.integers(-3, 3)) for _ in range(source_rank)) for _ in range(target_rank)
    )
    hom = OGroupHom(int_lex(source_rank), int_lex(target_rank), matrix)
    claimed = hom_order_preserving(hom)
    observed = brute_order_preserving(
        matrix, tuple(identity(source_rank)), tuple(identity(target_rank)), source_rank, target_rank, 5
    )
    assert claimed == observed


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_criterion_sound_for_general_functionals(data):
    rank = data.draw(st.integers(1, 3))
    f_rows = tuple(tuple(data.draw(st.integers(-2, 2)) for _ in range(rank)) for _ in range(rank))
    assume(mat_rank(mat(f_rows)) == rank)
    matrix = tuple(tuple(data.draw(st.integers(-2, 2)) for _ in range(rank)) for _ in range(rank))
    group = int_lex(rank, f_rows)
    hom = OGroupHom(group, group, matrix)
    if hom_order_preserving(hom):
        ints = tuple(tuple(int(x) for x in row) for row in f_rows)
        assert brute_order_preserving(matrix, ints, ints, rank, rank, 4)


# -- subgroups ----------------------------------------------------------------


def test_subgroup_examples():
    spec = SubgroupSpec(((2,), (0,)))
    assert subgroup_contains(Z2, spec, (4, 0))
    assert not subgroup_contains(Z2, spec, (1, 0))
    assert subgroup_contains(Z2, trivial_subgroup(Z2), (0, 0))
    assert not subgroup_contains(Z2, trivial_subgroup(Z2), (1, 0))


def test_subgroup_rational_span():
    q2 = rat_lex(2)
    spec = SubgroupSpec(((2,), (0,)))
    assert subgroup_contains(q2, spec, (Fraction(1, 3), Fraction(0)))
    assert not subgroup_contains(q2, spec, (0, 1))


def test_subgroup_basis_validation():
    with pytest.raises(ValueError):
        SubgroupSpec(((1, 2), (1, 2)))  # dependent columns
    with pytest.raises(ValueError):
        SubgroupSpec(((Fraction(1, 2),),))


# -- pushouts -----------------------------------------------------------------


def test_pushout_corner_example():
    column = OGroupHom(Z, Z2, ((1,), (0,)))
    push = group_pushout(column, column)
    assert push.rank == 3
    assert int_rank(push.j1, 3, 2) == 2
    assert int_rank(push.j2, 3, 2) == 2
    # the two routes from the shared generator agree
    j1_img = tuple(push.j1[r][0] for r in range(3))
    j2_img = tuple(push.j2[r][0] for r in range(3))
    assert j1_img == j2_img


def test_pushout_identity_example():
    push = group_pushout(identity_hom(Z), identity_hom(Z))
    assert push.rank == 1
    assert push.j1 == push.j2
    assert abs(push.j1[0][0]) == 1


def test_pushout_doubling_example():
    doubling = OGroupHom(Z, Z, ((2,),))
    push = group_pushout(doubling, doubling)
    assert push.rank == 1
    assert push.j1 == push.j2
    assert abs(push.j1[0][0]) == 1
    # the identified generator does not come from the shared copy
    from flechains.intlin import solve_integer

    y = (push.j1[0][0],)
    assert solve_integer(((2,),), y) is None


def test_pushout_rejects_non_embeddings():
    with pytest.raises(ValueError):
        group_pushout(zero_hom(Z, Z), identity_hom(Z))
    with pytest.raises(ValueError):
        group_pushout(identity_hom(Z), identity_hom(Z2))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_pushout_properties_random(data):
    g = data.draw(st.integers(0, 2))
    k = data.draw(st.integers(max(g, 1), 3))
    m = data.draw(st.integers(max(g, 1), 3))
    source = TRIVIAL if g == 0 else int_lex(g)

    def embedding_into(rank):
        for _ in range(60):
            rows = tuple(tuple(data.draw(st.integers(-2, 2)) for _ in range(g)) for _ in range(rank))
            try:
                hom = OGroupHom(source, int_lex(rank), rows)
            except ValueError:
                continue
            if hom_embedding_check(hom):
                return hom
        return zero_hom(source, int_lex(rank)) if g == 0 else None

    iota1 = embedding_into(k)
    iota2 = embedding_into(m)
    assume(iota1 is not None and iota2 is not None)
    push = group_pushout(iota1, iota2)
    assert push.rank == k + m - g
    assert int_rank(push.j1, push.rank, k) == k
    assert int_rank(push.j2, push.rank, m) == m
    for col in range(g):
        left = tuple(
            sum(push.j1[r][i] * int(iota1.matrix[i][col]) for i in range(k)) for r in range(push.rank)
        )
        right = tuple(
            sum(push.j2[r][i] * int(iota2.matrix[i][col]) for i in range(m)) for r in range(push.rank)
        )
        assert left == right


# -- order search -------------------------------------------------------------


def test_order_search_no_constraints_gives_identity():
    assert order_extension_search(2, ()) == identity(2)


def test_order_search_contradiction_fails():
    cons = (OGroupHom(Z, Z, ((1,),)), OGroupHom(Z, Z, ((-1,),)))
    result = order_extension_search(1, cons)
    assert isinstance(result, OrderSearchFailure)
    assert result.constraint_count == 2


def test_order_search_on_corner_pushout():
    column = OGroupHom(Z, Z2, ((1,), (0,)))
    push = group_pushout(column, column)
    placeholder = int_lex(3)
    cons = (
        OGroupHom(Z2, placeholder, mat(push.j1)),
        OGroupHom(Z2, placeholder, mat(push.j2)),
    )
    result = order_extension_search(3, cons)
    assert not isinstance(result, OrderSearchFailure)
    # soundness: both constraints hold under the returned order
    target = int_lex(3, result)
    assert hom_order_preserving(OGroupHom(Z2, target, mat(push.j1)))
    assert hom_order_preserving(OGroupHom(Z2, target, mat(push.j2)))


def test_order_search_positive_cone_laws():
    # a returned order is a genuine group order on samples
    column = OGroupHom(Z, Z2, ((1,), (0,)))
    push = group_pushout(column, column)
    placeholder = int_lex(3)
    cons = (OGroupHom(Z2, placeholder, mat(push.j1)), OGroupHom(Z2, placeholder, mat(push.j2)))
    f = order_extension_search(3, cons)
    group = int_lex(3, f)
    unit = og_unit(group)
    elements = og_sample(group, 3, 25, seed=5)
    for x in elements:
        for y in elements:
            if og_compare(group, x, unit) >= 0 and og_compare(group, y, unit) >= 0:
                assert og_compare(group, og_add(group, x, y), unit) >= 0
            if og_compare(group, x, unit) >= 0 and og_compare(group, og_neg(group, x), unit) >= 0:
                assert x == unit


# -- cone compatibility and sampling ------------------------------------------


def test_cone_compatibility_examples():
    axis1 = OGroupHom(Z, Z2, ((1,), (0,)))
    axis2 = OGroupHom(Z, Z2, ((0,), (1,)))
    assert cone_compatibility_sample(axis1, axis2, 5)
    assert not cone_compatibility_sample(identity_hom(Z), OGroupHom(Z, Z, ((-1,),)), 5)
    assert cone_compatibility_sample(axis1, axis1, 5)


def test_og_sample_examples():
    assert og_sample(TRIVIAL, 4, 5, 1) == [()]
    assert og_sample(Z2, 0, 5, 1) == [(0, 0)]
    a = og_sample(Z2, 2, 5, 7)
    b = og_sample(Z2, 2, 5, 7)
    assert a == b and len(a) == 5
    assert a[0] == (0, 0)
    assert all(all(-2 <= c <= 2 for c in x) for x in a)


def test_og_sample_rational_bounds():
    q = rat_lex(2)
    for x in og_sample(q, 3, 10, 2):
        assert all(abs(c) <= 3 for c in x)
