import pytest

from flechains.bunches import EmbeddingSpec, identity_embedding, make_bunch
from flechains.chains import (
    AlgElement,
    FiniteChainTable,
    TableError,
    algebra_of,
    axiom_suite,
    chain_to_table,
    map_element,
    roundtrip_check,
    subalgebra_sample_report,
    table_decompose,
)
from flechains.dirsys import LABEL_I, LABEL_J, LABEL_O, Skeleton
from flechains.ogroups import (
    TRIVIAL,
    OGroupHom,
    SubgroupSpec,
    full_subgroup,
    identity_hom,
    int_lex,
    zero_hom,
)
from flechains.samples import (
    acceptance_bunches,
    j_layer,
    single_layer,
    sugihara_even,
    sugihara_odd,
    z_layer,
    z_then_trivial,
)
from support import sugihara_table

Z = int_lex(1)


def sugihara5():
    return algebra_of(sugihara_odd(2))


def test_universe_order_of_sugihara5():
    chain = sugihara5()
    universe = chain.enumerate_universe()
    assert [(e.node, e.tag) for e in universe] == [
        ("a2", "dotted"),
        ("a1", "dotted"),
        ("t", "plain"),
        ("a1", "plain"),
        ("a2", "plain"),
    ]


def test_dotted_sits_immediately_below_plain():
    chain = sugihara5()
    dotted = chain.element("a1", (), dotted=True)
    plain = chain.element("a1", ())
    assert chain.lt(dotted, plain)


def test_rho_examples():
    chain = sugihara5()
    x = chain.element("a1", (), dotted=True)
    assert chain.rho("t", x) == x
    assert chain.rho("a2", x) == chain.element("a2", ())
    two = algebra_of(z_then_trivial())
    lifted = two.rho("u", two.element("t", (7,)))
    assert lifted == two.element("u", ())


def test_mul_examples():
    odd_z = algebra_of(z_layer())
    assert odd_z.mul(odd_z.element("t", (3,)), odd_z.element("t", (5,))) == odd_z.element("t", (8,))
    chain = sugihara5()
    a = chain.element("a1", ())
    dotted_a = chain.element("a1", (), dotted=True)
    assert chain.mul(a, dotted_a) == dotted_a
    for x in chain.enumerate_universe():
        assert chain.mul(chain.unit, x) == x


def test_neg_examples():
    odd_z = algebra_of(z_layer())
    assert odd_z.neg(odd_z.element("t", (4,))) == odd_z.element("t", (-4,))
    assert odd_z.falsum == odd_z.unit

    even_j = algebra_of(j_layer())
    assert even_j.neg(even_j.element("t", (4,))) == even_j.element("t", (-5,))
    assert even_j.falsum == even_j.element("t", (-1,))

    chain = sugihara5()
    dotted_a = chain.element("a1", (), dotted=True)
    a = chain.element("a1", ())
    assert chain.neg(dotted_a) == a
    assert chain.neg(a) == dotted_a


def test_res_examples():
    odd_z = algebra_of(z_layer())
    x = odd_z.element("t", (3,))
    z = odd_z.element("t", (10,))
    assert odd_z.res(x, z) == odd_z.element("t", (7,))
    for y in (x, z, odd_z.unit):
        assert odd_z.res(odd_z.unit, y) == y

    mixed = algebra_of(z_then_trivial())
    for coords in ((0,), (5,), (-2,)):
        e = mixed.element("t", coords)
        assert mixed.res(e, e) == mixed.element("t", (0,))
    dotted_u = mixed.element("u", (), dotted=True)
    assert mixed.res(dotted_u, dotted_u) == mixed.element("u", ())


def test_rho_is_multiplication_by_the_layer_unit():
    chain = algebra_of(acceptance_bunches()["three-layer-mixed"])
    samples = chain.sample_elements(bound=3, count=60, seed=9)
    for node in chain.skeleton.nodes:
        unit_here = chain.element(node, chain.bunch.group_at(node).rank * (0,))
        for x in samples:
            assert chain.rho(node, x) == chain.mul(unit_here, x)


def test_enumerate_examples():
    assert len(algebra_of(sugihara_odd(0)).enumerate_universe()) == 1
    assert len(algebra_of(sugihara_odd(2)).enumerate_universe()) == 5
    assert algebra_of(z_layer()).enumerate_universe() is None


@pytest.mark.parametrize("size", [1, 3, 5, 7, 9])
def test_odd_all_trivial_chains_match_the_sugihara_oracle(size):
    chain = algebra_of(sugihara_odd((size - 1) // 2))
    table = chain_to_table(chain)
    assert table.mul == sugihara_table(size, table.t_index)
    assert table.t_index == (size - 1) // 2
    assert table.f_index == table.t_index


@pytest.mark.parametrize("layers", [1, 2, 3, 4])
def test_even_all_trivial_chains_match_the_sugihara_oracle(layers):
    chain = algebra_of(sugihara_even(layers))
    table = chain_to_table(chain)
    assert table.mul == sugihara_table(2 * layers, table.t_index)
    assert table.t_index == layers
    assert table.f_index == layers - 1


# -- finite tables -----------------------------------------------------------


def test_table_validation():
    with pytest.raises(ValueError):
        FiniteChainTable(size=2, mul=((0, 0), (1, 1)), t_index=1, f_index=0)  # not commutative
    with pytest.raises(ValueError):
        FiniteChainTable(size=2, mul=((1, 0), (0, 1)), t_index=1, f_index=0)  # not monotone


def test_decompose_two_element_meet_chain():
    table = FiniteChainTable(size=2, mul=((0, 0), (0, 1)), t_index=1, f_index=0)
    decomposition = table_decompose(table)
    skel = decomposition.bunch.skeleton
    assert skel.nodes == (1,)
    assert skel.labels == (LABEL_I,)
    assert decomposition.to_element[0].tag == "dotted"
    assert decomposition.to_element[1].tag == "plain"


def test_decompose_sugihara5():
    table = FiniteChainTable(size=5, mul=sugihara_table(5, 2), t_index=2, f_index=2)
    decomposition = table_decompose(table)
    skel = decomposition.bunch.skeleton
    assert skel.labels == (LABEL_O, LABEL_I, LABEL_I)
    assert all(g.is_trivial for g in decomposition.bunch.system.groups)


def test_decompose_one_element_chain():
    table = FiniteChainTable(size=1, mul=((0,),), t_index=0, f_index=0)
    decomposition = table_decompose(table)
    assert decomposition.bunch.skeleton.labels == (LABEL_O,)


def test_decompose_named_errors():
    # join on {0 < 1} with bottom unit is not residuated
    join = FiniteChainTable(size=2, mul=((0, 1), (1, 1)), t_index=0, f_index=0)
    with pytest.raises(TableError) as err:
        table_decompose(join)
    assert err.value.kind == "not-residuated"

    # three-valued minimum with top unit is residuated but not involutive
    goedel = FiniteChainTable(size=3, mul=((0, 0, 0), (0, 1, 1), (0, 1, 2)), t_index=2, f_index=0)
    with pytest.raises(TableError) as err:
        table_decompose(goedel)
    assert err.value.kind == "not-involutive"

    # three-valued bounded sum is involutive but neither odd nor even
    luka = FiniteChainTable(size=3, mul=((0, 0, 0), (0, 0, 1), (0, 1, 2)), t_index=2, f_index=0)
    with pytest.raises(TableError) as err:
        table_decompose(luka)
    assert err.value.kind == "rank"


# -- round-trip ----------------------------------------------------------------


def test_roundtrip_all_trivial_exhaustive():
    for upper in range(4):
        assert roundtrip_check(sugihara_odd(upper)).ok
    for layers in range(1, 5):
        assert roundtrip_check(sugihara_even(layers)).ok


def test_roundtrip_sampled_on_infinite_chains():
    assert roundtrip_check(z_layer(), count=80, seed=3).ok
    assert roundtrip_check(z_then_trivial(), count=80, seed=3).ok
    assert roundtrip_check(acceptance_bunches()["three-layer-mixed"], count=80, seed=3).ok


# -- axiom suite ---------------------------------------------------------------


def test_axiom_suite_passes_on_valid_bunches():
    for name, bunch in acceptance_bunches().items():
        report = axiom_suite(algebra_of(bunch), bound=4, count=150, seed=2)
        assert report.ok, (name, report.render())


def test_axiom_suite_passes_on_j_layers():
    report = axiom_suite(algebra_of(j_layer()), bound=4, count=150, seed=2)
    assert report.ok, report.render()


def test_axiom_suite_exhaustive_on_sugihara():
    chain = algebra_of(sugihara_odd(2))
    elements = chain.enumerate_universe()
    for x in elements:
        for y in elements:
            for z in elements:
                assert chain.le(chain.mul(x, y), z) == chain.le(y, chain.res(x, z))


def test_axiom_suite_reports_a_corrupted_product():
    class Corrupted(type(algebra_of(sugihara_odd(1)))):
        def mul(self, x, y):
            result = super().mul(x, y)
            if x.tag == "dotted" and y.tag == "dotted" and x.node == y.node == "a1":
                return self.unit
            return result

    chain = Corrupted(sugihara_odd(1))
    report = axiom_suite(chain, bound=2, count=200, seed=0)
    assert not report.ok
    assert any(f.code in ("AX-ASSOC", "AX-ADJ", "AX-MONO", "AX-COMM") for f in report.findings)


# -- sampled subalgebra agreement ----------------------------------------------


def test_subalgebra_sampling_matches_structural_check():
    x = z_layer()
    y = make_bunch(Skeleton(("t",), (LABEL_O,)), (int_lex(2),), ())
    witness = EmbeddingSpec((("t", "t"),), (("t", OGroupHom(Z, int_lex(2), ((1,), (0,)))),))
    assert subalgebra_sample_report(x, y, witness, count=100, seed=4).ok

    flipped = EmbeddingSpec((("t", "t"),), (("t", OGroupHom(Z, int_lex(2), ((-1,), (0,)))),))
    report = subalgebra_sample_report(x, y, flipped, count=100, seed=4)
    assert any(f.code == "B2" for f in report.findings)


def test_map_element_carries_tags():
    x = single_layer(Z, even_idem=True)
    chain = algebra_of(x)
    spec = identity_embedding(x)
    dotted = chain.element("t", (1,), dotted=True)
    assert map_element(chain, chain, spec, dotted).tag == "dotted"
