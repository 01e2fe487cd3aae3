import pytest

from flechains.dirsys import (
    LABEL_I,
    LABEL_J,
    LABEL_O,
    DirectSystem,
    Skeleton,
    ds_closure,
    ds_extend_embedding_family,
    ds_prefix_limit,
    ds_transition,
    ds_validate,
)
from flechains.intlin import identity
from flechains.ogroups import (
    TRIVIAL,
    OGroupHom,
    hom_compose,
    identity_hom,
    int_lex,
    zero_hom,
)

Z = int_lex(1)


def trivial_chain(n):
    skel = Skeleton(tuple(range(n)), (LABEL_O,) + (LABEL_I,) * (n - 1))
    return DirectSystem(skel, (TRIVIAL,) * n, tuple(zero_hom(TRIVIAL, TRIVIAL) for _ in range(n - 1)))


def test_skeleton_validation():
    with pytest.raises(ValueError):
        Skeleton(("t", "t"), (LABEL_O, LABEL_I))
    with pytest.raises(ValueError):
        Skeleton(("t", "u"), (LABEL_I, LABEL_O))  # O above the least node
    skel = Skeleton(("t", "u"), (LABEL_J, LABEL_I))
    assert skel.least == "t"
    assert skel.label_of("u") == LABEL_I


def test_validate_trivial_chain():
    assert ds_validate(trivial_chain(3)).ok


def test_validate_rejects_order_reversal():
    skel = Skeleton(("t", "u"), (LABEL_O, LABEL_I))
    system = DirectSystem(skel, (Z, Z), (OGroupHom(Z, Z, ((-1,),)),))
    report = ds_validate(system)
    assert any(f.code == "DS-ORD" for f in report.findings)


def test_validate_names_offending_triple():
    skel = Skeleton(("t", "v", "w"), (LABEL_O, LABEL_I, LABEL_I))
    steps = (identity_hom(Z), identity_hom(Z))
    bad = OGroupHom(Z, Z, ((3,),))
    system = DirectSystem(skel, (Z, Z, Z), steps, ((("t"), ("w"), bad),))
    report = ds_validate(system)
    assert any(f.code == "G1" and "'v'" in f.message for f in report.findings)


def test_transition_identity_and_composition():
    system = trivial_chain(3)
    assert ds_transition(system, 1, 1).matrix == identity(0)
    skel = Skeleton(("t", "v", "w"), (LABEL_O, LABEL_I, LABEL_I))
    doubling = OGroupHom(Z, Z, ((2,),))
    tripling = OGroupHom(Z, Z, ((3,),))
    system = DirectSystem(skel, (Z, Z, Z), (doubling, tripling))
    assert ds_transition(system, "t", "w").matrix == ((6,),)


def test_transition_into_trivial_is_zero():
    skel = Skeleton(("t", "u"), (LABEL_O, LABEL_I))
    system = DirectSystem(skel, (Z, TRIVIAL), (zero_hom(Z, TRIVIAL),))
    assert ds_transition(system, "t", "u").matrix == ()


def test_transition_downward_is_an_error():
    with pytest.raises(ValueError):
        ds_transition(trivial_chain(3), 2, 0)


def two_layer_system():
    skel = Skeleton(("t", "b"), (LABEL_O, LABEL_I))
    return DirectSystem(skel, (Z, TRIVIAL), (zero_hom(Z, TRIVIAL),))


def beta_with_middle():
    return Skeleton(("t", "a", "b"), (LABEL_O, LABEL_I, LABEL_I))


def test_prefix_limit_at_own_node():
    system = two_layer_system()
    beta = beta_with_middle()
    group, canonical = ds_prefix_limit(system, beta, "b")
    assert group == TRIVIAL
    assert canonical["t"].matrix == zero_hom(Z, TRIVIAL).matrix


def test_prefix_limit_between_nodes():
    system = two_layer_system()
    group, canonical = ds_prefix_limit(system, beta_with_middle(), "a")
    assert group == Z
    assert canonical["t"].matrix == identity(1)
    assert "b" not in canonical


def test_prefix_limit_below_everything_errors():
    system = two_layer_system()
    beta = Skeleton(("s", "t", "b"), (LABEL_O, LABEL_I, LABEL_I))
    with pytest.raises(ValueError):
        ds_prefix_limit(system, beta, "s", embed={"t": "t", "b": "b"})


def test_closure_identity():
    system = two_layer_system()
    closed = ds_closure(system, system.skeleton)
    assert closed.groups == system.groups
    assert [s.matrix for s in closed.steps] == [s.matrix for s in system.steps]


def test_closure_inserts_prefix_limits():
    system = two_layer_system()
    closed = ds_closure(system, beta_with_middle())
    assert closed.group_at("a") == Z
    assert ds_transition(closed, "t", "a").matrix == identity(1)
    assert ds_transition(closed, "a", "b").matrix == zero_hom(Z, TRIVIAL).matrix
    assert ds_validate(closed).ok


def test_closure_gap_nodes_connected_by_identity():
    system = two_layer_system()
    beta = Skeleton(("t", "a1", "a2", "b"), (LABEL_O, LABEL_I, LABEL_I, LABEL_I))
    closed = ds_closure(system, beta)
    assert ds_transition(closed, "a1", "a2").matrix == identity(1)
    assert ds_validate(closed).ok


def test_closure_is_exhaustively_coherent():
    skel = Skeleton(("t", "v"), (LABEL_O, LABEL_I))
    doubling = OGroupHom(Z, Z, ((2,),))
    system = DirectSystem(skel, (Z, Z), (doubling,))
    beta = Skeleton(("t", "m1", "v", "m2"), (LABEL_O, LABEL_I, LABEL_I, LABEL_I))
    closed = ds_closure(system, beta)
    assert ds_validate(closed).ok
    assert closed.group_at("m1") == Z
    assert closed.group_at("m2") == Z
    assert ds_transition(closed, "m1", "m2").matrix == ((2,),)


def test_extend_family_examples():
    base = Skeleton(("t", "v"), (LABEL_O, LABEL_I))
    big = Skeleton(("t", "a", "v"), (LABEL_O, LABEL_I, LABEL_I))
    source = ds_closure(DirectSystem(base, (Z, Z), (identity_hom(Z),)), big)
    doubling = OGroupHom(Z, Z, ((2,),))
    target = ds_closure(DirectSystem(base, (Z, Z), (doubling,)), big)
    iotas = {"t": identity_hom(Z), "v": OGroupHom(Z, Z, ((2,),))}
    family = ds_extend_embedding_family(source, target, iotas)
    # the new node composes the anchor's hom with the target transition; here
    # the target side inserts the prefix limit, so nothing moves yet
    assert family["a"].matrix == identity(1)
    assert family["t"] is iotas["t"]

    # keys already covering the skeleton are returned as they are
    same = ds_extend_embedding_family(source, target, dict(family))
    assert {u: h.matrix for u, h in same.items()} == {u: h.matrix for u, h in family.items()}


def test_extend_family_rejects_non_commuting_input():
    base = Skeleton(("t", "v"), (LABEL_O, LABEL_I))
    big = Skeleton(("t", "a", "v"), (LABEL_O, LABEL_I, LABEL_I))
    source = ds_closure(DirectSystem(base, (Z, Z), (identity_hom(Z),)), big)
    doubling = OGroupHom(Z, Z, ((2,),))
    target = ds_closure(DirectSystem(base, (Z, Z), (doubling,)), big)
    iotas = {"t": identity_hom(Z), "v": identity_hom(Z)}  # square does not commute
    with pytest.raises(ValueError):
        ds_extend_embedding_family(source, target, iotas)
