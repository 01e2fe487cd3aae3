"""Builders for standard chains, bunches, and formations used in tests and demos."""

from __future__ import annotations

from .amalgam import VFormation
from .bunches import Bunch, EmbeddingSpec, identity_embedding, make_bunch
from .dirsys import LABEL_I, LABEL_J, LABEL_O, Skeleton
from .ogroups import (
    TRIVIAL,
    OGroupHom,
    SubgroupSpec,
    full_subgroup,
    identity_hom,
    int_lex,
    zero_hom,
)


def sugihara_odd(upper_layers: int) -> Bunch:
    """Odd all-trivial bunch: an O least node and the given number of I nodes."""
    nodes = ("t",) + tuple(f"a{i}" for i in range(1, upper_layers + 1))
    labels = (LABEL_O,) + (LABEL_I,) * upper_layers
    skeleton = Skeleton(nodes, labels)
    groups = tuple(TRIVIAL for _ in nodes)
    steps = tuple(zero_hom(TRIVIAL, TRIVIAL) for _ in nodes[1:])
    subgroups = {node: SubgroupSpec(()) for node in nodes[1:]}
    return make_bunch(skeleton, groups, steps, subgroups)


def sugihara_even(layers: int) -> Bunch:
    """Even all-trivial bunch with an idempotent falsum: every node is an I node."""
    nodes = tuple(f"a{i}" for i in range(layers))
    skeleton = Skeleton(nodes, (LABEL_I,) * layers)
    groups = tuple(TRIVIAL for _ in nodes)
    steps = tuple(zero_hom(TRIVIAL, TRIVIAL) for _ in nodes[1:])
    subgroups = {node: SubgroupSpec(()) for node in nodes}
    return make_bunch(skeleton, groups, steps, subgroups)


def single_layer(group, even_idem: bool = False) -> Bunch:
    """One-node bunch over the given group: odd, or even with idempotent falsum."""
    label = LABEL_I if even_idem else LABEL_O
    skeleton = Skeleton(("t",), (label,))
    subgroups = {"t": full_subgroup(group)} if even_idem else {}
    return make_bunch(skeleton, (group,), (), subgroups)


def z_layer() -> Bunch:
    return single_layer(int_lex(1))


def z2_layer(functionals=None) -> Bunch:
    return single_layer(int_lex(2, functionals))


def j_layer() -> Bunch:
    """Even bunch with a non-idempotent falsum: a single discrete J node."""
    skeleton = Skeleton(("t",), (LABEL_J,))
    return make_bunch(skeleton, (int_lex(1),), ())


def z_then_trivial() -> Bunch:
    """Two layers: the integers at the bottom, a trivial I node above, zero step."""
    skeleton = Skeleton(("t", "u"), (LABEL_O, LABEL_I))
    groups = (int_lex(1), TRIVIAL)
    steps = (zero_hom(int_lex(1), TRIVIAL),)
    return make_bunch(skeleton, groups, steps, {"u": SubgroupSpec(())})


def mixed_three_layer() -> Bunch:
    """Integers, then integers with full subgroup via the identity, then trivial."""
    z = int_lex(1)
    skeleton = Skeleton(("t", "a", "b"), (LABEL_O, LABEL_I, LABEL_I))
    groups = (z, z, TRIVIAL)
    steps = (identity_hom(z), zero_hom(z, TRIVIAL))
    subgroups = {"a": full_subgroup(z), "b": SubgroupSpec(())}
    return make_bunch(skeleton, groups, steps, subgroups)


def acceptance_bunches() -> dict:
    """The six bunch shapes exercised by the acceptance axiom sweep."""
    return {
        "odd-all-trivial": sugihara_odd(2),
        "even-idem-all-trivial": sugihara_even(2),
        "odd-one-z-layer": z_layer(),
        "odd-z2-lex-layer": z2_layer(((1, 1), (0, 1))),
        "z-then-trivial-i": z_then_trivial(),
        "three-layer-mixed": mixed_three_layer(),
    }


def identity_formation(bunch: Bunch) -> VFormation:
    spec = identity_embedding(bunch)
    return VFormation(x=bunch, y=bunch, z=bunch, iota1=spec, iota2=spec)


def sugihara_formation() -> VFormation:
    """Three odd all-trivial chains sharing their two lowest nodes."""
    x = sugihara_odd(1)
    y_nodes = ("t", "a1", "b")
    z_nodes = ("t", "a1", "c")
    y = make_bunch(
        Skeleton(y_nodes, (LABEL_O, LABEL_I, LABEL_I)),
        (TRIVIAL,) * 3,
        (zero_hom(TRIVIAL, TRIVIAL),) * 2,
        {n: SubgroupSpec(()) for n in y_nodes[1:]},
    )
    z = make_bunch(
        Skeleton(z_nodes, (LABEL_O, LABEL_I, LABEL_I)),
        (TRIVIAL,) * 3,
        (zero_hom(TRIVIAL, TRIVIAL),) * 2,
        {n: SubgroupSpec(()) for n in z_nodes[1:]},
    )
    node_map = (("t", "t"), ("a1", "a1"))
    homs = (("t", zero_hom(TRIVIAL, TRIVIAL)), ("a1", zero_hom(TRIVIAL, TRIVIAL)))
    spec = EmbeddingSpec(node_map, homs)
    return VFormation(x=x, y=y, z=z, iota1=spec, iota2=spec)


def corner_formation() -> VFormation:
    """The integers embedded as the first axis of two planes."""
    x = z_layer()
    y = z2_layer()
    z = z2_layer()
    column = OGroupHom(int_lex(1), int_lex(2), ((1,), (0,)))
    spec = EmbeddingSpec((("t", "t"),), (("t", column),))
    return VFormation(x=x, y=y, z=z, iota1=spec, iota2=spec)


def mixed_formation() -> VFormation:
    """Two-node symm formation mixing trivial and integer layers, zero transition."""
    x = z_then_trivial()
    y_groups = (int_lex(2), TRIVIAL)
    y = make_bunch(
        Skeleton(("t", "u"), (LABEL_O, LABEL_I)),
        y_groups,
        (zero_hom(int_lex(2), TRIVIAL),),
        {"u": SubgroupSpec(())},
    )
    column = OGroupHom(int_lex(1), int_lex(2), ((1,), (0,)))
    into_y = EmbeddingSpec((("t", "t"), ("u", "u")), (("t", column), ("u", zero_hom(TRIVIAL, TRIVIAL))))
    into_z = identity_embedding(x)
    return VFormation(x=x, y=y, z=x, iota1=into_y, iota2=into_z)


def doubling_formation() -> VFormation:
    """Even two-node chains whose shared integer layer embeds by doubling."""
    z = int_lex(1)
    skeleton = Skeleton((0, 1), (LABEL_I, LABEL_I))
    bunch = make_bunch(
        skeleton,
        (TRIVIAL, z),
        (zero_hom(TRIVIAL, z),),
        {0: SubgroupSpec(()), 1: full_subgroup(z)},
    )
    doubling = OGroupHom(z, z, ((2,),))
    spec = EmbeddingSpec(((0, 0), (1, 1)), ((0, zero_hom(TRIVIAL, TRIVIAL)), (1, doubling)))
    return VFormation(x=bunch, y=bunch, z=bunch, iota1=spec, iota2=spec)
