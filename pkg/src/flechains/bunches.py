"""Bunches of layer groups: the group-side representation of involutive chains.

A bunch is a direct system over a partitioned skeleton plus a layer subgroup
for every I node.  Validation covers the partition shape, the direct-system
laws, discreteness at J nodes, the kernel condition for J-node transitions,
and subgroup absorption at I nodes.  Sub-bunch and embedding checks translate
the algebra-side notions to finite certificates on generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dirsys import LABEL_I, LABEL_J, LABEL_O, DirectSystem, Skeleton, ds_transition, ds_validate
from .ogroups import (
    OGroup,
    OGroupHom,
    SubgroupSpec,
    atom,
    hom_apply,
    hom_compose,
    hom_embedding_check,
    identity_hom,
    og_is_discrete,
    og_unit,
    subgroup_contains,
    subgroup_rank_matches,
)
from .report import Report

RANK_ODD = "odd"
RANK_EVEN_NONIDEM = "even-nonidem-f"
RANK_EVEN_IDEM = "even-idem-f"

_LEAST_LABEL_TO_RANK = {LABEL_O: RANK_ODD, LABEL_J: RANK_EVEN_NONIDEM, LABEL_I: RANK_EVEN_IDEM}


@dataclass(frozen=True)
class Bunch:
    system: DirectSystem
    subgroups: tuple

    def __post_init__(self):
        object.__setattr__(self, "subgroups", tuple(tuple(item) for item in self.subgroups))

    @property
    def skeleton(self) -> Skeleton:
        return self.system.skeleton

    def group_at(self, node) -> OGroup:
        return self.system.group_at(node)

    def subgroup_map(self) -> dict:
        return {node: spec for node, spec in self.subgroups}

    def subgroup_at(self, node) -> SubgroupSpec:
        return self.subgroup_map()[node]


def make_bunch(skeleton: Skeleton, groups, steps, subgroups=None, extra=()) -> Bunch:
    system = DirectSystem(skeleton, tuple(groups), tuple(steps), tuple(extra))
    subgroups = dict(subgroups or {})
    ordered = tuple((node, subgroups[node]) for node in skeleton.nodes if node in subgroups)
    return Bunch(system, ordered)


def bunch_validate(bunch: Bunch) -> Report:
    """Full well-formedness report for a bunch of layer groups."""
    report = Report()
    skel = bunch.skeleton
    system = bunch.system
    report.merge(ds_validate(system))

    submap = bunch.subgroup_map()
    for node in skel.nodes:
        label = skel.label_of(node)
        if label == LABEL_I and node not in submap:
            report.add("H-SPEC", node, "I node is missing its layer subgroup")
        if label != LABEL_I and node in submap:
            report.add("H-SPEC", node, "only I nodes carry a layer subgroup")
    for node, spec in submap.items():
        try:
            group = bunch.group_at(node)
        except KeyError:
            report.add("H-SPEC", node, "subgroup attached to an unknown node")
            continue
        if not subgroup_rank_matches(group, spec):
            report.add("H-SPEC", node, "subgroup basis does not match the layer rank")

    for node in skel.nodes:
        if skel.label_of(node) == LABEL_J and not og_is_discrete(bunch.group_at(node)):
            report.add("J-DISC", node, "J layers must be discretely ordered")

    if not report.ok:
        return report

    # (G2): for a J node, the atom generates the kernel of every outgoing transition.
    for u in skel.nodes:
        if skel.label_of(u) != LABEL_J:
            continue
        step_atom = atom(bunch.group_at(u))
        for v in skel.nodes:
            if skel.position(v) <= skel.position(u):
                continue
            image = hom_apply(ds_transition(system, u, v), step_atom)
            if any(image):
                report.add("G2", u, f"transition {u!r}->{v!r} does not collapse the unit covers")

    # (G3): transitions into an I node land in its subgroup; checked on generators.
    for v in skel.nodes:
        if skel.label_of(v) != LABEL_I:
            continue
        target = bunch.group_at(v)
        spec = submap[v]
        for u in skel.nodes:
            if skel.position(u) >= skel.position(v):
                continue
            hom = ds_transition(system, u, v)
            for k in range(hom.source.rank):
                gen = tuple(int(i == k) for i in range(hom.source.rank))
                if not subgroup_contains(target, spec, hom_apply(hom, gen)):
                    report.add("G3", v, f"transition {u!r}->{v!r} leaves the layer subgroup")
                    break
    return report


@dataclass(frozen=True)
class Classification:
    rank: str
    symm: bool


def bunch_classify(bunch: Bunch) -> Classification:
    """Rank class from the least node's label; symm iff no J node exists."""
    skel = bunch.skeleton
    rank = _LEAST_LABEL_TO_RANK[skel.label_of(skel.least)]
    symm = all(label != LABEL_J for label in skel.labels)
    return Classification(rank=rank, symm=symm)


# ---------------------------------------------------------------------------
# Embedding specifications


@dataclass(frozen=True)
class EmbeddingSpec:
    """A skeleton map plus one layer hom per source node."""

    node_map: tuple
    layer_homs: tuple

    def __post_init__(self):
        object.__setattr__(self, "node_map", tuple(tuple(p) for p in self.node_map))
        object.__setattr__(self, "layer_homs", tuple(tuple(p) for p in self.layer_homs))

    def map_node(self, node):
        for a, b in self.node_map:
            if a == node:
                return b
        raise KeyError(f"node {node!r} is not mapped")

    def hom_at(self, node) -> OGroupHom:
        for a, hom in self.layer_homs:
            if a == node:
                return hom
        raise KeyError(f"node {node!r} has no layer hom")


def identity_embedding(source: Bunch, target: Bunch | None = None) -> EmbeddingSpec:
    """Identity-on-ids spec; layer homs are identities into the target's groups."""
    target = target or source
    node_map = tuple((u, u) for u in source.skeleton.nodes)
    homs = []
    for u in source.skeleton.nodes:
        g = source.group_at(u)
        h = target.group_at(u)
        if g != h:
            raise ValueError(f"no identity inclusion at {u!r}: layer groups differ")
        homs.append((u, identity_hom(g)))
    return EmbeddingSpec(node_map, tuple(homs))


def compose_embeddings(outer: EmbeddingSpec, inner: EmbeddingSpec) -> EmbeddingSpec:
    node_map = tuple((u, outer.map_node(v)) for u, v in inner.node_map)
    homs = tuple((u, hom_compose(outer.hom_at(inner.map_node(u)), inner.hom_at(u))) for u, _ in inner.node_map)
    return EmbeddingSpec(node_map, homs)


def _layer_checks(x: Bunch, y: Bunch, spec: EmbeddingSpec, report: Report, codes) -> None:
    """Shared per-layer conditions for sub-bunch and embedding reports."""
    xs, ys = x.skeleton, y.skeleton
    for u in xs.nodes:
        try:
            v = spec.map_node(u)
            hom = spec.hom_at(u)
        except KeyError as exc:
            report.add(codes["layer"], u, str(exc))
            continue
        if hom.source != x.group_at(u) or hom.target != y.group_at(v):
            report.add(codes["layer"], u, "layer hom does not match the layer groups")
            continue
        if not hom_embedding_check(hom):
            report.add(codes["layer"], u, "layer map is not an o-group embedding")
            continue
        label = xs.label_of(u)
        if label == LABEL_I:
            x_sub = x.subgroup_map().get(u)
            y_sub = y.subgroup_map().get(v)
            if x_sub is None or y_sub is None:
                report.add(codes["layer"], u, "missing layer subgroup data")
                continue
            for gen in x_sub.generators():
                if not subgroup_contains(y.group_at(v), y_sub, hom_apply(hom, gen)):
                    report.add(codes["subgroup"], u, "layer subgroup is not carried into the target subgroup")
                    break
        if label == LABEL_J:
            gx, gy = x.group_at(u), y.group_at(v)
            if not (og_is_discrete(gx) and og_is_discrete(gy)):
                report.add(codes["layer"], u, "J layers must be discrete on both sides")
            elif hom_apply(hom, atom(gx)) != atom(gy):
                report.add(codes["cover"], u, "unit cover is not preserved")
    for u, v in xs.pairs():
        try:
            left = hom_compose(spec.hom_at(v), ds_transition(x.system, u, v))
            right = hom_compose(
                ds_transition(y.system, spec.map_node(u), spec.map_node(v)), spec.hom_at(u)
            )
        except KeyError:
            continue
        if left.matrix != right.matrix:
            report.add(codes["square"], u, f"square over {u!r} -> {v!r} does not commute")


def subbunch_check(x: Bunch, y: Bunch, witness: EmbeddingSpec | None = None) -> Report:
    """Sub-bunch conditions, with layer inclusions made explicit by a witness.

    Node ids are shared (the node injection is the identity); the witness
    defaults to identity layer homs, which covers literal sub-systems.
    """
    report = Report()
    xs, ys = x.skeleton, y.skeleton
    if witness is None:
        node_map = tuple((u, u) for u in xs.nodes)
        homs = []
        for u in xs.nodes:
            try:
                ys.position(u)
            except KeyError:
                continue
            if x.group_at(u) == y.group_at(u):
                homs.append((u, identity_hom(x.group_at(u))))
        witness = EmbeddingSpec(node_map, tuple(homs))
    for u, v in witness.node_map:
        if u != v:
            raise ValueError("sub-bunch node injection must be the identity on shared ids")

    if xs.least != ys.least:
        report.add("S1", xs.least, f"least nodes differ: {xs.least!r} vs {ys.least!r}")
    missing = False
    for u in xs.nodes:
        try:
            ys.position(u)
        except KeyError:
            report.add("S2", u, "node is absent from the larger skeleton")
            missing = True
    if missing:
        return report
    positions = [ys.position(u) for u in xs.nodes]
    if positions != sorted(positions):
        report.add("S2", xs.least, "skeleton order is not the restriction of the larger one")
    for u in xs.nodes:
        if xs.label_of(u) != ys.label_of(u):
            report.add("S2", u, f"label {xs.label_of(u)} vs {ys.label_of(u)}")
    if not report.ok:
        return report
    _layer_checks(x, y, witness, report, {"layer": "S3", "subgroup": "S3", "cover": "S3", "square": "S4"})
    return report


def embedding_check(x: Bunch, y: Bunch, spec: EmbeddingSpec) -> Report:
    """Bunch-level embedding conditions for an explicit spec."""
    report = Report()
    xs, ys = x.skeleton, y.skeleton
    mapped = []
    for u in xs.nodes:
        try:
            v = spec.map_node(u)
        except KeyError:
            report.add("E1", u, "node is not mapped")
            continue
        try:
            ys.position(v)
        except KeyError:
            report.add("E1", u, f"image node {v!r} is not in the target skeleton")
            continue
        mapped.append((u, v))
    if len(mapped) != len(xs.nodes):
        return report
    images = [ys.position(v) for _, v in mapped]
    if len(set(images)) != len(images):
        report.add("E1", xs.least, "node map is not injective")
    if images != sorted(images):
        report.add("E1", xs.least, "node map is not order preserving")
    if spec.map_node(xs.least) != ys.least:
        report.add("E1", xs.least, "least node is not preserved")
    for u, v in mapped:
        if xs.label_of(u) != ys.label_of(v):
            report.add("E1", u, f"partition label changes: {xs.label_of(u)} -> {ys.label_of(v)}")
    if not report.ok:
        return report
    _layer_checks(x, y, spec, report, {"layer": "E2", "subgroup": "E2-H", "cover": "E2-COVER", "square": "E2-SQ"})
    return report
