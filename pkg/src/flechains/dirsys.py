"""Direct systems of o-groups over finite chains.

Transitions are stored for consecutive skeleton nodes and derived by
composition, so the coherence law holds by construction; explicit
non-consecutive transitions are accepted for adversarial validation.
Finite-chain prefix limits, closures to larger chains, and induced
embedding families live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .ogroups import (
    OGroup,
    OGroupHom,
    hom_compose,
    hom_embedding_check,
    hom_order_preserving,
    identity_hom,
)
from .report import Report

LABEL_O = "O"
LABEL_J = "J"
LABEL_I = "I"
LABELS = (LABEL_O, LABEL_J, LABEL_I)


@dataclass(frozen=True)
class Skeleton:
    """A finite chain of node ids, least first, each carrying a partition label.

    The partition follows the three admissible shapes: an O label may appear
    only at the least node; every other node is labelled J or I.
    """

    nodes: tuple
    labels: tuple

    def __post_init__(self):
        nodes = tuple(self.nodes)
        labels = tuple(self.labels)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "labels", labels)
        if len(nodes) != len(labels):
            raise ValueError("one label per node")
        if not nodes:
            raise ValueError("a skeleton needs at least its least node")
        if len(set(nodes)) != len(nodes):
            raise ValueError("node ids must be distinct")
        for i, label in enumerate(labels):
            if label not in LABELS:
                raise ValueError(f"unknown label {label!r}")
            if label == LABEL_O and i != 0:
                raise ValueError("an O node can only be the least node")

    def __len__(self) -> int:
        return len(self.nodes)

    def position(self, node) -> int:
        try:
            return self.nodes.index(node)
        except ValueError:
            raise KeyError(f"unknown node {node!r}") from None

    def label_of(self, node) -> str:
        return self.labels[self.position(node)]

    @property
    def least(self):
        return self.nodes[0]

    def pairs(self):
        """All (u, v) with u strictly below v."""
        for i, u in enumerate(self.nodes):
            for v in self.nodes[i + 1 :]:
                yield u, v

    def leq(self, u, v) -> bool:
        return self.position(u) <= self.position(v)


@dataclass(frozen=True)
class DirectSystem:
    skeleton: Skeleton
    groups: tuple
    steps: tuple
    extra: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "extra", tuple(tuple(item) for item in self.extra))
        if len(self.groups) != len(self.skeleton):
            raise ValueError("one group per skeleton node")
        if len(self.steps) != max(len(self.skeleton) - 1, 0):
            raise ValueError("one transition per consecutive node pair")

    def group_at(self, node) -> OGroup:
        return self.groups[self.skeleton.position(node)]

    def explicit(self):
        return {(u, v): hom for u, v, hom in self.extra}


def ds_transition(system: DirectSystem, u, v) -> OGroupHom:
    """Transition hom from u up to v: identity, stored explicit, or composition."""
    i = system.skeleton.position(u)
    j = system.skeleton.position(v)
    if i > j:
        raise ValueError(f"no transition downward from {u!r} to {v!r}")
    if i == j:
        return identity_hom(system.groups[i])
    stored = system.explicit().get((u, v))
    if stored is not None:
        return stored
    return reduce(lambda acc, step: hom_compose(step, acc), system.steps[i:j], identity_hom(system.groups[i]))


def ds_validate(system: DirectSystem) -> Report:
    """Identity law, exhaustive composition law, and order preservation."""
    report = Report()
    skel = system.skeleton
    for i, step in enumerate(system.steps):
        u, v = skel.nodes[i], skel.nodes[i + 1]
        if step.source != system.groups[i] or step.target != system.groups[i + 1]:
            report.add("DS-SHAPE", u, f"transition {u!r}->{v!r} does not match the node groups")
            continue
        if not hom_order_preserving(step):
            report.add("DS-ORD", u, f"transition {u!r}->{v!r} is not order preserving")
    explicit = system.explicit()
    for (u, v), hom in explicit.items():
        try:
            i, j = skel.position(u), skel.position(v)
        except KeyError:
            report.add("DS-SHAPE", u, f"explicit transition references unknown nodes {u!r}->{v!r}")
            continue
        if i > j:
            report.add("DS-SHAPE", u, f"explicit transition {u!r}->{v!r} goes downward")
            continue
        if hom.source != system.groups[i] or hom.target != system.groups[j]:
            report.add("DS-SHAPE", u, f"explicit transition {u!r}->{v!r} does not match the node groups")
            continue
        if i == j and hom.matrix != identity_hom(system.groups[i]).matrix:
            report.add("G1", u, f"transition {u!r}->{u!r} must be the identity")
        if not hom_order_preserving(hom):
            report.add("DS-ORD", u, f"explicit transition {u!r}->{v!r} is not order preserving")
    if not report.ok:
        return report
    nodes = skel.nodes
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            for c in range(b + 1, len(nodes)):
                u, v, w = nodes[a], nodes[b], nodes[c]
                direct = ds_transition(system, u, w)
                routed = hom_compose(ds_transition(system, v, w), ds_transition(system, u, v))
                if direct.matrix != routed.matrix:
                    report.add(
                        "G1",
                        u,
                        f"transition {u!r}->{w!r} differs from {v!r}->{w!r} after {u!r}->{v!r}",
                    )
    return report


def _predecessor(alpha_nodes, beta: Skeleton, embed, s):
    """Greatest alpha node whose image sits at or below s in beta."""
    target_pos = beta.position(s)
    best = None
    for a in alpha_nodes:
        pos = beta.position(embed[a])
        if pos <= target_pos:
            best = a
    return best


def ds_prefix_limit(system: DirectSystem, beta: Skeleton, s, embed=None):
    """Limit of the system over the alpha prefix below a superchain node.

    On finite chains the relevant index set has a maximum p, so the limit is
    the group at p and the canonical homs are the transitions into p.
    """
    alpha = system.skeleton
    if embed is None:
        embed = {u: u for u in alpha.nodes}
    p = _predecessor(alpha.nodes, beta, embed, s)
    if p is None:
        raise ValueError(f"no system node lies at or below {s!r}")
    canonical = {}
    for u in alpha.nodes:
        if beta.position(embed[u]) <= beta.position(s):
            canonical[u] = ds_transition(system, u, p)
    return system.group_at(p), canonical


def ds_closure(system: DirectSystem, beta: Skeleton, embed=None) -> DirectSystem:
    """Extend a direct system over alpha to the superchain beta.

    Every new node receives the prefix-limit group of the alpha nodes below
    it, and transitions route through the alpha predecessors, which collapses
    the case analysis for finite chains into one predecessor rule.
    """
    alpha = system.skeleton
    if embed is None:
        embed = {u: u for u in alpha.nodes}
    if set(embed) != set(alpha.nodes):
        raise ValueError("embedding must cover every system node")
    positions = [beta.position(embed[u]) for u in alpha.nodes]
    if positions != sorted(positions) or len(set(positions)) != len(positions):
        raise ValueError("embedding must preserve the chain order")
    if beta.position(embed[alpha.least]) != 0:
        raise ValueError("the least node must stay least in the superchain")

    pred = {s: _predecessor(alpha.nodes, beta, embed, s) for s in beta.nodes}
    groups = tuple(system.group_at(pred[s]) for s in beta.nodes)
    steps = tuple(
        ds_transition(system, pred[beta.nodes[i]], pred[beta.nodes[i + 1]])
        for i in range(len(beta) - 1)
    )
    return DirectSystem(beta, groups, steps)


def ds_extend_embedding_family(closed_source: DirectSystem, closed_target: DirectSystem, iotas):
    """Extend a per-node embedding family along two systems closed over one chain.

    New nodes compose the predecessor's embedding with the target-side
    transition; the construction keeps every square commuting and every map
    an embedding, both of which are re-checked here.
    """
    skel = closed_source.skeleton
    if closed_target.skeleton != skel:
        raise ValueError("both closed systems must share the skeleton")
    iotas = dict(iotas)
    if skel.least not in iotas:
        raise ValueError("the family must cover the least node")
    for u, hom in iotas.items():
        if hom.source != closed_source.group_at(u) or hom.target != closed_target.group_at(u):
            raise ValueError(f"family hom at {u!r} does not match the closed systems")
        if not hom_embedding_check(hom):
            raise ValueError(f"family hom at {u!r} is not an embedding")
    family = {}
    anchors = [u for u in skel.nodes if u in iotas]
    for v in skel.nodes:
        if v in iotas:
            family[v] = iotas[v]
            continue
        p = None
        for a in anchors:
            if skel.position(a) <= skel.position(v):
                p = a
        family[v] = hom_compose(ds_transition(closed_target, p, v), iotas[p])
    for u, v in skel.pairs():
        left = hom_compose(family[v], ds_transition(closed_source, u, v))
        right = hom_compose(ds_transition(closed_target, u, v), family[u])
        if left.matrix != right.matrix:
            raise ValueError(f"input family does not commute over {u!r} -> {v!r}")
    return family
