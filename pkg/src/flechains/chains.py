"""Involutive residuated chains built from bunches of layer groups.

The universe is the disjoint union of the layers; an I layer contributes an
extra dotted copy of its subgroup sitting immediately below the plain copy.
Multiplication lifts both operands to the higher layer and applies the
three-case layer product; the residual complement splits into four cases by
layer label and subgroup membership, and the residual is its derived form.

Also here: enumeration of finite all-trivial chains, decomposition of finite
operation tables back into bunches, the round-trip check between the two
directions, and the sampled axiom suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bunches import Bunch, EmbeddingSpec, bunch_classify, make_bunch
from .dirsys import LABEL_I, LABEL_J, LABEL_O, Skeleton, ds_transition
from .ogroups import (
    DOWN,
    TRIVIAL,
    SubgroupSpec,
    hom_apply,
    og_add,
    og_compare,
    og_coerce,
    og_cover,
    og_neg,
    og_sample,
    og_unit,
    subgroup_contains,
    subgroup_sample,
    zero_hom,
)
from .report import Report

TAG_PLAIN = "plain"
TAG_DOTTED = "dotted"


@dataclass(frozen=True)
class AlgElement:
    """A chain element: a node, a plain/dotted tag, and layer coordinates."""

    node: object
    tag: str
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if self.tag not in (TAG_PLAIN, TAG_DOTTED):
            raise ValueError(f"unknown tag {self.tag!r}")


class FleChain:
    """The involutive residuated chain of a bunch, with exact operations."""

    def __init__(self, bunch: Bunch):
        self.bunch = bunch
        self.skeleton = bunch.skeleton
        self._subgroups = bunch.subgroup_map()
        self.unit = AlgElement(self.skeleton.least, TAG_PLAIN, og_unit(bunch.group_at(self.skeleton.least)))
        self.falsum = self.neg(self.unit)

    # -- element plumbing ---------------------------------------------------

    def element(self, node, coords, dotted: bool = False) -> AlgElement:
        group = self.bunch.group_at(node)
        coords = og_coerce(group, coords)
        if dotted:
            if self.skeleton.label_of(node) != LABEL_I:
                raise ValueError("dotted elements live in I layers only")
            if not subgroup_contains(group, self._subgroups[node], coords):
                raise ValueError("dotted coordinates must lie in the layer subgroup")
        return AlgElement(node, TAG_DOTTED if dotted else TAG_PLAIN, coords)

    def element_valid(self, x: AlgElement) -> bool:
        try:
            self.element(x.node, x.coords, dotted=x.tag == TAG_DOTTED)
        except (ValueError, KeyError):
            return False
        return True

    def _in_subgroup(self, node, coords) -> bool:
        return subgroup_contains(self.bunch.group_at(node), self._subgroups[node], coords)

    # -- operations ---------------------------------------------------------

    def rho(self, node, x: AlgElement) -> AlgElement:
        """Lift x into the layer of node; elements at or above it are unchanged."""
        skel = self.skeleton
        if skel.position(x.node) >= skel.position(node):
            return x
        hom = ds_transition(self.bunch.system, x.node, node)
        return AlgElement(node, TAG_PLAIN, hom_apply(hom, x.coords))

    def _layer_key(self, x: AlgElement):
        # the dotted copy of a subgroup element sits immediately below it
        return (x.coords, 0 if x.tag == TAG_DOTTED else 1)

    def compare(self, x: AlgElement, y: AlgElement) -> int:
        skel = self.skeleton
        top = x.node if skel.position(x.node) >= skel.position(y.node) else y.node
        rx, ry = self.rho(top, x), self.rho(top, y)
        group = self.bunch.group_at(top)
        sign = og_compare(group, rx.coords, ry.coords)
        if sign:
            return sign
        tag_x = 0 if rx.tag == TAG_DOTTED else 1
        tag_y = 0 if ry.tag == TAG_DOTTED else 1
        if tag_x != tag_y:
            return -1 if tag_x < tag_y else 1
        px, py = skel.position(x.node), skel.position(y.node)
        if px == py:
            return 0
        return -1 if px < py else 1

    def le(self, x, y) -> bool:
        return self.compare(x, y) <= 0

    def lt(self, x, y) -> bool:
        return self.compare(x, y) < 0

    def mul(self, x: AlgElement, y: AlgElement) -> AlgElement:
        skel = self.skeleton
        top = x.node if skel.position(x.node) >= skel.position(y.node) else y.node
        rx, ry = self.rho(top, x), self.rho(top, y)
        group = self.bunch.group_at(top)
        product = og_add(group, rx.coords, ry.coords)
        if skel.label_of(top) != LABEL_I:
            return AlgElement(top, TAG_PLAIN, product)
        both_plain_in_h = (
            rx.tag == TAG_PLAIN
            and ry.tag == TAG_PLAIN
            and self._in_subgroup(top, rx.coords)
            and self._in_subgroup(top, ry.coords)
        )
        if self._in_subgroup(top, product) and not both_plain_in_h:
            return AlgElement(top, TAG_DOTTED, product)
        return AlgElement(top, TAG_PLAIN, product)

    def neg(self, x: AlgElement) -> AlgElement:
        group = self.bunch.group_at(x.node)
        inverse = og_neg(group, x.coords)
        label = self.skeleton.label_of(x.node)
        if x.tag == TAG_DOTTED:
            return AlgElement(x.node, TAG_PLAIN, inverse)
        if label == LABEL_I:
            if self._in_subgroup(x.node, x.coords):
                return AlgElement(x.node, TAG_DOTTED, inverse)
            return AlgElement(x.node, TAG_PLAIN, inverse)
        if label == LABEL_J:
            return AlgElement(x.node, TAG_PLAIN, og_cover(group, inverse, DOWN))
        return AlgElement(x.node, TAG_PLAIN, inverse)

    def res(self, x: AlgElement, y: AlgElement) -> AlgElement:
        return self.neg(self.mul(x, self.neg(y)))

    # -- enumeration and sampling --------------------------------------------

    def is_finite(self) -> bool:
        return all(group.is_trivial for group in self.bunch.system.groups)

    def enumerate_universe(self):
        """Every element in increasing order, or None when a layer is infinite."""
        if not self.is_finite():
            return None
        elements = []
        for node in self.skeleton.nodes:
            elements.append(AlgElement(node, TAG_PLAIN, ()))
            if self.skeleton.label_of(node) == LABEL_I:
                elements.append(AlgElement(node, TAG_DOTTED, ()))
        import functools

        return sorted(elements, key=functools.cmp_to_key(self.compare))

    def sample_elements(self, bound: int = 5, count: int = 200, seed: int = 0):
        """Deterministic element sample: unit and falsum first, then layer sweeps."""
        rng = random.Random(seed)
        pool = [self.unit, self.falsum]
        seen = set(pool)
        per_node = max(4, count // max(1, len(self.skeleton)))
        for node in self.skeleton.nodes:
            group = self.bunch.group_at(node)
            for coords in og_sample(group, bound, per_node, rng.randrange(2**30)):
                candidate = AlgElement(node, TAG_PLAIN, coords)
                if candidate not in seen:
                    seen.add(candidate)
                    pool.append(candidate)
            if self.skeleton.label_of(node) == LABEL_I:
                spec = self._subgroups[node]
                for coords in subgroup_sample(group, spec, bound, per_node, rng.randrange(2**30)):
                    candidate = AlgElement(node, TAG_DOTTED, coords)
                    if candidate not in seen:
                        seen.add(candidate)
                        pool.append(candidate)
        if len(pool) > count:
            head, tail = pool[:2], pool[2:]
            pool = head + rng.sample(tail, count - 2)
        return pool


def algebra_of(bunch: Bunch) -> FleChain:
    return FleChain(bunch)


def map_element(chain_from: FleChain, chain_to: FleChain, spec: EmbeddingSpec, x: AlgElement) -> AlgElement:
    """Push a chain element through a bunch embedding spec."""
    node = spec.map_node(x.node)
    coords = hom_apply(spec.hom_at(x.node), x.coords)
    return AlgElement(node, x.tag, coords)


# ---------------------------------------------------------------------------
# Finite operation tables


class TableError(ValueError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class FiniteChainTable:
    """A finite chain 0 < 1 < ... < size-1 with a commutative monoid table."""

    size: int
    mul: tuple
    t_index: int
    f_index: int

    def __post_init__(self):
        object.__setattr__(self, "mul", tuple(tuple(int(v) for v in row) for row in self.mul))
        m = self.size
        if m < 1:
            raise ValueError("table needs at least one element")
        if len(self.mul) != m or any(len(row) != m for row in self.mul):
            raise ValueError("mul table must be size x size")
        if any(not 0 <= v < m for row in self.mul for v in row):
            raise ValueError("mul entries must be element indices")
        if not 0 <= self.t_index < m or not 0 <= self.f_index < m:
            raise ValueError("constant indices out of range")
        for x in range(m):
            for y in range(m):
                if self.mul[x][y] != self.mul[y][x]:
                    raise ValueError(f"table is not commutative at ({x},{y})")
            if self.mul[self.t_index][x] != x:
                raise ValueError(f"unit law fails at {x}")
        for x in range(m):
            for y in range(m):
                for z in range(m):
                    if self.mul[self.mul[x][y]][z] != self.mul[x][self.mul[y][z]]:
                        raise ValueError(f"table is not associative at ({x},{y},{z})")
                if y + 1 < m and self.mul[x][y] > self.mul[x][y + 1]:
                    raise ValueError(f"table is not monotone at ({x},{y})")


@dataclass(frozen=True)
class TableDecomposition:
    bunch: Bunch
    to_element: tuple
    from_element: tuple


def table_decompose(table: FiniteChainTable) -> TableDecomposition:
    """Recover the bunch of a finite involutive chain from its operation table.

    The skeleton is the chain of positive idempotents x -> x, the partition
    splits on idempotency of the residual complements, layer subgroups are
    read off from x * u' < x, and every finite layer group is trivial.
    """
    m, mul, t, f = table.size, table.mul, table.t_index, table.f_index

    res = [[None] * m for _ in range(m)]
    for x in range(m):
        for z in range(m):
            best = None
            for v in range(m):
                if mul[x][v] <= z:
                    best = v
            if best is None:
                raise TableError("not-residuated", f"no residuum for ({x},{z})")
            res[x][z] = best

    neg = [res[x][f] for x in range(m)]
    for x in range(m):
        if neg[neg[x]] != x:
            raise TableError("not-involutive", f"double complement moves {x}")

    if f == t:
        rank = "odd"
    elif f == t - 1:
        rank = "even"
    else:
        raise TableError(
            "rank", "the falsum is neither the unit nor its lower neighbour; the chain is neither odd nor even"
        )

    layer = [res[x][x] for x in range(m)]
    kappa = sorted(set(layer))
    if any(u < t for u in kappa):
        raise TableError("layer-structure", "an idempotent layer index sits below the unit")

    labels = {}
    for u in kappa:
        if u == t:
            if rank == "odd":
                labels[u] = LABEL_O
            else:
                labels[u] = LABEL_I if mul[f][f] == f else LABEL_J
        else:
            nu = neg[u]
            labels[u] = LABEL_I if mul[nu][nu] == nu else LABEL_J

    to_element = [None] * m
    for u in kappa:
        members = [x for x in range(m) if layer[x] == u]
        nu = neg[u]
        if labels[u] == LABEL_I:
            h_part = [x for x in members if mul[x][nu] < x]
            dotted = {mul[x][nu]: x for x in h_part}
            g_part = [x for x in members if x not in dotted]
            if g_part != [u] or h_part != [u] or len(dotted) != 1:
                raise TableError("layer-structure", f"layer {u} is not a trivial group with a dotted copy")
            to_element[u] = AlgElement(u, TAG_PLAIN, ())
            to_element[next(iter(dotted))] = AlgElement(u, TAG_DOTTED, ())
        else:
            if members != [u]:
                raise TableError("layer-structure", f"layer {u} of a finite chain must be trivial")
            to_element[u] = AlgElement(u, TAG_PLAIN, ())
    if any(e is None for e in to_element):
        raise TableError("layer-structure", "layers do not partition the chain")
    for i, u in enumerate(kappa):
        for v in kappa[i + 1 :]:
            if mul[v][u] != v:
                raise TableError("layer-structure", f"transition {u}->{v} does not send unit to unit")

    skeleton = Skeleton(tuple(kappa), tuple(labels[u] for u in kappa))
    groups = tuple(TRIVIAL for _ in kappa)
    steps = tuple(zero_hom(TRIVIAL, TRIVIAL) for _ in kappa[1:])
    subgroups = {u: SubgroupSpec(()) for u in kappa if labels[u] == LABEL_I}
    bunch = make_bunch(skeleton, groups, steps, subgroups)
    from_element = tuple((e.node, e.tag) for e in to_element)
    return TableDecomposition(bunch=bunch, to_element=tuple(to_element), from_element=from_element)


def chain_to_table(chain: FleChain) -> FiniteChainTable:
    """Operation table of a finite chain, elements listed in increasing order."""
    elements = chain.enumerate_universe()
    if elements is None:
        raise ValueError("the chain is infinite; only all-trivial bunches have tables")
    index = {e: i for i, e in enumerate(elements)}
    mul = tuple(tuple(index[chain.mul(x, y)] for y in elements) for x in elements)
    return FiniteChainTable(
        size=len(elements), mul=mul, t_index=index[chain.unit], f_index=index[chain.falsum]
    )


def roundtrip_check(bunch: Bunch, bound: int = 5, count: int = 200, seed: int = 0) -> Report:
    """Rebuild the representation data from the constructed algebra and compare.

    All-trivial bunches are checked exhaustively through their operation
    table; infinite layers are checked on seeded samples.
    """
    report = Report()
    chain = algebra_of(bunch)
    skel = bunch.skeleton
    if chain.is_finite():
        elements = chain.enumerate_universe()
        table = chain_to_table(chain)
        try:
            decomposed = table_decompose(table)
        except TableError as exc:
            report.add("RT-TABLE", None, str(exc))
            return report
        got = decomposed.bunch
        if len(got.skeleton) != len(skel):
            report.add("RT-SKEL", None, f"{len(got.skeleton)} nodes, expected {len(skel)}")
            return report
        if got.skeleton.labels != skel.labels:
            report.add("RT-SKEL", None, f"labels {got.skeleton.labels} vs {skel.labels}")
        if not all(g.is_trivial for g in got.system.groups):
            report.add("RT-LAYER", None, "decomposed layers are not trivial")
        for i, element in enumerate(elements):
            mapped = decomposed.to_element[i]
            if mapped.tag != element.tag or got.skeleton.position(mapped.node) != skel.position(element.node):
                report.add("RT-ELEM", element.node, f"element {i} does not round-trip")
        return report

    samples = chain.sample_elements(bound, count, seed)
    for x in samples:
        unit_here = AlgElement(x.node, TAG_PLAIN, og_unit(bunch.group_at(x.node)))
        if chain.res(x, x) != unit_here:
            report.add("RT-LAYER", x.node, f"x->x is not the layer unit for {x}")
    submap = bunch.subgroup_map()
    for x in samples:
        if x.tag != TAG_PLAIN or skel.label_of(x.node) != LABEL_I:
            continue
        unit_here = AlgElement(x.node, TAG_PLAIN, og_unit(bunch.group_at(x.node)))
        shifted = chain.mul(x, chain.neg(unit_here))
        claimed = subgroup_contains(bunch.group_at(x.node), submap[x.node], x.coords)
        if claimed != chain.lt(shifted, x):
            report.add("RT-H", x.node, f"subgroup membership of {x.coords} disagrees with x * u' < x")
    for u, v in skel.pairs():
        unit_v = AlgElement(v, TAG_PLAIN, og_unit(bunch.group_at(v)))
        hom = ds_transition(bunch.system, u, v)
        for coords in og_sample(bunch.group_at(u), bound, 20, seed + skel.position(u)):
            x = AlgElement(u, TAG_PLAIN, coords)
            expected = AlgElement(v, TAG_PLAIN, hom_apply(hom, coords))
            if chain.mul(unit_v, x) != expected:
                report.add("RT-TRANS", u, f"v * x disagrees with the transition on {coords}")
                break
    for node in skel.nodes[1:]:
        unit_here = AlgElement(node, TAG_PLAIN, og_unit(bunch.group_at(node)))
        complement = chain.neg(unit_here)
        idempotent = chain.mul(complement, complement) == complement
        if idempotent != (skel.label_of(node) == LABEL_I):
            report.add("RT-PART", node, "complement idempotency disagrees with the partition label")
    return report


# ---------------------------------------------------------------------------
# Axiom suite


def axiom_suite(chain: FleChain, bound: int = 5, count: int = 200, seed: int = 0) -> Report:
    """Sampled checks of the chain axioms; findings carry witnesses."""
    report = Report()
    rng = random.Random(seed)
    samples = chain.sample_elements(bound, count, rng.randrange(2**30))
    pick = lambda: samples[rng.randrange(len(samples))]
    pairs = [(pick(), pick()) for _ in range(count)]
    triples = [(pick(), pick(), pick()) for _ in range(count)]

    for x in samples:
        if chain.compare(x, x) != 0:
            report.add("AX-ORD", x.node, f"x is not equal to itself: {x}")
        if chain.neg(chain.neg(x)) != x:
            report.add("AX-INV", x.node, f"double complement moves {x}")
        if chain.mul(chain.unit, x) != x:
            report.add("AX-UNIT", x.node, f"unit law fails at {x}")
        if chain.le(chain.unit, x):
            if not chain.le(chain.res(x, x), x):
                report.add("AX-SELF", x.node, f"x -> x exceeds the positive element {x}")
    for x, y in pairs:
        if chain.compare(x, y) != -chain.compare(y, x):
            report.add("AX-ORD", x.node, f"comparison is not antisymmetric on {x}, {y}")
        if chain.mul(x, y) != chain.mul(y, x):
            report.add("AX-COMM", x.node, f"product is not commutative on {x}, {y}")
    for x, y, z in triples:
        if chain.le(x, y) and chain.le(y, z) and not chain.le(x, z):
            report.add("AX-ORD", x.node, f"order is not transitive on {x}, {y}, {z}")
        if chain.mul(chain.mul(x, y), z) != chain.mul(x, chain.mul(y, z)):
            report.add("AX-ASSOC", x.node, f"product is not associative on {x}, {y}, {z}")
        if chain.le(x, y) and not chain.le(chain.mul(x, z), chain.mul(y, z)):
            report.add("AX-MONO", x.node, f"product is not monotone on {x}, {y}, {z}")
        if chain.le(chain.mul(x, y), z) != chain.le(y, chain.res(x, z)):
            report.add("AX-ADJ", x.node, f"adjointness fails on {x}, {y}, {z}")

    cls = bunch_classify(chain.bunch)
    if cls.rank == "odd":
        if chain.falsum != chain.unit:
            report.add("AX-RANK", chain.unit.node, "odd chain must fix the unit under complement")
    else:
        if not chain.lt(chain.falsum, chain.unit):
            report.add("AX-RANK", chain.unit.node, "even chain must place the falsum below the unit")
        for x in samples:
            if chain.lt(chain.falsum, x) and chain.lt(x, chain.unit):
                report.add("AX-RANK", x.node, f"{x} separates the falsum from the unit")
        falsum_idem = chain.mul(chain.falsum, chain.falsum) == chain.falsum
        if falsum_idem != (cls.rank == "even-idem-f"):
            report.add("AX-RANK", chain.unit.node, "falsum idempotency disagrees with the rank class")
    return report


def subalgebra_sample_report(
    x_bunch: Bunch, y_bunch: Bunch, spec: EmbeddingSpec, bound: int = 5, count: int = 200, seed: int = 0
) -> Report:
    """Algebra-level subalgebra conditions, sampled through an embedding spec.

    Covers universe membership, order, product, residual, and both constants;
    this is the sampling counterpart of the structural sub-bunch conditions.
    """
    report = Report()
    cx = algebra_of(x_bunch)
    cy = algebra_of(y_bunch)
    rng = random.Random(seed)
    samples = cx.sample_elements(bound, count, rng.randrange(2**30))

    def image(e):
        return map_element(cx, cy, spec, e)

    try:
        for x in samples:
            if not cy.element_valid(image(x)):
                report.add("B1", x.node, f"image of {x} is not an element of the larger chain")
                return report
    except (KeyError, ValueError) as exc:
        report.add("B1", None, f"embedding spec cannot map a sample: {exc}")
        return report

    pairs = [(samples[rng.randrange(len(samples))], samples[rng.randrange(len(samples))]) for _ in range(count)]
    for x, y in pairs:
        if cx.le(x, y) != cy.le(image(x), image(y)):
            report.add("B2", x.node, f"order of {x}, {y} is not preserved")
        if image(cx.mul(x, y)) != cy.mul(image(x), image(y)):
            report.add("B3", x.node, f"product of {x}, {y} is not preserved")
        if image(cx.res(x, y)) != cy.res(image(x), image(y)):
            report.add("B4", x.node, f"residual of {x}, {y} is not preserved")
    if image(cx.unit) != cy.unit:
        report.add("B5", cx.unit.node, "unit is not preserved")
    if image(cx.falsum) != cy.falsum:
        report.add("B6", cx.falsum.node, "falsum is not preserved")
    return report
