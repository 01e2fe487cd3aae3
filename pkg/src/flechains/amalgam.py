"""Amalgamation of V-formations of idempotent-symmetric bunches.

The pipeline merges the skeletons strongly, closes all three direct systems
over the merged chain, extends both embedding families, replaces each layer
of the would-be amalgam by the torsion-free pushout of the two layer
embeddings, and then searches for total orders node by node so that the
injections and all induced transitions are order preserving.  Results are
verified before they are returned.

Formations with a J node are rejected: amalgamation is not available when
some positive idempotent has a non-idempotent complement, and the rejection
carries the obstructing node.  The strong form fails in general; the
counterwitness builder exhibits a formation whose merged layer is forced to
identify elements outside both embedded images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bunches import (
    Bunch,
    EmbeddingSpec,
    bunch_classify,
    bunch_validate,
    compose_embeddings,
    embedding_check,
    make_bunch,
)
from .chains import algebra_of, map_element
from .dirsys import (
    LABEL_I,
    LABEL_J,
    DirectSystem,
    Skeleton,
    ds_closure,
    ds_extend_embedding_family,
    ds_transition,
)
from .intlin import as_int_matrix, identity, mat, mat_mul
from .ogroups import (
    LATTICE_INT,
    LATTICE_RAT,
    TRIVIAL,
    OGroup,
    OGroupHom,
    OrderSearchFailure,
    box_elements,
    full_subgroup,
    group_pushout,
    int_lex,
    lex_group,
    order_extension_candidates,
    solve_integer,
)
from .report import Report

CONSTRUCTION_NOTE = (
    "layerwise torsion-free pushout of the embedded layer groups, "
    "ordered by a verified lexicographic-order search"
)


@dataclass(frozen=True)
class VFormation:
    x: Bunch
    y: Bunch
    z: Bunch
    iota1: EmbeddingSpec
    iota2: EmbeddingSpec


@dataclass(frozen=True)
class AmalgamResult:
    w: Bunch
    iota3: EmbeddingSpec
    iota4: EmbeddingSpec
    layer_orders: tuple
    construction: str
    report: Report


@dataclass(frozen=True)
class AmalgamFailure:
    code: str
    detail: str
    node: object = None
    constraints: tuple = ()


def chain_strong_amalgam(kx: Skeleton, ky: Skeleton, kz: Skeleton, map1, map2):
    """Merge two chain extensions of a shared chain, identifying only shared nodes.

    Within a gap between shared nodes the Y-only nodes precede the Z-only
    nodes; colliding ids of unshared nodes are renamed deterministically.
    Returns the merged skeleton and the two node maps into it.
    """
    map1 = dict(map1)
    map2 = dict(map2)
    for u in kx.nodes:
        if u not in map1 or u not in map2:
            raise ValueError(f"node maps must cover {u!r}")
    if map1[kx.least] != ky.least or map2[kx.least] != kz.least:
        raise ValueError("least-element mismatch between the skeletons")
    y_anchor = [ky.position(map1[u]) for u in kx.nodes]
    z_anchor = [kz.position(map2[u]) for u in kx.nodes]
    if y_anchor != sorted(set(y_anchor)) or z_anchor != sorted(set(z_anchor)):
        raise ValueError("node maps must be injective and order preserving")
    for u in kx.nodes:
        ly, lz = ky.label_of(map1[u]), kz.label_of(map2[u])
        if ly != lz:
            raise ValueError(f"label conflict at shared node {u!r}: {ly} vs {lz}")

    def segments(skel, anchors):
        out = []
        prev = -1
        for a in anchors + [len(skel)]:
            out.append([skel.nodes[i] for i in range(prev + 1, a if a < len(skel) else len(skel)) ])
            prev = a
        return out

    y_segments = segments(ky, y_anchor)
    z_segments = segments(kz, z_anchor)
    if y_segments[0] or z_segments[0]:
        raise ValueError("least-element mismatch: nodes below the shared least element")

    used = set()

    def fresh(node, side):
        candidate = node
        k = 1
        while candidate in used:
            candidate = f"{side}.{node}" if k == 1 else f"{side}.{node}.{k}"
            k += 1
        used.add(candidate)
        return candidate

    w_nodes, w_labels = [], []
    nu1, nu2 = {}, {}
    for i, u in enumerate(kx.nodes):
        anchor = fresh(map1[u], "y")
        w_nodes.append(anchor)
        w_labels.append(ky.label_of(map1[u]))
        nu1[map1[u]] = anchor
        nu2[map2[u]] = anchor
        for y_node in y_segments[i + 1]:
            name = fresh(y_node, "y")
            w_nodes.append(name)
            w_labels.append(ky.label_of(y_node))
            nu1[y_node] = name
        for z_node in z_segments[i + 1]:
            name = fresh(z_node, "z")
            w_nodes.append(name)
            w_labels.append(kz.label_of(z_node))
            nu2[z_node] = name
    return Skeleton(tuple(w_nodes), tuple(w_labels)), nu1, nu2


@dataclass
class _PushoutStage:
    """Shared pipeline prefix: merged skeleton, closures, families, pushouts."""

    kw: Skeleton
    nu1: dict
    nu2: dict
    dxc: DirectSystem
    dyc: DirectSystem
    dzc: DirectSystem
    fam1: dict
    fam2: dict
    pushouts: dict
    step_matrices: dict = field(default_factory=dict)

    def rank_at(self, node) -> int:
        return self.pushouts[node].rank

    def w_transition_matrix(self, u, v):
        """Induced transition on the pushout lattices, composed along the chain."""
        i, j = self.kw.position(u), self.kw.position(v)
        result = identity(self.rank_at(u))
        for k in range(i, j):
            step = self.step_matrices[(self.kw.nodes[k], self.kw.nodes[k + 1])]
            result = mat_mul(mat(step), result, cols=self.rank_at(u))
        return as_int_matrix(result)


def _check_preconditions(v: VFormation):
    for name, bunch in (("x", v.x), ("y", v.y), ("z", v.z)):
        rep = bunch_validate(bunch)
        if not rep.ok:
            raise ValueError(f"bunch {name} is invalid: {rep.render()}")
        for group in bunch.system.groups:
            if group.lattice == LATTICE_RAT:
                raise ValueError("amalgamation operates on integer-lattice layers only")
    for name, target, spec in (("iota1", v.y, v.iota1), ("iota2", v.z, v.iota2)):
        rep = embedding_check(v.x, target, spec)
        if not rep.ok:
            raise ValueError(f"{name} is not a bunch embedding: {rep.render()}")


def _first_j_node(v: VFormation):
    for bunch in (v.x, v.y, v.z):
        for node in bunch.skeleton.nodes:
            if bunch.skeleton.label_of(node) == LABEL_J:
                return node
    return None


def _pushout_stage(v: VFormation) -> _PushoutStage:
    kx, ky, kz = v.x.skeleton, v.y.skeleton, v.z.skeleton
    map1 = {u: v.iota1.map_node(u) for u in kx.nodes}
    map2 = {u: v.iota2.map_node(u) for u in kx.nodes}
    kw, nu1, nu2 = chain_strong_amalgam(kx, ky, kz, map1, map2)

    embed_x = {u: nu1[map1[u]] for u in kx.nodes}
    dxc = ds_closure(v.x.system, kw, embed_x)
    dyc = ds_closure(v.y.system, kw, nu1)
    dzc = ds_closure(v.z.system, kw, nu2)

    fam1 = ds_extend_embedding_family(dxc, dyc, {embed_x[u]: v.iota1.hom_at(u) for u in kx.nodes})
    fam2 = ds_extend_embedding_family(dxc, dzc, {embed_x[u]: v.iota2.hom_at(u) for u in kx.nodes})

    pushouts = {node: group_pushout(fam1[node], fam2[node]) for node in kw.nodes}

    stage = _PushoutStage(kw, nu1, nu2, dxc, dyc, dzc, fam1, fam2, pushouts)
    for i in range(len(kw) - 1):
        u, w = kw.nodes[i], kw.nodes[i + 1]
        ku, kv = dyc.group_at(u).rank, dyc.group_at(w).rank
        mu, mv = dzc.group_at(u).rank, dzc.group_at(w).rank
        y_step = as_int_matrix(ds_transition(dyc, u, w).matrix)
        z_step = as_int_matrix(ds_transition(dzc, u, w).matrix)
        block = [tuple(y_step[r]) + (0,) * mu for r in range(kv)]
        block += [(0,) * ku + tuple(z_step[r]) for r in range(mv)]
        lift = mat_mul(mat(block), mat(stage.pushouts[u].section), cols=stage.pushouts[u].rank)
        step = mat_mul(mat(stage.pushouts[w].projection), lift, cols=stage.pushouts[u].rank)
        stage.step_matrices[(u, w)] = as_int_matrix(step)
    return stage


def _search_orders(stage: _PushoutStage, candidate_limit: int, node_budget: int, search_budget: int):
    """Depth-first order assignment along the chain, backtracking on failure."""
    nodes = stage.kw.nodes
    chosen: dict = {}
    budget = [node_budget]
    deepest = [0, ()]

    def constraints_at(index):
        node = nodes[index]
        rank = stage.rank_at(node)
        placeholder = int_lex(rank)
        push = stage.pushouts[node]
        cons = [
            OGroupHom(stage.dyc.group_at(node), placeholder, mat(push.j1)),
            OGroupHom(stage.dzc.group_at(node), placeholder, mat(push.j2)),
        ]
        for earlier in nodes[:index]:
            r = stage.rank_at(earlier)
            if r == 0:
                continue
            source = int_lex(r, chosen[earlier])
            cons.append(OGroupHom(source, placeholder, mat(stage.w_transition_matrix(earlier, node))))
        return cons

    def walk(index):
        if index == len(nodes):
            return True
        if budget[0] <= 0:
            return False
        budget[0] -= 1
        node = nodes[index]
        rank = stage.rank_at(node)
        if rank == 0:
            chosen[node] = ()
            if walk(index + 1):
                return True
            del chosen[node]
            return False
        cons = constraints_at(index)
        candidates = order_extension_candidates(rank, cons, limit=candidate_limit, budget=search_budget)
        if index >= deepest[0] and not candidates:
            deepest[0] = index
            deepest[1] = tuple(c.matrix for c in cons)
        for f_matrix in candidates:
            chosen[node] = f_matrix
            if walk(index + 1):
                return True
            del chosen[node]
        return False

    if walk(0):
        return chosen
    blocking = nodes[min(deepest[0], len(nodes) - 1)]
    return AmalgamFailure(
        code="ORDER-SEARCH",
        detail="no compatible total order was found for the merged layer "
        "(the search is incomplete, so this may be spurious)",
        node=blocking,
        constraints=deepest[1],
    )


def amalgamate(
    v: VFormation,
    *,
    candidate_limit: int = 4,
    node_budget: int = 400,
    search_budget: int = 4000,
    verify_bound: int = 3,
    verify_count: int = 120,
    verify_seed: int = 0,
):
    """Amalgamate a V-formation of idempotent-symmetric bunches.

    Returns an AmalgamResult whose verification report is clean, or an
    AmalgamFailure naming the obstruction.  Structurally broken formations
    raise ValueError instead.
    """
    _check_preconditions(v)
    j_node = _first_j_node(v)
    if j_node is not None:
        return AmalgamFailure(
            code="J-NODE",
            detail="a skeleton node carries a non-idempotent complement (J label); "
            "the non-symmetric classes do not admit amalgamation, so the formation is rejected",
            node=j_node,
        )
    ranks = {bunch_classify(b).rank for b in (v.x, v.y, v.z)}
    if len(ranks) != 1:
        return AmalgamFailure(code="RANK-MIX", detail=f"mixed rank classes {sorted(ranks)}")

    stage = _pushout_stage(v)
    orders = _search_orders(stage, candidate_limit, node_budget, search_budget)
    if isinstance(orders, AmalgamFailure):
        return orders

    kw = stage.kw
    groups = []
    for node in kw.nodes:
        rank = stage.rank_at(node)
        groups.append(TRIVIAL if rank == 0 else lex_group(LATTICE_INT, rank, orders[node]))
    group_of = dict(zip(kw.nodes, groups))
    steps = []
    for i in range(len(kw) - 1):
        u, w = kw.nodes[i], kw.nodes[i + 1]
        steps.append(OGroupHom(group_of[u], group_of[w], mat(stage.step_matrices[(u, w)])))
    subgroups = {node: full_subgroup(group_of[node]) for node in kw.nodes if kw.label_of(node) == LABEL_I}
    w_bunch = make_bunch(kw, tuple(groups), tuple(steps), subgroups)

    iota3 = EmbeddingSpec(
        tuple((u, stage.nu1[u]) for u in v.y.skeleton.nodes),
        tuple(
            (u, OGroupHom(v.y.group_at(u), group_of[stage.nu1[u]], mat(stage.pushouts[stage.nu1[u]].j1)))
            for u in v.y.skeleton.nodes
        ),
    )
    iota4 = EmbeddingSpec(
        tuple((u, stage.nu2[u]) for u in v.z.skeleton.nodes),
        tuple(
            (u, OGroupHom(v.z.group_at(u), group_of[stage.nu2[u]], mat(stage.pushouts[stage.nu2[u]].j2)))
            for u in v.z.skeleton.nodes
        ),
    )
    layer_orders = tuple((node, orders[node]) for node in kw.nodes)
    result = AmalgamResult(
        w=w_bunch,
        iota3=iota3,
        iota4=iota4,
        layer_orders=layer_orders,
        construction=CONSTRUCTION_NOTE,
        report=Report(),
    )
    verification = verify_amalgam(v, result, bound=verify_bound, count=verify_count, seed=verify_seed)
    if not verification.ok:
        raise RuntimeError(f"internal amalgam verification failed:\n{verification.render()}")
    return AmalgamResult(
        w=w_bunch,
        iota3=iota3,
        iota4=iota4,
        layer_orders=layer_orders,
        construction=CONSTRUCTION_NOTE,
        report=verification,
    )


def verify_amalgam(v: VFormation, result: AmalgamResult, bound: int = 5, count: int = 200, seed: int = 0) -> Report:
    """Independent checks of an amalgam: structure, embeddings, and commutation."""
    report = Report()
    report.merge(bunch_validate(result.w), context="W")
    report.merge(embedding_check(v.y, result.w, result.iota3), context="iota3")
    report.merge(embedding_check(v.z, result.w, result.iota4), context="iota4")

    e31 = None
    e42 = None
    try:
        e31 = compose_embeddings(result.iota3, v.iota1)
        e42 = compose_embeddings(result.iota4, v.iota2)
        for u in v.x.skeleton.nodes:
            if e31.map_node(u) != e42.map_node(u):
                report.add("AM-SQ", u, "the two skeleton routes disagree")
            elif e31.hom_at(u).matrix != e42.hom_at(u).matrix:
                report.add("AM-SQ", u, "the two layer routes disagree")
    except (KeyError, ValueError) as exc:
        report.add("AM-SQ", None, f"cannot compose the embeddings: {exc}")

    cx = bunch_classify(v.x)
    cw = bunch_classify(result.w)
    if cw.rank != cx.rank:
        report.add("AM-RANK", None, f"rank class changed: {cx.rank} -> {cw.rank}")
    if not cw.symm:
        report.add("AM-RANK", None, "the amalgam left the idempotent-symmetric class")

    if report.ok and e31 is not None:
        chain_x = algebra_of(v.x)
        chain_w = algebra_of(result.w)
        for x in chain_x.sample_elements(bound, count, seed):
            via_y = map_element(chain_x, chain_w, e31, x)
            via_z = map_element(chain_x, chain_w, e42, x)
            if via_y != via_z:
                report.add("AM-ALG", x.node, f"element {x} takes different routes")
            elif not chain_w.element_valid(via_y):
                report.add("AM-ALG", x.node, f"image of {x} is not a valid element")
    return report


# ---------------------------------------------------------------------------
# Strong amalgamation counterwitness


@dataclass(frozen=True)
class StrongApWitness:
    formation: VFormation
    node: object
    y_element: tuple
    z_element: tuple
    merged_image: tuple
    note: str


def find_strongness_violation(v: VFormation, bound: int = 3):
    """Search the merged layers for identifications outside both embedded images.

    Returns (node, y element, z element, common image) or None.  The search
    runs at the lattice level, before any order is chosen, because every
    amalgam built on the pushout inherits such an identification.
    """
    _check_preconditions(v)
    stage = _pushout_stage(v)
    small_first = lambda coords: (sum(abs(c) for c in coords), tuple(-c for c in coords))
    for node in stage.kw.nodes:
        push = stage.pushouts[node]
        gy = stage.dyc.group_at(node)
        gz = stage.dzc.group_at(node)
        if gy.rank == 0 and gz.rank == 0:
            continue
        p1 = as_int_matrix(stage.fam1[node].matrix)
        p2 = as_int_matrix(stage.fam2[node].matrix)
        j1 = push.j1
        j2 = push.j2
        images = {}
        for y in sorted(box_elements(gy, bound), key=small_first):
            key = tuple(sum(j1[r][c] * y[c] for c in range(gy.rank)) for r in range(push.rank))
            images.setdefault(key, []).append(y)
        for z in sorted(box_elements(gz, bound), key=small_first):
            key = tuple(sum(j2[r][c] * z[c] for c in range(gz.rank)) for r in range(push.rank))
            for y in images.get(key, ()):
                if solve_integer(p1, y) is None and solve_integer(p2, z) is None:
                    return node, y, z, key
    return None


def strong_ap_counterwitness() -> StrongApWitness:
    """A formation whose merged layer is forced to identify outside the images.

    Three two-node even chains share a doubled copy of the integers; the
    doubling embeddings make the pushout identify the two generators, neither
    of which comes from the shared part.
    """
    from .samples import doubling_formation

    formation = doubling_formation()
    hit = find_strongness_violation(formation, bound=3)
    if hit is None:
        raise RuntimeError("the doubling formation lost its violation; this cannot happen")
    node, y, z, image = hit
    return StrongApWitness(
        formation=formation,
        node=node,
        y_element=y,
        z_element=z,
        merged_image=image,
        note=(
            "killing torsion identifies the two generator copies even though "
            "neither lies in the embedded image of the shared chain; every "
            "amalgam built on this layer therefore fails strongness"
        ),
    )
