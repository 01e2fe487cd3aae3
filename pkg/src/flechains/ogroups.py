"""Computable abelian o-groups with exact lexicographic orders.

A group is either trivial or a finite-rank lattice of integer or rational
vectors; the total order is induced by an invertible rational matrix of
functionals: x is strictly positive iff F @ x is lexicographically positive.
This file also carries homomorphisms with decidable order-preservation,
subgroup membership, torsion-free pushouts, the total-order search used by
the amalgamation pipeline, and seeded sampling helpers.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .intlin import (
    Matrix,
    Vector,
    as_int_matrix,
    first_nonzero,
    frac,
    identity,
    integer_inverse,
    is_integral,
    lex_sign,
    mat,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_vec,
    primitive_vector,
    smith_normal_form,
    solve_integer,
    solve_rational,
    transpose,
    zeros,
)

LATTICE_TRIVIAL = "trivial"
LATTICE_INT = "int"
LATTICE_RAT = "rat"

LESS, EQUAL, GREATER = -1, 0, 1
UP, DOWN = 1, -1


@dataclass(frozen=True)
class OGroup:
    """Trivial group, or Z^n / Q^n ordered through an invertible functional matrix."""

    lattice: str
    rank: int
    functionals: Matrix

    def __post_init__(self):
        if self.lattice == LATTICE_TRIVIAL:
            if self.rank != 0 or self.functionals != ():
                raise ValueError("trivial group has rank 0 and no functionals")
            return
        if self.lattice not in (LATTICE_INT, LATTICE_RAT):
            raise ValueError(f"unknown lattice kind {self.lattice!r}")
        if self.rank < 1:
            raise ValueError("lex group needs positive rank")
        coerced = mat(self.functionals)
        if len(coerced) != self.rank or any(len(row) != self.rank for row in coerced):
            raise ValueError("functional matrix must be rank x rank")
        if mat_rank(coerced) != self.rank:
            raise ValueError("functional matrix must be invertible")
        object.__setattr__(self, "functionals", coerced)

    @property
    def is_trivial(self) -> bool:
        return self.lattice == LATTICE_TRIVIAL


TRIVIAL = OGroup(LATTICE_TRIVIAL, 0, ())


def lex_group(lattice: str, rank: int, functionals=None) -> OGroup:
    if functionals is None:
        functionals = identity(rank)
    return OGroup(lattice, rank, mat(functionals))


def int_lex(rank: int, functionals=None) -> OGroup:
    return lex_group(LATTICE_INT, rank, functionals)


def rat_lex(rank: int, functionals=None) -> OGroup:
    return lex_group(LATTICE_RAT, rank, functionals)


# ---------------------------------------------------------------------------
# Elements


def og_coerce(group: OGroup, coords) -> Vector:
    """Validate and normalize coordinates for the given group."""
    values = tuple(coords)
    if len(values) != group.rank:
        raise ValueError(f"expected {group.rank} coordinates, got {len(values)}")
    if group.lattice == LATTICE_INT:
        out = []
        for x in values:
            f = frac(x)
            if f.denominator != 1:
                raise ValueError(f"coordinate {x} is not in the integer lattice")
            out.append(int(f))
        return tuple(out)
    if group.lattice == LATTICE_RAT:
        return tuple(frac(x) for x in values)
    return ()


def og_unit(group: OGroup) -> Vector:
    return og_coerce(group, (0,) * group.rank)


def og_add(group: OGroup, x, y) -> Vector:
    x = og_coerce(group, x)
    y = og_coerce(group, y)
    return og_coerce(group, tuple(a + b for a, b in zip(x, y)))


def og_neg(group: OGroup, x) -> Vector:
    x = og_coerce(group, x)
    return og_coerce(group, tuple(-a for a in x))


def og_sub(group: OGroup, x, y) -> Vector:
    return og_add(group, x, og_neg(group, y))


def og_compare(group: OGroup, x, y) -> int:
    """-1, 0, or 1: the lexicographic sign of F @ (x - y)."""
    diff = og_sub(group, x, y)
    if group.is_trivial:
        return EQUAL
    return lex_sign(mat_vec(group.functionals, diff))


def og_is_positive(group: OGroup, x) -> bool:
    return og_compare(group, x, og_unit(group)) >= 0


def og_is_strictly_positive(group: OGroup, x) -> bool:
    return og_compare(group, x, og_unit(group)) > 0


def og_is_discrete(group: OGroup) -> bool:
    """True iff every element has strict upper and lower covers."""
    return group.lattice == LATTICE_INT


@lru_cache(maxsize=None)
def atom(group: OGroup) -> Vector:
    """The upper cover of the unit in a discrete lex group.

    It generates the rank-one kernel lattice of all functionals but the last,
    oriented so that the last functional takes a positive value on it.
    """
    if not og_is_discrete(group):
        raise ValueError("only discrete (integer lattice) groups have an atom")
    inv = mat_inverse(group.functionals)
    kernel_direction = tuple(row[group.rank - 1] for row in inv)
    return og_coerce(group, primitive_vector(kernel_direction))


def og_cover(group: OGroup, x, direction: int) -> Vector:
    """Neighbouring element in a discrete group; x itself when no cover exists."""
    if direction not in (UP, DOWN):
        raise ValueError("direction must be UP (+1) or DOWN (-1)")
    x = og_coerce(group, x)
    if not og_is_discrete(group):
        return x
    step = atom(group)
    if direction == UP:
        return og_add(group, x, step)
    return og_sub(group, x, step)


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class OGroupHom:
    """A rational matrix between two o-groups, mapping lattice into lattice."""

    source: OGroup
    target: OGroup
    matrix: Matrix

    def __post_init__(self):
        coerced = mat(self.matrix)
        if len(coerced) != self.target.rank or any(len(row) != self.source.rank for row in coerced):
            raise ValueError(
                f"hom matrix must be {self.target.rank} x {self.source.rank}"
            )
        if self.source.lattice == LATTICE_INT and self.target.lattice == LATTICE_INT:
            if not all(is_integral(x) for row in coerced for x in row):
                raise ValueError("an integer-to-integer hom needs integer entries")
        if self.source.lattice == LATTICE_RAT and self.target.lattice == LATTICE_INT:
            if any(x for row in coerced for x in row):
                raise ValueError("the only hom from a rational lattice into an integer one is zero")
        object.__setattr__(self, "matrix", coerced)


def identity_hom(group: OGroup) -> OGroupHom:
    return OGroupHom(group, group, identity(group.rank))


def zero_hom(source: OGroup, target: OGroup) -> OGroupHom:
    return OGroupHom(source, target, zeros(target.rank, source.rank))


def hom_apply(hom: OGroupHom, x) -> Vector:
    x = og_coerce(hom.source, x)
    return og_coerce(hom.target, mat_vec(hom.matrix, x))


def same_lattice(a: OGroup, b: OGroup) -> bool:
    return a.lattice == b.lattice and a.rank == b.rank


def hom_compose(outer: OGroupHom, inner: OGroupHom) -> OGroupHom:
    """outer after inner; the middle groups must share their lattice."""
    if not same_lattice(inner.target, outer.source):
        raise ValueError("cannot compose: middle lattices differ")
    matrix = mat_mul(outer.matrix, inner.matrix, cols=inner.source.rank)
    return OGroupHom(inner.source, outer.target, matrix)


def hom_order_preserving(hom: OGroupHom) -> bool:
    """Exact order-preservation test via column dominance.

    With B = F_target @ M @ F_source^-1, the hom preserves the order iff the
    columns of B are lex-nonnegative, the nonzero columns have strictly
    increasing leading indices, and zero columns occur only as a tail.
    """
    if hom.source.rank == 0:
        return True
    if hom.target.rank == 0:
        return True
    b = mat_mul(
        hom.target.functionals,
        mat_mul(hom.matrix, mat_inverse(hom.source.functionals)),
    )
    last_lead = -1
    zero_seen = False
    for col in transpose(b):
        lead = first_nonzero(col)
        if lead is None:
            zero_seen = True
            continue
        if zero_seen:
            return False
        if col[lead] < 0:
            return False
        if lead <= last_lead:
            return False
        last_lead = lead
    return True


def hom_embedding_check(hom: OGroupHom) -> bool:
    """Injective and order-preserving; between total orders this is an order embedding."""
    if mat_rank(hom.matrix) != hom.source.rank:
        return False
    return hom_order_preserving(hom)


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup given by an integer basis matrix (group rank x generator count)."""

    basis: Matrix

    def __post_init__(self):
        coerced = tuple(tuple(int(frac(x)) for x in row) for row in self.basis)
        if any(not is_integral(x) for row in self.basis for x in row):
            raise ValueError("subgroup basis entries must be integers")
        widths = {len(row) for row in coerced}
        if len(widths) > 1:
            raise ValueError("ragged subgroup basis")
        h = widths.pop() if widths else 0
        if h and mat_rank(mat(coerced)) != h:
            raise ValueError("subgroup basis columns must be linearly independent")
        object.__setattr__(self, "basis", coerced)

    @property
    def generator_count(self) -> int:
        return len(self.basis[0]) if self.basis and self.basis[0] else 0

    def generators(self):
        if not self.basis:
            return ()
        return transpose(mat(self.basis), cols=self.generator_count)


def full_subgroup(group: OGroup) -> SubgroupSpec:
    return SubgroupSpec(tuple(tuple(int(i == j) for j in range(group.rank)) for i in range(group.rank)))


def trivial_subgroup(group: OGroup) -> SubgroupSpec:
    return SubgroupSpec(tuple(() for _ in range(group.rank)))


def subgroup_rank_matches(group: OGroup, spec: SubgroupSpec) -> bool:
    return len(spec.basis) == group.rank


def subgroup_contains(group: OGroup, spec: SubgroupSpec, x) -> bool:
    """Membership of x in the subgroup spanned by the basis columns.

    Integer combinations for integer lattices, rational ones for rational
    lattices; decided by exact normal-form solving.
    """
    x = og_coerce(group, x)
    if not subgroup_rank_matches(group, spec):
        raise ValueError("subgroup basis does not match the group rank")
    if spec.generator_count == 0:
        return not any(x)
    if group.lattice == LATTICE_RAT:
        return solve_rational(mat(spec.basis), x) is not None
    return solve_integer(spec.basis, x) is not None


def subgroup_sample(group: OGroup, spec: SubgroupSpec, bound: int, count: int, seed: int):
    """Deterministic sample of subgroup elements (basis combinations), unit first."""
    rng = random.Random(seed)
    h = spec.generator_count
    seen = {og_unit(group)}
    out = [og_unit(group)]
    attempts = 0
    basis = mat(spec.basis) if h else ()
    while len(out) < count and attempts < 20 * count + 100 and h:
        attempts += 1
        coeffs = tuple(rng.randint(-bound, bound) for _ in range(h))
        candidate = og_coerce(group, mat_vec(basis, coeffs))
        if candidate not in seen:
            seen.add(candidate)
            out.append(candidate)
    return out


# ---------------------------------------------------------------------------
# Sampling and brute-force enumeration


def og_sample(group: OGroup, bound: int, count: int = 10, seed: int = 0):
    """Deterministic pseudo-random elements with coordinates in [-bound, bound]."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    rng = random.Random(seed)
    out = [og_unit(group)]
    seen = {out[0]}
    attempts = 0
    while len(out) < count and attempts < 20 * count + 100 and not group.is_trivial:
        attempts += 1
        if group.lattice == LATTICE_INT:
            coords = tuple(rng.randint(-bound, bound) for _ in range(group.rank))
        else:
            coords = tuple(
                Fraction(rng.randint(-bound, bound), rng.randint(1, max(1, bound)))
                for _ in range(group.rank)
            )
        element = og_coerce(group, coords)
        if element not in seen:
            seen.add(element)
            out.append(element)
    return out


def box_elements(group: OGroup, bound: int):
    """All lattice points with coordinates in [-bound, bound] (integer lattices only)."""
    if group.is_trivial:
        yield ()
        return
    if group.lattice != LATTICE_INT:
        raise ValueError("box enumeration needs an integer lattice")
    for coords in itertools.product(range(-bound, bound + 1), repeat=group.rank):
        yield coords


# ---------------------------------------------------------------------------
# Pushouts of embeddings


@dataclass(frozen=True)
class PushoutResult:
    """Torsion-free pushout of two lattice embeddings with a common source.

    The underlying lattice is Z^rank and carries no order.  projection maps
    the direct sum of the two target lattices onto it, section is a right
    inverse of projection; j1 and j2 are the restrictions of projection to
    the two summands.
    """

    rank: int
    j1: Matrix
    j2: Matrix
    projection: Matrix
    section: Matrix


def group_pushout(iota1: OGroupHom, iota2: OGroupHom) -> PushoutResult:
    """Pushout (K (+) M) / <(iota1 g, -iota2 g)> followed by killing torsion."""
    if iota1.source != iota2.source:
        raise ValueError("pushout needs a shared source group")
    for hom in (iota1, iota2):
        for g in (hom.source, hom.target):
            if g.lattice == LATTICE_RAT:
                raise ValueError("pushout is defined for integer lattices only")
        if not hom_embedding_check(hom):
            raise ValueError("pushout inputs must be embeddings")
    g = iota1.source.rank
    k = iota1.target.rank
    m = iota2.target.rank
    p = as_int_matrix(iota1.matrix)
    q = as_int_matrix(iota2.matrix)
    stacked = tuple(p) + tuple(tuple(-x for x in row) for row in q)
    u, d, _ = smith_normal_form(stacked, k + m, g)
    torsion_rank = sum(1 for i in range(min(k + m, g)) if d[i][i])
    if torsion_rank != g:
        raise ValueError("relation lattice is rank deficient; inputs were not embeddings")
    rank = k + m - g
    projection = tuple(u[g:])
    u_inv = integer_inverse(u)
    section = tuple(tuple(row[g:]) for row in u_inv)
    j1 = tuple(row[:k] for row in projection)
    j2 = tuple(row[k:] for row in projection)
    return PushoutResult(rank=rank, j1=j1, j2=j2, projection=projection, section=section)


# ---------------------------------------------------------------------------
# Total-order extension search


@dataclass(frozen=True)
class OrderSearchFailure:
    """Search gave up; possibly spurious, the diagnostics say what was tried."""

    rank: int
    constraint_count: int
    candidates_tried: int
    detail: str


def _constraint_columns(constraint: OGroupHom):
    """Images of the source's lex basis directions, most significant first."""
    if constraint.source.rank == 0:
        return ()
    image = mat_mul(constraint.matrix, mat_inverse(constraint.source.functionals))
    return transpose(image, cols=constraint.source.rank)


def _order_holds(rank: int, f_matrix: Matrix, constraints) -> bool:
    try:
        target = lex_group(LATTICE_INT, rank, f_matrix)
    except ValueError:
        return False
    for c in constraints:
        if not hom_order_preserving(OGroupHom(c.source, target, c.matrix)):
            return False
    return True


def _greedy_basis(rank: int, vectors):
    chosen = []
    for v in vectors:
        if len(chosen) == rank:
            break
        candidate = chosen + [tuple(v)]
        if mat_rank(mat(candidate)) == len(candidate):
            chosen = candidate
    for i in range(rank):
        if len(chosen) == rank:
            break
        e = tuple(Fraction(int(i == j)) for j in range(rank))
        candidate = chosen + [e]
        if mat_rank(mat(candidate)) == len(candidate):
            chosen = candidate
    return chosen if len(chosen) == rank else None


def _stacked_candidates(rank: int, column_lists):
    """Functional matrices dual to priority-ordered constraint image bases."""
    nonempty = [cols for cols in column_lists if cols]
    index_orders = list(itertools.islice(itertools.permutations(range(len(nonempty))), 24)) or [()]
    for order in index_orders:
        ordered = [nonempty[i] for i in order]
        gathered_modes = []
        # level-major: first columns of every constraint, then second columns, ...
        levels = []
        for level in range(max((len(c) for c in ordered), default=0)):
            for cols in ordered:
                if level < len(cols):
                    levels.append(cols[level])
        gathered_modes.append(levels)
        # constraint-major: all columns of one constraint before the next
        gathered_modes.append([v for cols in ordered for v in cols])
        for vectors in gathered_modes:
            basis = _greedy_basis(rank, [v for v in vectors if any(v)])
            if basis is None:
                continue
            columns_matrix = transpose(mat(basis), cols=rank)
            try:
                yield mat_inverse(columns_matrix)
            except ValueError:
                continue


def _backtrack_candidates(rank: int, column_lists, budget: int):
    pool = sorted(
        (v for v in itertools.product((-1, 0, 1), repeat=rank) if any(v)),
        key=lambda v: (sum(1 for x in v if x), v),
    )
    pool = [tuple(Fraction(x) for x in v) for v in pool]
    results = []
    spent = [0]

    def partial_ok(rows):
        for cols in column_lists:
            images = [tuple(sum(r[i] * v[i] for i in range(rank)) for r in rows) for v in cols]
            last_lead = -1
            zero_seen = False
            for img in images:
                lead = first_nonzero(img)
                if lead is None:
                    zero_seen = True
                    continue
                if img[lead] < 0 or zero_seen or lead <= last_lead:
                    return False
                last_lead = lead
        return True

    def walk(rows):
        if spent[0] >= budget:
            return
        if len(rows) == rank:
            results.append(tuple(rows))
            return
        for v in pool:
            if spent[0] >= budget or results:
                return
            spent[0] += 1
            candidate = rows + [v]
            if mat_rank(mat(candidate)) != len(candidate):
                continue
            if not partial_ok(candidate):
                continue
            walk(candidate)

    walk([])
    return results, spent[0]


def order_extension_candidates(rank: int, constraints, limit: int = 4, budget: int = 4000):
    """Verified functional matrices making every constraint order-preserving.

    Candidates come from stacked bases of the constraint images, the identity,
    and a bounded backtracking search; each one is re-verified through the
    column-dominance criterion before being returned.
    """
    constraints = tuple(constraints)
    for c in constraints:
        if c.target.lattice not in (LATTICE_INT, LATTICE_TRIVIAL) or c.target.rank != rank:
            raise ValueError("order search constraints must target the common integer lattice")
    if rank == 0:
        return [()]
    column_lists = [_constraint_columns(c) for c in constraints]
    found = []
    seen = set()

    def consider(f_matrix):
        if f_matrix in seen:
            return
        seen.add(f_matrix)
        if _order_holds(rank, f_matrix, constraints):
            found.append(f_matrix)

    for candidate in _stacked_candidates(rank, column_lists):
        consider(candidate)
        if len(found) >= limit:
            return found
    consider(identity(rank))
    if len(found) >= limit:
        return found
    extra, _ = _backtrack_candidates(rank, column_lists, budget)
    for rows in extra:
        consider(mat(rows))
        if len(found) >= limit:
            break
    return found


def order_extension_search(rank: int, constraints, budget: int = 4000):
    """First verified order, or an OrderSearchFailure with diagnostics."""
    constraints = tuple(constraints)
    found = order_extension_candidates(rank, constraints, limit=1, budget=budget)
    if found:
        return found[0]
    return OrderSearchFailure(
        rank=rank,
        constraint_count=len(constraints),
        candidates_tried=budget,
        detail="no invertible functional matrix satisfied every cone constraint "
        "(stacked bases, identity, and bounded backtracking were tried)",
    )


def cone_compatibility_sample(p1: OGroupHom, p2: OGroupHom, bound: int) -> bool:
    """Sampled test that two image cones meet only at the unit.

    False iff some strictly positive source element of p1 maps onto the
    inverse of the image of a strictly positive source element of p2, with
    both images nonzero; an under-approximation usable as a test oracle.
    """
    if not same_lattice(p1.target, p2.target):
        raise ValueError("cones must live in one common lattice")
    positives_1 = set()
    for x in box_elements(p1.source, bound):
        if og_is_strictly_positive(p1.source, x):
            image = hom_apply(p1, x)
            if any(image):
                positives_1.add(image)
    for x in box_elements(p2.source, bound):
        if og_is_strictly_positive(p2.source, x):
            image = hom_apply(p2, x)
            if any(image) and og_neg(p2.target, image) in positives_1:
                return False
    return True
