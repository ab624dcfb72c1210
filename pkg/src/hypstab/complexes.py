r"""Loose triangulations as face-pairing gluing data.

A triangulation here is the combinatorial realization of a space as t
copies of the standard n-simplex glued along their facets by simplicial
bijections; self-pairings between different facets of one simplex are
allowed, every facet is paired at most once, and unpaired facets form
the boundary.  Facets are indexed by their opposite vertex.

Wire format (JSON)::

    { "dim": n, "simplices": t,
      "pairings": [ {"a": [simplex, facet], "b": [simplex, facet],
                     "map": [vertex, ...]}, ... ] }

where ``map`` lists the images of facet a's vertices taken in increasing
order of preimage.

The module computes cell counts and Euler characteristics via union-find
over the induced face identifications, orientations (a pairing must
reverse the boundary orientations of the two facets), vertex links and
edge valences in dimension 3, the alternated fundamental cycle with
exact rational coefficients, and finite covers described by permutation
assignments.  A cover assignment is admissible when the ordered product
of permutations around every codimension-2 cycle is the identity (the
unbranched condition); branched assignments are rejected with the
offending cycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction


class ComplexError(ValueError):
    """Invalid gluing data or an operation on unsuitable data."""


def facet_vertices(n: int, i: int) -> tuple:
    """Vertices of the facet opposite vertex i, in increasing order."""
    return tuple(v for v in range(n + 1) if v != i)


@dataclass(frozen=True)
class Pairing:
    a: int
    facet_a: int
    b: int
    facet_b: int
    vertex_map: tuple  # images of facet_a's vertices, increasing preimage order

    def forward(self) -> dict:
        return dict(zip(facet_vertices(len(self.vertex_map), self.facet_a),
                        self.vertex_map))

    def backward(self) -> dict:
        return {w: v for v, w in self.forward().items()}


@dataclass(frozen=True)
class Triangulation:
    dim: int
    simplex_count: int
    pairings: tuple
    labels: dict | None = None

    @property
    def slots(self):
        return ((s, f) for s in range(self.simplex_count) for f in range(self.dim + 1))

    def slot_table(self) -> dict:
        """(simplex, facet) -> (pairing index, side) with side in {'a','b'}."""
        table = {}
        for idx, p in enumerate(self.pairings):
            for slot, side in (((p.a, p.facet_a), "a"), ((p.b, p.facet_b), "b")):
                if slot in table:
                    raise ComplexError(f"slot {slot} used by two pairings")
                table[slot] = (idx, side)
        return table

    def neighbor(self, s: int, f: int):
        """(other simplex, other facet, vertex map dict) across the pairing,
        or None on the boundary."""
        entry = self._table().get((s, f))
        if entry is None:
            return None
        idx, side = entry
        p = self.pairings[idx]
        if side == "a":
            return p.b, p.facet_b, p.forward(), idx, +1
        return p.a, p.facet_a, p.backward(), idx, -1

    def _table(self):
        if not hasattr(self, "_slot_cache"):
            object.__setattr__(self, "_slot_cache", self.slot_table())
        return self._slot_cache


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    closed: bool
    errors: tuple
    boundary_slots: tuple


def validate(T: Triangulation) -> ValidationReport:
    """Check the involution and vertex-map invariants slot by slot."""
    errors = []
    n, t = T.dim, T.simplex_count
    if n < 1 or t < 1:
        errors.append("need dim >= 1 and at least one simplex")
    used = {}
    for idx, p in enumerate(T.pairings):
        for s, f, tag in ((p.a, p.facet_a, "a"), (p.b, p.facet_b, "b")):
            if not (0 <= s < t and 0 <= f <= n):
                errors.append(f"pairing {idx}: slot ({s},{f}) out of range")
                continue
            if (s, f) in used:
                errors.append(f"pairing {idx}: slot ({s},{f}) already used by pairing {used[(s, f)]}")
            used[(s, f)] = idx
        if (p.a, p.facet_a) == (p.b, p.facet_b):
            errors.append(f"pairing {idx}: facet glued to itself")
        if sorted(p.vertex_map) != list(facet_vertices(n, p.facet_b)):
            errors.append(f"pairing {idx}: vertex map is not a bijection onto facet "
                          f"{p.facet_b} of simplex {p.b}")
    boundary = tuple((s, f) for s in range(t) for f in range(n + 1) if (s, f) not in used)
    return ValidationReport(not errors, not boundary and not errors, tuple(errors), boundary)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while self.parent.get(x, x) != x:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


@dataclass(frozen=True)
class CellCounts:
    f_vector: tuple
    euler: int


def cell_counts(T: Triangulation) -> CellCounts:
    """f-vector and Euler characteristic of the quotient cell structure.

    Cells of dimension d are orbits of (simplex, vertex subset of size
    d+1) under the identifications generated by the facet pairings.
    """
    n, t = T.dim, T.simplex_count
    uf = _UnionFind()
    for p in T.pairings:
        fw = p.forward()
        verts = list(fw)
        for size in range(1, n + 1):
            for sub in itertools.combinations(verts, size):
                img = frozenset(fw[v] for v in sub)
                uf.union((p.a, frozenset(sub)), (p.b, img))
    f = []
    for d in range(n):
        cells = set()
        for s in range(t):
            for sub in itertools.combinations(range(n + 1), d + 1):
                cells.add(uf.find((s, frozenset(sub))))
        f.append(len(cells))
    f.append(t)
    euler = sum((-1) ** d * fd for d, fd in enumerate(f))
    return CellCounts(tuple(f), euler)


def _perm_sign(seq) -> int:
    inv = 0
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _pairing_sign(p: Pairing, n: int) -> int:
    """Relative sign of the two boundary facets under the gluing.

    The gluing cancels boundaries iff eps_b = -eps_a (-1)^{i+j} sgn(pi)
    where pi sorts the image tuple of facet a's ascending vertex list.
    """
    return -1 * (-1) ** (p.facet_a + p.facet_b) * _perm_sign(p.vertex_map)


@dataclass(frozen=True)
class OrientabilityResult:
    orientable: bool
    assignment: tuple | None
    violating_cycle: tuple | None


def orientability(T: Triangulation) -> OrientabilityResult:
    """Search for simplex orientations making every pairing orientation-reversing."""
    n, t = T.dim, T.simplex_count
    sign = {}
    parent = {}
    for start in range(t):
        if start in sign:
            continue
        sign[start] = 1
        queue = [start]
        while queue:
            s = queue.pop()
            for f in range(n + 1):
                nb = T.neighbor(s, f)
                if nb is None:
                    continue
                other, _, _, idx, _ = nb
                p = T.pairings[idx]
                required = sign[s] * _pairing_sign(p, n)
                if other not in sign:
                    sign[other] = required
                    parent[other] = (s, idx)
                    queue.append(other)
                elif sign[other] != required:
                    cycle = [idx]
                    for node in (s, other):
                        while node in parent:
                            node_parent, via = parent[node]
                            cycle.append(via)
                            node = node_parent
                    return OrientabilityResult(False, None, tuple(cycle))
    return OrientabilityResult(True, tuple(sign[s] for s in range(t)), None)


# ---------------------------------------------------------------------------
# vertex links and edge valences (dimension 3)


@dataclass(frozen=True)
class VertexLinkInfo:
    vertex_cells: tuple   # representative (simplex, vertex) slots in the orbit
    faces: int
    edges: int
    corners: int
    euler: int


@dataclass(frozen=True)
class EdgeInfo:
    representative: tuple  # (simplex, frozenset endpoints)
    valence: int


@dataclass(frozen=True)
class LinksReport:
    vertex_links: tuple
    edges: tuple


def links(T: Triangulation) -> LinksReport:
    """Per-vertex link surfaces (as Euler characteristics) and edge valences.

    Dimension 3 only.  The link of a vertex v in a tetrahedron is a
    triangle whose sides lie on the three facets through v; sides are
    glued according to the facet pairings.  Requires a closed complex:
    an unpaired facet leaves link sides unmatched.
    """
    if T.dim != 3:
        raise ComplexError("links are implemented for 3-dimensional complexes")
    rep = validate(T)
    if not rep.valid:
        raise ComplexError(f"invalid triangulation: {rep.errors}")
    if not rep.closed:
        raise ComplexError(f"links need a closed complex; boundary at {rep.boundary_slots}")
    t = T.simplex_count

    verts = _UnionFind()
    sides = _UnionFind()
    corners = _UnionFind()
    edges = _UnionFind()
    for p in T.pairings:
        fw = p.forward()
        for v in fw:
            verts.union((p.a, v), (p.b, fw[v]))
            sides.union((p.a, v, p.facet_a), (p.b, fw[v], p.facet_b))
        for v, w in itertools.permutations(fw, 2):
            corners.union((p.a, v, w), (p.b, fw[v], fw[w]))
            edges.union((p.a, frozenset((v, w))), (p.b, frozenset((fw[v], fw[w]))))

    by_vertex = {}
    for s in range(t):
        for v in range(4):
            by_vertex.setdefault(verts.find((s, v)), []).append((s, v))
    links_out = []
    for root, cells in sorted(by_vertex.items(), key=lambda kv: min(kv[1])):
        face_count = len(cells)
        side_orbits = {sides.find((s, v, f)) for s, v in cells for f in range(4) if f != v}
        corner_orbits = {corners.find((s, v, w)) for s, v in cells for w in range(4) if w != v}
        v_count, e_count = len(corner_orbits), len(side_orbits)
        if 3 * face_count != 2 * e_count:
            raise ComplexError("non-manifold link structure: link sides unmatched")
        links_out.append(VertexLinkInfo(tuple(sorted(cells)), face_count, e_count,
                                        v_count, v_count - e_count + face_count))

    by_edge = {}
    for s in range(t):
        for pair in itertools.combinations(range(4), 2):
            key = edges.find((s, frozenset(pair)))
            by_edge.setdefault(key, []).append((s, frozenset(pair)))
    edge_infos = [EdgeInfo(min(slots, key=lambda x: (x[0], tuple(sorted(x[1])))), len(slots))
                  for slots in by_edge.values()]
    edge_infos.sort(key=lambda e: (e.representative[0], tuple(sorted(e.representative[1]))))
    return LinksReport(tuple(links_out), tuple(edge_infos))


# ---------------------------------------------------------------------------
# the alternated fundamental cycle


@dataclass
class Chain:
    """Formal rational combination of labeled affine simplices.

    Keys are (simplex id, vertex ordering); no zero coefficients are
    stored.
    """

    terms: dict = field(default_factory=dict)

    def add(self, key, coeff: Fraction):
        new = self.terms.get(key, Fraction(0)) + coeff
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def l1(self) -> Fraction:
        return sum((abs(c) for c in self.terms.values()), Fraction(0))


def fundamental_cycle(T: Triangulation) -> Chain:
    """z = sum_i alt(s_i) over orientation-consistent parameterizations.

    alt averages a simplex over all vertex orderings with alternating
    signs and coefficient 1/(n+1)!; the total L1 size is the number of
    simplices.
    """
    n = T.dim
    orient = orientability(T)
    if not orient.orientable:
        raise ComplexError("fundamental cycle needs an oriented complex")
    fact = math.factorial(n + 1)
    z = Chain()
    for s in range(T.simplex_count):
        eps = orient.assignment[s]
        for tau in itertools.permutations(range(n + 1)):
            z.add((s, tau), Fraction(eps * _perm_sign(tau), fact))
    return z


def boundary(T: Triangulation, z: Chain) -> Chain:
    """The boundary of a chain, reduced modulo the facet identifications.

    Each facet cell picks the lexicographically smaller of its two slots
    as canonical; boundary faces on the other side are transported
    through the vertex map before coefficients are summed.
    """
    out = Chain()
    for (s, tau), coeff in z.terms.items():
        for k in range(len(tau)):
            face = tau[:k] + tau[k + 1:]
            missing = tau[k]
            sign = (-1) ** k
            nb = T.neighbor(s, missing)
            if nb is None:
                key = (("bd", s, missing), face)
            else:
                other, other_facet, vmap, _, _ = nb
                if (other, other_facet) < (s, missing):
                    key = ((other, other_facet), tuple(vmap[v] for v in face))
                else:
                    key = ((s, missing), face)
            out.add(key, coeff * sign)
    return out


def verify_cycle(T: Triangulation, z: Chain) -> bool:
    """True iff the boundary of z vanishes identically (exact arithmetic)."""
    return not boundary(T, z).terms


# ---------------------------------------------------------------------------
# covers from permutation assignments


@dataclass(frozen=True)
class CoverSpec:
    """Degree-d cover data: one permutation of {1..d} per pairing.

    ``perms[i]`` is the one-line permutation assigned to pairing i,
    stored 0-indexed internally; crossing the pairing from side a to
    side b sends sheet s to perms[i][s].
    """

    degree: int
    perms: dict

    def __post_init__(self):
        for idx, perm in self.perms.items():
            if sorted(perm) != list(range(self.degree)):
                raise ComplexError(f"assignment for pairing {idx} is not a permutation "
                                   f"of 0..{self.degree - 1}")


@dataclass(frozen=True)
class Codim2Cycle:
    """A closed walk around a codimension-2 cell: (simplex, exit facet,
    pairing index, direction) steps."""

    steps: tuple

    def describe(self) -> str:
        inner = " -> ".join(f"(simplex {s}, facet {f}, pairing {i}{'+' if d > 0 else '-'})"
                            for s, f, i, d in self.steps)
        return f"[{inner}]"


def codim2_cycles(T: Triangulation) -> list:
    """All closed walks around codimension-2 cells of a closed complex."""
    n = T.dim
    seen = set()
    cycles = []
    for s in range(T.simplex_count):
        for pair in itertools.combinations(range(n + 1), 2):
            face = frozenset(v for v in range(n + 1) if v not in pair)
            for exit_facet in pair:
                state0 = (s, face, exit_facet)
                if state0 in seen:
                    continue
                steps = []
                state = state0
                closed_walk = True
                while True:
                    cs, cface, cexit = state
                    seen.add(state)
                    nb = T.neighbor(cs, cexit)
                    if nb is None:
                        closed_walk = False
                        break
                    other, entry, vmap, idx, direction = nb
                    new_face = frozenset(vmap[v] for v in cface)
                    missing = [v for v in range(n + 1) if v not in new_face]
                    nxt = missing[0] if missing[1] == entry else missing[1]
                    steps.append((cs, cexit, idx, direction))
                    # mark the opposite-direction state so each geometric
                    # cell yields one walk, not a forward/backward pair
                    seen.add((other, new_face, entry))
                    state = (other, new_face, nxt)
                    if state == state0:
                        break
                    if state in seen:
                        closed_walk = False
                        break
                if closed_walk and steps:
                    cycles.append(Codim2Cycle(tuple(steps)))
    return cycles


def check_cover_spec(T: Triangulation, spec: CoverSpec) -> list:
    """Codim-2 cycles with nontrivial holonomy (branched locus); empty if
    the assignment is an honest unbranched cover."""
    missing = [i for i in range(len(T.pairings)) if i not in spec.perms]
    if missing:
        raise ComplexError(f"no permutation assigned to pairings {missing}")
    bad = []
    for cyc in codim2_cycles(T):
        sheets = list(range(spec.degree))
        for _, _, idx, direction in cyc.steps:
            perm = spec.perms[idx]
            if direction > 0:
                sheets = [perm[x] for x in sheets]
            else:
                inv = [0] * spec.degree
                for i, v in enumerate(perm):
                    inv[v] = i
                sheets = [inv[x] for x in sheets]
        if sheets != list(range(spec.degree)):
            bad.append(cyc)
    return bad


def build_cover(T: Triangulation, spec: CoverSpec) -> Triangulation:
    """The degree-d cover with d * t simplices defined by the assignment.

    Simplex (i, sheet s) gets id i*d + s; the projection is retained in
    the labels.  Raises `ComplexError` naming a codim-2 cycle when the
    assignment is branched.
    """
    bad = check_cover_spec(T, spec)
    if bad:
        raise ComplexError("branched assignment: nontrivial holonomy around "
                           f"codimension-2 cycle {bad[0].describe()}")
    d = spec.degree
    pairings = []
    for idx, p in enumerate(T.pairings):
        perm = spec.perms[idx]
        for s in range(d):
            pairings.append(Pairing(p.a * d + s, p.facet_a,
                                    p.b * d + perm[s], p.facet_b, p.vertex_map))
    labels = {"projection": {i * d + s: i for i in range(T.simplex_count)
                             for s in range(d)},
              "degree": d}
    if T.labels and "name" in T.labels:
        labels["name"] = f"{T.labels['name']}-cover-deg{d}"
    return Triangulation(T.dim, T.simplex_count * d, tuple(pairings), labels)


def trivial_cover_spec(T: Triangulation, degree: int = 1) -> CoverSpec:
    return CoverSpec(degree, {i: tuple(range(degree)) for i in range(len(T.pairings))})


def _dual_spanning_tree(T: Triangulation) -> tuple:
    """(set of tree pairing indices, list of non-tree pairing indices)."""
    seen = {0}
    tree = set()
    queue = [0]
    while queue:
        s = queue.pop()
        for f in range(T.dim + 1):
            nb = T.neighbor(s, f)
            if nb is None:
                continue
            other, _, _, idx, _ = nb
            if other not in seen:
                seen.add(other)
                tree.add(idx)
                queue.append(other)
    if len(seen) != T.simplex_count:
        raise ComplexError("disconnected complex")
    return tree, [i for i in range(len(T.pairings)) if i not in tree]


def characteristic_cover_spec(T: Triangulation, x: int) -> CoverSpec:
    """The degree x^2 cover of a one-vertex torus complex induced by the
    subgroup x(Z x Z).

    Tree pairings act trivially; the two non-tree pairings act as the
    two coordinate translations on Z_x x Z_x.  Because x(Z x Z) is
    characteristic, the choice of free basis does not matter.
    """
    if x < 1:
        raise ComplexError("need x >= 1")
    tree, gens = _dual_spanning_tree(T)
    if len(gens) != 2:
        raise ComplexError("characteristic covers need a rank-2 dual graph (a torus complex)")
    d = x * x

    def translation(du, dv):
        return tuple(((u + du) % x) * x + (v + dv) % x
                     for u in range(x) for v in range(x))

    perms = {i: tuple(range(d)) for i in tree}
    perms[gens[0]] = translation(1, 0)
    perms[gens[1]] = translation(0, 1)
    return CoverSpec(d, perms)


def random_cover_spec(T: Triangulation, degree: int, rng, max_tries: int = 64) -> CoverSpec:
    """A random admissible cover assignment.

    Powers of one random d-cycle commute, so on complexes whose codim-2
    walk words have zero signed exposure per pairing (oriented surface
    complexes in particular) the assignment is automatically unbranched;
    other complexes are retried until the holonomy check passes.
    """
    for _ in range(max_tries):
        base = tuple(rng.permutation(degree).tolist())

        def power(k):
            out = list(range(degree))
            for _ in range(k):
                out = [base[x] for x in out]
            return tuple(out)

        spec = CoverSpec(degree, {i: power(int(rng.integers(0, degree)))
                                  for i in range(len(T.pairings))})
        if not check_cover_spec(T, spec):
            return spec
    raise ComplexError("failed to sample an admissible cover assignment")


# ---------------------------------------------------------------------------
# wire format


def to_wire(T: Triangulation) -> dict:
    return {
        "dim": T.dim,
        "simplices": T.simplex_count,
        "pairings": [
            {"a": [p.a, p.facet_a], "b": [p.b, p.facet_b], "map": list(p.vertex_map)}
            for p in T.pairings
        ],
    }


def from_wire(data: dict, name: str | None = None) -> Triangulation:
    try:
        dim = int(data["dim"])
        count = int(data["simplices"])
        pairings = tuple(
            Pairing(int(rec["a"][0]), int(rec["a"][1]),
                    int(rec["b"][0]), int(rec["b"][1]),
                    tuple(int(v) for v in rec["map"]))
            for rec in data["pairings"]
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ComplexError(f"malformed triangulation data: {exc}") from exc
    labels = {"name": name} if name else None
    T = Triangulation(dim, count, pairings, labels)
    report = validate(T)
    if not report.valid:
        raise ComplexError(f"invalid triangulation: {'; '.join(report.errors)}")
    return T


def cover_spec_to_wire(spec: CoverSpec) -> dict:
    return {"degree": spec.degree,
            "perms": {str(i): [v + 1 for v in perm] for i, perm in spec.perms.items()}}


def cover_spec_from_wire(data: dict) -> CoverSpec:
    """Parse {"degree": d, "perms": {pairing-id: one-line permutation of 1..d}}."""
    try:
        d = int(data["degree"])
        perms = {int(k): tuple(int(v) - 1 for v in perm)
                 for k, perm in data["perms"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ComplexError(f"malformed cover spec: {exc}") from exc
    return CoverSpec(d, perms)


# ---------------------------------------------------------------------------
# instance-level inequality dashboard


@dataclass(frozen=True)
class DashboardReport:
    name: str
    dim: int
    simplices: int
    f_vector: tuple
    euler: int
    euler_bound: int          # 2^{n+1} t
    euler_bound_ok: bool
    orientable: bool
    cycle_l1: Fraction | None
    cycle_ok: bool | None
    annotations: tuple


#: Known constants for the built-in complexes, quoted in the dashboard.
KNOWN_ANNOTATIONS = {
    "sphere": ("sigma(S^2) = 2: this 2-simplex triangulation is minimal",),
    "torus": ("||T^2|| = 0 and sigma_inf(T^2) = 0: covers beat any fixed triangulation",),
    "figure-eight": (
        "vol(N) = 2 v_3 ~ 2.029883 and ||N|| = 2 for the figure-eight complement",
        "c(N) = 2: two ideal regular tetrahedra realize the complexity",
    ),
    "boundary-4-simplex": ("chi(S^3) = 0; five tetrahedra triangulate S^3",),
}


def inequality_dashboard(T: Triangulation) -> DashboardReport:
    """Checkable sides of the volume/complexity inequalities on one instance.

    The simplex count t is an upper bound for the Delta-complexity, the
    Euler characteristic obeys |chi| <= 2^{n+1} t, and the alternated
    fundamental cycle has L1 size at most t (computed exactly when the
    complex is closed and oriented).
    """
    counts = cell_counts(T)
    orient = orientability(T)
    rep = validate(T)
    n, t = T.dim, T.simplex_count
    cycle_l1 = cycle_ok = None
    if orient.orientable and rep.closed:
        z = fundamental_cycle(T)
        cycle_l1 = z.l1()
        cycle_ok = verify_cycle(T, z)
    name = (T.labels or {}).get("name", "unnamed")
    base = name.split("-cover-")[0]
    return DashboardReport(
        name=name,
        dim=n,
        simplices=t,
        f_vector=counts.f_vector,
        euler=counts.euler,
        euler_bound=2 ** (n + 1) * t,
        euler_bound_ok=abs(counts.euler) <= 2 ** (n + 1) * t,
        orientable=orient.orientable,
        cycle_l1=cycle_l1,
        cycle_ok=cycle_ok,
        annotations=KNOWN_ANNOTATIONS.get(base, ()),
    )
