import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypstab.minkowski import (
    GeometryError,
    finite_point,
    ideal_point,
    lift_klein,
    mink,
    random_isometry,
)
from hypstab.simplex import (
    DegenerateSimplexError,
    DualVectorError,
    GeodesicSimplex,
    all_facet_duals,
    apply_isometry,
    barycentric_coords,
    barycentric_point,
    dihedral_angle,
    distance_point_to_simplex,
    facet_dual,
    incenter_inradius,
    is_degenerate,
    min_face_clearance,
    nearest_point_on_simplex,
    orientation_sign,
    random_nondegenerate_simplex,
    regular_ideal_simplex,
    straighten,
)


def ideal_triangle(angles=(90.0, 210.0, 330.0)):
    verts = tuple(
        ideal_point([1.0, math.cos(math.radians(a)), math.sin(math.radians(a))])
        for a in angles
    )
    return GeodesicSimplex(verts, 2)


# ---------------------------------------------------------------------------
# regular ideal simplex


def test_regular_ideal_construction_oracle():
    # pairwise Klein dot products equal -1/k
    for n, k in ((2, 2), (3, 3), (5, 3), (6, 6)):
        K = regular_ideal_simplex(n, k)
        w = K.klein_vertices()
        g = w @ w.T
        for i in range(k + 1):
            assert g[i, i] == pytest.approx(1.0, abs=1e-12)
            for j in range(i + 1, k + 1):
                assert g[i, j] == pytest.approx(-1.0 / k, abs=1e-12)


def test_regular_ideal_triangle_symmetric():
    K = regular_ideal_simplex(2)
    inc = incenter_inradius(K)
    # all three tangency values identical by symmetry
    vals = [-mink(inc.incenter.rep, d.q) for d in all_facet_duals(K)]
    assert max(vals) - min(vals) < 1e-12


def test_dihedral_regular_values():
    # n=3: all six dihedral angles pi/3; n=4: arccos(1/3)
    K3 = regular_ideal_simplex(3)
    for i, j in itertools.combinations(range(4), 2):
        assert dihedral_angle(K3, i, j) == pytest.approx(math.pi / 3, abs=1e-10)
    K4 = regular_ideal_simplex(4)
    assert dihedral_angle(K4, 0, 1) == pytest.approx(math.acos(1.0 / 3.0), abs=1e-10)
    for n in range(3, 9):
        K = regular_ideal_simplex(n)
        assert dihedral_angle(K, 0, 1) == pytest.approx(math.acos(1.0 / (n - 1)), abs=1e-10)


def test_dihedral_relabeling_invariance():
    K = regular_ideal_simplex(3)
    rng = np.random.default_rng(0)
    Kp = random_nondegenerate_simplex(3, rng)
    a = dihedral_angle(Kp, 1, 2)
    # relabel vertices fixing {1, 2}
    Kq = Kp.face((0, 1, 2, 3))
    Kswap = GeodesicSimplex((Kp.vertices[3], Kp.vertices[1], Kp.vertices[2],
                             Kp.vertices[0]), 3)
    assert dihedral_angle(Kswap, 1, 2) == pytest.approx(a, abs=1e-12)
    del K, Kq


# ---------------------------------------------------------------------------
# facet duals


def test_facet_dual_defining_conditions():
    rng = np.random.default_rng(42)
    for n in (3, 4, 5):
        for _ in range(200):
            K = random_nondegenerate_simplex(n, rng)
            for i in range(n + 1):
                d = facet_dual(K, i)
                assert mink(d.q, d.q) == pytest.approx(1.0, abs=1e-9)
                for j in range(n + 1):
                    val = mink(d.q, K.vertices[j].rep)
                    if j == i:
                        assert val < 1e-10
                    else:
                        assert abs(val) < 1e-10


def test_facet_dual_regular_3():
    # -<q_i, q_j> = 1/2 = cos(alpha_3); oracle: the direct linear solve above
    K = regular_ideal_simplex(3)
    duals = all_facet_duals(K)
    for i, j in itertools.combinations(range(4), 2):
        assert -mink(duals[i].q, duals[j].q) == pytest.approx(0.5, abs=1e-12)


def test_facet_dual_equivariance():
    rng = np.random.default_rng(5)
    for k in range(10):
        K = random_nondegenerate_simplex(3, rng)
        g = random_isometry(3, seed=500 + k)
        qg = facet_dual(apply_isometry(g, K), 2).q
        gq = g.apply_vector(facet_dual(K, 2).q)
        assert np.max(np.abs(qg - gq)) < 1e-8


# ---------------------------------------------------------------------------
# incenter


def test_incenter_regular_is_symmetric_center():
    for n in (2, 3, 4, 5):
        K = regular_ideal_simplex(n)
        inc = incenter_inradius(K)
        expect = np.zeros(n + 1)
        expect[0] = 1.0
        assert np.max(np.abs(inc.incenter.rep - expect)) < 1e-10
        assert inc.inradius == pytest.approx(math.asinh(1.0 / math.sqrt(n * n - 1)),
                                             abs=1e-12)


def test_incenter_tangency_and_interior():
    rng = np.random.default_rng(7)
    for n in (3, 4, 5):
        for _ in range(20):
            K = random_nondegenerate_simplex(n, rng)
            res = incenter_inradius(K)
            sr = math.sinh(res.inradius)
            for d in all_facet_duals(K):
                assert abs(sr + mink(res.incenter.rep, d.q)) < 1e-9
            bary = barycentric_coords(K, res.incenter)
            assert np.min(bary) > 0.0


def test_incenter_isometry_invariance():
    rng = np.random.default_rng(9)
    K = random_nondegenerate_simplex(4, rng)
    r = incenter_inradius(K).inradius
    for k in range(10):
        g = random_isometry(4, seed=900 + k)
        assert incenter_inradius(apply_isometry(g, K)).inradius == pytest.approx(r, abs=1e-8)


def _side_normal(a, b, center):
    """Independent dual construction in Minkowski 3-space: q ~ J (a x b)."""
    q = np.cross(a.rep, b.rep)
    q[0] = -q[0]
    q = q / math.sqrt(mink(q, q))
    if mink(center, q) > 0:
        q = -q
    return q


def test_ideal_triangle_inradius_bisection_oracle():
    """Independent 2-D computation: bisection on the symmetric axis for the
    point equidistant from the three sides, using J-cross-product normals."""
    K = ideal_triangle()
    v0, v1, v2 = K.vertices
    center = np.array([1.0, 0.0, 0.0])
    q_opp = _side_normal(v1, v2, center)    # side opposite the top vertex
    q_adj = _side_normal(v0, v1, center)    # an adjacent side

    def gap(t):
        p = np.array([math.cosh(t), 0.0, math.sinh(t)])
        return math.asinh(-mink(p, q_opp)) - math.asinh(-mink(p, q_adj))

    lo, hi = -1.0, 1.0
    assert gap(lo) * gap(hi) < 0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if gap(lo) * gap(mid) <= 0:
            hi = mid
        else:
            lo = mid
    t_star = 0.5 * (lo + hi)
    p = np.array([math.cosh(t_star), 0.0, math.sinh(t_star)])
    r_oracle = math.asinh(-mink(p, q_opp))

    res = incenter_inradius(K)
    assert res.inradius == pytest.approx(r_oracle, abs=1e-8)
    # classical closed form: inradius of the ideal triangle is asinh(1/sqrt 3)
    assert res.inradius == pytest.approx(math.asinh(1.0 / math.sqrt(3.0)), abs=1e-10)


# ---------------------------------------------------------------------------
# degeneracy and orientation


def test_is_degenerate():
    # two ideal endpoints of a geodesic plus a finite point on it
    K = GeodesicSimplex((lift_klein([1.0, 0.0], ideal=True),
                         lift_klein([-1.0, 0.0], ideal=True),
                         lift_klein([0.5, 0.0])), 2)
    assert is_degenerate(K)
    assert not is_degenerate(regular_ideal_simplex(3))
    v = lift_klein([0.3, 0.1, 0.0])
    K = GeodesicSimplex((v, v, lift_klein([0.0, 0.5, 0.1]),
                         lift_klein([0.0, 0.0, 0.9])), 3)
    assert is_degenerate(K)


def test_orientation_sign():
    K = regular_ideal_simplex(3)
    s = orientation_sign(K)
    assert s in (-1, 1)
    vs = list(K.vertices)
    vs[0], vs[1] = vs[1], vs[0]
    assert orientation_sign(GeodesicSimplex(tuple(vs), 3)) == -s
    deg = GeodesicSimplex((lift_klein([1.0, 0.0], ideal=True),
                           lift_klein([-1.0, 0.0], ideal=True),
                           lift_klein([0.5, 0.0])), 2)
    assert orientation_sign(deg) == 0


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(4))))
def test_orientation_alternates(perm):
    K = regular_ideal_simplex(3)
    s0 = orientation_sign(K)
    sign = 1
    seq = list(perm)
    for i in range(4):
        for j in range(i + 1, 4):
            if seq[i] > seq[j]:
                sign = -sign
    Kp = GeodesicSimplex(tuple(K.vertices[i] for i in perm), 3)
    assert orientation_sign(Kp) == sign * s0


# ---------------------------------------------------------------------------
# straighten


def test_straighten_idempotent_and_equivariant():
    rng = np.random.default_rng(12)
    K = random_nondegenerate_simplex(3, rng)
    assert straighten(K.vertices).vertices == K.vertices
    g = random_isometry(3, seed=77)
    a = apply_isometry(g, straighten(K.vertices))
    b = straighten(tuple(g.apply(v) for v in K.vertices))
    for va, vb in zip(a.vertices, b.vertices):
        assert np.max(np.abs(va.rep - vb.rep)) < 1e-10
    # face restriction commutes with straightening
    sub = (0, 2, 3)
    assert straighten([K.vertices[i] for i in sub]).vertices == K.face(sub).vertices


# ---------------------------------------------------------------------------
# point-to-simplex distance


def test_distance_zero_inside():
    # arccosh near 1 resolves distances only to ~sqrt(eps) ~ 2e-8
    K = regular_ideal_simplex(3)
    p = barycentric_point(K, [0.25, 0.25, 0.25, 0.25])
    assert distance_point_to_simplex(p, K) == pytest.approx(0.0, abs=1e-7)
    # incenter of a facet lies on the facet
    F = K.facet(0)
    inc = incenter_inradius(F).incenter
    assert distance_point_to_simplex(inc, F) == pytest.approx(0.0, abs=1e-7)


def test_distance_on_geodesic_is_zero_and_hyperplane_case():
    p0 = finite_point([1.0, 0.0, 0.0])
    E1 = GeodesicSimplex((lift_klein([1.0, 0.0], ideal=True),
                          lift_klein([-1.0, 0.0], ideal=True)), 2)
    assert distance_point_to_simplex(p0, E1) == pytest.approx(0.0, abs=1e-12)
    # p off the y-axis geodesic: distance equals the closed-form hyperplane
    # distance because the minimum is interior
    p = lift_klein([0.5, 0.0])
    E2 = GeodesicSimplex((lift_klein([0.0, 1.0], ideal=True),
                          lift_klein([0.0, -1.0], ideal=True)), 2)
    from hypstab.minkowski import dist_to_hyperplane
    q = np.array([0.0, -1.0, 0.0])
    assert distance_point_to_simplex(p, E2) == pytest.approx(
        dist_to_hyperplane(p, q), abs=1e-12)
    assert distance_point_to_simplex(p, E2) == pytest.approx(math.log(3.0) / 2.0,
                                                             abs=1e-12)


def test_distance_project_vs_pgd_and_grid():
    rng = np.random.default_rng(21)
    for n, k in ((2, 1), (2, 2), (3, 2), (3, 3)):
        for trial in range(6):
            E = random_nondegenerate_simplex(n, rng, k=k)
            p = lift_klein(0.9 * rng.uniform(-1, 1, size=n) / math.sqrt(n))
            d_proj = distance_point_to_simplex(p, E)
            d_pgd = distance_point_to_simplex(p, E, method="pgd", seed=trial)
            assert d_pgd == pytest.approx(d_proj, abs=5e-6)
            # dense-grid audit: grid points lie in E, so d_proj <= every
            # grid distance, and the grid minimum converges from above
            steps = 400 if k == 1 else 60
            grid = _grid_distances(p, E, steps)
            assert d_proj <= grid + 1e-9
            assert grid - d_proj < 6.0 / steps


def _grid_distances(p, E, steps):
    m = E.k + 1
    axes = [np.linspace(0, 1, steps + 1) for _ in range(m - 1)]
    pts = np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, m - 1)
    lam = np.concatenate([pts, 1.0 - pts.sum(axis=1, keepdims=True)], axis=1)
    lam = lam[lam[:, -1] >= 0]
    s = lam @ E.rep_matrix
    nrm = -(-s[:, 0] ** 2 + (s[:, 1:] ** 2).sum(axis=1))
    good = nrm > 1e-12
    s = s[good] / np.sqrt(nrm[good])[:, None]
    cosh_d = s[:, 0] * p.rep[0] - s[:, 1:] @ p.rep[1:]
    return float(np.arccosh(np.clip(cosh_d.min(), 1.0, None)))


def test_distance_errors():
    p = finite_point([1.0, 0, 0])
    deg = GeodesicSimplex((lift_klein([1.0, 0.0], ideal=True),
                           lift_klein([-1.0, 0.0], ideal=True),
                           lift_klein([0.5, 0.0])), 2)
    with pytest.raises(DegenerateSimplexError):
        distance_point_to_simplex(p, deg)


# ---------------------------------------------------------------------------
# face clearance


def test_clearance_positive_and_symmetric():
    for n in (3, 4, 5):
        c = min_face_clearance(regular_ideal_simplex(n))
        assert c > 0.05


def test_clearance_isometry_invariance():
    for n in (3, 4):
        K = regular_ideal_simplex(n)
        c = min_face_clearance(K)
        for k in range(5):
            g = random_isometry(n, seed=40 + k)
            assert min_face_clearance(apply_isometry(g, K)) == pytest.approx(c, abs=1e-6)


def test_clearance_n3_grid_oracle():
    """Brute-force the minimizing pair at n=3: center of edge (0,1) against
    the facet (1,2,3), sampled on a barycentric grid."""
    K = regular_ideal_simplex(3)
    c = min_face_clearance(K)
    # edge center: foot of the ambient incenter on the ideal edge
    inc = incenter_inradius(K).incenter
    edge = K.face((0, 1))
    _, center = nearest_point_on_simplex(inc, edge)
    facet = K.face((1, 2, 3))
    grid = _grid_distances(center, facet, 1000)
    assert c <= grid + 1e-9
    assert grid - c < 2e-3


def test_clearance_symmetric_pairs_equal():
    # vertex permutations are isometries of the regular simplex, so the
    # minimum and each symmetric pair distance are label-independent
    for n in (3, 4):
        K = regular_ideal_simplex(n)
        c = min_face_clearance(K)
        perms = ([1, 0] + list(range(2, n + 1)),
                 list(range(1, n + 1)) + [0])
        for perm in perms:
            Kp = GeodesicSimplex(tuple(K.vertices[i] for i in perm), n)
            assert min_face_clearance(Kp) == pytest.approx(c, abs=1e-10)
    # an explicit symmetric pair at n=4: centers of two faces related by a
    # transposition are equidistant from the corresponding facets
    K = regular_ideal_simplex(4)
    c1 = incenter_inradius(K.face((0, 1, 2))).incenter
    d1 = distance_point_to_simplex(c1, K.face((1, 2, 3, 4)))
    c2 = incenter_inradius(K.face((0, 1, 3))).incenter
    d2 = distance_point_to_simplex(c2, K.face((1, 3, 2, 4)))
    assert d1 == pytest.approx(d2, abs=1e-10)


def test_clearance_requires_full_dimension():
    with pytest.raises(GeometryError):
        min_face_clearance(regular_ideal_simplex(4, 3))


def test_ideal_edge_has_no_incenter():
    edge = regular_ideal_simplex(3).face((0, 1))
    with pytest.raises(DualVectorError):
        incenter_inradius(edge)


def test_finite_segment_incenter_is_midpoint():
    a = lift_klein([0.0, 0.0, 0.0])
    b = lift_klein([0.6, 0.0, 0.0])
    seg = GeodesicSimplex((a, b), 3)
    res = incenter_inradius(seg)
    from hypstab.minkowski import distance
    assert distance(a, res.incenter) == pytest.approx(distance(b, res.incenter), abs=1e-12)
    assert res.inradius == pytest.approx(distance(a, b) / 2, abs=1e-12)
