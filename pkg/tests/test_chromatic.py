import math
from fractions import Fraction

import pytest

from edgeguard.chromatic import (
    ColoringMismatch,
    NotAGuardColoring,
    QuadsTooClose,
    Timeout,
    TwoColoring,
    UntriangulatableFace,
    VertexColoring,
    chromatic_guard,
    find_guard_coloring,
    four_color,
    guard_from_guard_coloring,
    guard_sets_from_coloring,
    three_hop_guard,
    triangulate,
)
from edgeguard.embedding import BudgetExceeded, allowance, build_from_rotation

TRIANGLE = {"n": 3, "rotations": [[1, 2], [2, 0], [0, 1]]}
PATH3 = {"n": 3, "rotations": [[1], [0, 2], [1]]}
C4 = {"n": 4, "rotations": [[3, 1], [0, 2], [3, 1], [2, 0]]}
K4 = {"n": 4, "rotations": [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]]}
WHEEL5 = {"n": 5, "rotations": [[1, 2, 3, 4], [0, 4, 2], [0, 1, 3], [0, 2, 4], [0, 3, 1]]}
QUAD_PENDANT = {"n": 5, "rotations": [[4, 3, 1], [0, 2], [3, 1], [2, 0], [0]]}
# a triangle with two pendant spokes; its outer walk revisits vertex 0
PENDANTS_ON_TRIANGLE = {"n": 5, "rotations": [[1, 2, 3, 4], [0], [0], [4, 0], [0, 3]]}
TWO_TRIANGLES = {
    "n": 6,
    "rotations": [[1, 2], [2, 0], [0, 1], [4, 5], [5, 3], [3, 4]],
}
CUBE = {
    "n": 8,
    "rotations": [[1, 4, 2], [3, 5, 0], [0, 6, 3], [2, 7, 1], [0, 5, 6], [1, 7, 4], [2, 4, 7], [3, 6, 5]],
}
OCTAHEDRON = {
    "n": 6,
    "rotations": [[1, 3, 4, 2], [0, 2, 5, 3], [5, 1, 0, 4], [4, 0, 1, 5], [5, 2, 0, 3], [1, 2, 4, 3]],
}
ICOSAHEDRON = {
    "n": 12,
    "rotations": [
        [8, 2, 1, 6, 4], [0, 2, 7, 5, 6], [8, 3, 7, 1, 0], [10, 9, 7, 2, 8],
        [10, 8, 0, 6, 11], [11, 6, 1, 7, 9], [4, 0, 1, 5, 11], [9, 5, 1, 2, 3],
        [10, 3, 2, 0, 4], [11, 5, 7, 3, 10], [4, 11, 9, 3, 8], [4, 6, 5, 9, 10],
    ],
}
DODECAHEDRON = {
    "n": 20,
    "rotations": [
        [10, 8, 9], [15, 11, 10], [9, 14, 13], [13, 17, 15], [16, 12, 8],
        [11, 18, 16], [14, 12, 19], [19, 18, 17], [0, 4, 14], [0, 2, 15],
        [1, 16, 0], [17, 5, 1], [18, 6, 4], [2, 19, 3], [8, 6, 2],
        [9, 3, 1], [10, 5, 4], [3, 7, 11], [5, 7, 12], [13, 6, 7],
    ],
}


def build(doc):
    return build_from_rotation(doc)


def ring(k):
    return build({"n": k, "rotations": [[(i - 1) % k, (i + 1) % k] for i in range(k)]})


def embed_points(coords, edges):
    """Rotation system of a straight-line drawing, clockwise per vertex."""
    nbrs = {v: [] for v in coords}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rot = []
    for v in sorted(coords):
        x0, y0 = coords[v]
        rot.append(
            sorted(
                nbrs[v],
                key=lambda w: math.atan2(coords[w][1] - y0, coords[w][0] - x0),
                reverse=True,
            )
        )
    return build({"n": len(coords), "rotations": rot})


def collar():
    """Hub, an eight-ring, and four outer corners forming a quad.

    The quad face is flanked by pentagons only, so a three-hop
    triangulation has to merge it rather than seed off a triangle.
    """
    coords = {0: (0.0, 0.0)}
    edges = []
    for i in range(8):
        a = math.pi / 2 - math.pi * i / 4
        coords[1 + i] = (math.cos(a), math.sin(a))
        edges.append((0, 1 + i))
        edges.append((1 + i, 1 + (i + 1) % 8))
    for i in range(4):
        a = math.pi / 2 - math.pi * i / 2
        coords[9 + i] = (2 * math.cos(a), 2 * math.sin(a))
        edges.append((9 + i, 1 + 2 * i))
        edges.append((9 + i, 9 + (i + 1) % 4))
    return embed_points(coords, edges)


def no_guard_coloring_graph():
    """Ten vertices whose forced two-coloring strands a quad face."""
    coords = {9: (0.0, 0.0), 2: (0.0, 2.2)}
    for i in range(6):
        ang = math.radians(120 + 60 * i)
        coords[3 + i] = (math.cos(ang), math.sin(ang))
    coords[0] = (2.2 * math.cos(math.radians(210)), 2.2 * math.sin(math.radians(210)))
    coords[1] = (2.2 * math.cos(math.radians(330)), 2.2 * math.sin(math.radians(330)))
    edges = (
        [(0, 1), (1, 2), (2, 0)]
        + [(3 + i, 3 + (i + 1) % 6) for i in range(6)]
        + [(9, 3 + i) for i in range(6)]
        + [(2, 3), (2, 8), (0, 4), (0, 5), (1, 6), (1, 7)]
    )
    return embed_points(coords, edges)


def check_result(g, result):
    assert g.verify_guard_set(result.edges).ok
    assert len(result.edges) <= allowance(result.claimed_bound)


def quad_face_ids(g):
    return [f.id for f in g.faces if f.side_count == 4 and len(f.walks) == 1]


class TestTriangulate:
    def test_triangle_untouched(self):
        r = triangulate(build(TRIANGLE))
        assert r.added == ()
        assert r.supergraph.m == 3

    def test_hexagon(self):
        r = triangulate(ring(6))
        assert r.supergraph.m == 12
        assert r.deviations == ()
        assert all(f.side_count == 3 for f in r.supergraph.faces)

    def test_hexagon_anchor_corners(self):
        # every other corner of a six-face must come out mutually adjacent
        r = triangulate(ring(6))
        sg = r.supergraph
        assert sg.has_edge(0, 2) and sg.has_edge(2, 4) and sg.has_edge(4, 0)

    def test_c4_becomes_k4(self):
        r = triangulate(ring(4))
        sg = r.supergraph
        assert sg.m == 6
        for u in range(4):
            for v in range(u + 1, 4):
                assert sg.has_edge(u, v)

    def test_pentagon(self):
        r = triangulate(ring(5))
        assert r.supergraph.m == 9

    def test_ten_cycle(self):
        r = triangulate(ring(10))
        assert r.supergraph.m == 24
        assert r.deviations == ()

    def test_added_edges_are_fresh_and_tagged(self):
        g = ring(6)
        r = triangulate(g)
        fids = {f.id for f in g.faces}
        for eid, source in r.added:
            assert eid >= g.m
            assert source in fids

    def test_disconnected_input(self):
        g = build(TWO_TRIANGLES)
        r = triangulate(g)
        assert r.supergraph.m == 12
        assert r.supergraph.stats().f == 8

    def test_pendant_walk(self):
        r = triangulate(build(QUAD_PENDANT))
        assert r.supergraph.m == 9

    def test_repeated_anchor_falls_back(self):
        g = build(PENDANTS_ON_TRIANGLE)
        big = [f.id for f in g.faces if f.side_count == 7]
        r = triangulate(g)
        assert r.deviations == tuple(big)
        assert r.supergraph.m == 9

    def test_supergraph_is_consistent(self):
        for doc in (C4, QUAD_PENDANT, TWO_TRIANGLES, CUBE, DODECAHEDRON):
            r = triangulate(build(doc))
            r.supergraph.validate()
            assert r.supergraph.m == 3 * r.supergraph.n - 6

    def test_isolated_vertex_rejected(self):
        g = build({"n": 4, "rotations": [[1, 2], [2, 0], [0, 1], []]})
        with pytest.raises(UntriangulatableFace):
            triangulate(g)

    def test_tiny_graph_rejected(self):
        with pytest.raises(UntriangulatableFace):
            triangulate(build({"n": 2, "rotations": [[1], [0]]}))

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            triangulate(build(TRIANGLE), mode="fast")

    def test_marked_quads_need_mode(self):
        with pytest.raises(ValueError):
            triangulate(ring(4), marked_quads=[0])


class TestTriangulateThreeHop:
    def test_wheel_quad_seeds_off_triangle(self):
        g = build(WHEEL5)
        quads = quad_face_ids(g)
        assert len(quads) == 1
        r = triangulate(g, mode="three_hop", marked_quads=quads)
        assert r.supergraph.m == 9
        (rec,) = r.quad_seeds
        assert rec["kind"] == "triangle"
        assert rec["quad"] == quads[0]
        assert g.face(rec["face"]).side_count == 3

    def test_collar_quad_merges(self):
        g = collar()
        quads = quad_face_ids(g)
        assert len(quads) == 1
        r = triangulate(g, mode="three_hop", marked_quads=quads)
        r.supergraph.validate()
        assert r.supergraph.m == 3 * 13 - 6
        (rec,) = r.quad_seeds
        assert rec["kind"] == "merge"
        u, v, wf, wq = rec["u"], rec["v"], rec["w_f"], rec["w_q"]
        sg = r.supergraph
        # the quad edge is gone; both its ends sit on a w_f/w_q triangle
        assert not sg.has_edge(u, v)
        for x in (wf, wq):
            assert sg.has_edge(u, x) and sg.has_edge(v, x)
        assert sg.has_edge(wf, wq)
        # seed candidates stay adjacent to u in the input graph itself
        for x in (v, wf, wq):
            assert g.has_edge(u, x)

    def test_marked_face_must_be_simple_quad(self):
        g = build(WHEEL5)
        tri = [f.id for f in g.faces if f.side_count == 3][0]
        with pytest.raises(UntriangulatableFace):
            triangulate(g, mode="three_hop", marked_quads=[tri])


class TestFourColor:
    def test_triangle(self):
        g = build(TRIANGLE)
        col = four_color(g).colors
        assert len({col[0], col[1], col[2]}) == 3

    def test_k4_uses_all_four(self):
        col = four_color(build(K4)).colors
        assert set(col.values()) == {1, 2, 3, 4}

    def test_proper_on_triangulations(self):
        for doc in (OCTAHEDRON, ICOSAHEDRON):
            g = build(doc)
            col = four_color(g).colors
            assert set(col.values()) <= {1, 2, 3, 4}
            for e in g.edge_ids:
                a, b = g.ends(e)
                assert col[a] != col[b]

    def test_deterministic(self):
        g = build(ICOSAHEDRON)
        assert four_color(g).colors == four_color(g).colors

    def test_budget(self):
        with pytest.raises(Timeout):
            four_color(build(K4), budget=1)


class TestGuardFamily:
    def test_labels_fixed_order(self):
        g = build(OCTAHEDRON)
        fam = guard_sets_from_coloring(g, four_color(g))
        assert fam.labels == ("12", "13", "14", "23", "24", "34", "1234", "1324", "1423")

    def test_triangulation_needs_no_patches(self):
        g = build(ICOSAHEDRON)
        fam = guard_sets_from_coloring(g, four_color(g))
        assert fam.augmentations == 0
        assert sum(len(s) for s in fam.sets) == 3 * 12
        for s in fam.sets:
            assert g.verify_guard_set(s).ok

    def test_cube_accounting(self):
        g = build(CUBE)
        tri = triangulate(g)
        fam = guard_sets_from_coloring(g, four_color(tri.supergraph))
        assert sum(len(s) for s in fam.sets) == 3 * 8 + fam.augmentations
        assert fam.augmentations <= 6
        for s in fam.sets:
            assert g.verify_guard_set(s).ok

    def test_dodecahedron_pentagons_need_no_patches(self):
        g = build(DODECAHEDRON)
        tri = triangulate(g)
        fam = guard_sets_from_coloring(g, four_color(tri.supergraph))
        assert fam.augmentations == 0
        assert sum(len(s) for s in fam.sets) == 60
        for s in fam.sets:
            assert g.verify_guard_set(s).ok

    def test_missing_vertex_rejected(self):
        g = build(TRIANGLE)
        with pytest.raises(ColoringMismatch):
            guard_sets_from_coloring(g, VertexColoring(colors={0: 1, 1: 2}))

    def test_two_colored_face_rejected(self):
        g = ring(4)
        with pytest.raises(ColoringMismatch):
            guard_sets_from_coloring(g, VertexColoring(colors={0: 1, 1: 2, 2: 1, 3: 2}))

    def test_isolated_vertex_rejected(self):
        g = build({"n": 4, "rotations": [[1, 2], [2, 0], [0, 1], []]})
        col = VertexColoring(colors={0: 1, 1: 2, 2: 3, 3: 4})
        with pytest.raises(ColoringMismatch):
            guard_sets_from_coloring(g, col)


class TestChromaticGuard:
    def test_fixtures(self):
        docs = [K4, WHEEL5, CUBE, OCTAHEDRON, DODECAHEDRON, ICOSAHEDRON,
                QUAD_PENDANT, TWO_TRIANGLES, PENDANTS_ON_TRIANGLE]
        for doc in docs:
            g = build(doc)
            res = chromatic_guard(g)
            assert res.algorithm == "chromatic"
            check_result(g, res)

    def test_bound_counts_quads(self):
        g = build(CUBE)
        res = chromatic_guard(g)
        assert res.claimed_bound == Fraction(8, 3) + Fraction(6, 9)

    def test_single_face_shortcut(self):
        g = build(PATH3)
        res = chromatic_guard(g)
        assert res.edges == frozenset({0})
        check_result(g, res)

    def test_star(self):
        g = build({"n": 5, "rotations": [[1, 2, 3, 4], [0], [0], [0], [0]]})
        res = chromatic_guard(g)
        assert len(res.edges) == 1
        check_result(g, res)

    def test_isolated_vertices_stripped_first(self):
        g = build({"n": 4, "rotations": [[1, 2], [2, 0], [0, 1], []]})
        res = chromatic_guard(g)
        assert res.claimed_bound == Fraction(4, 3)
        check_result(g, res)


class TestGuardColoring:
    def test_k4_has_one(self):
        g = build(K4)
        col = find_guard_coloring(g)
        assert col is not None
        assert col.colors[0] == 0
        res = guard_from_guard_coloring(g, col)
        assert res.algorithm == "guard-coloring"
        assert len(res.edges) == 1
        check_result(g, res)

    def test_four_cycle(self):
        g = ring(4)
        col = find_guard_coloring(g)
        assert col is not None
        res = guard_from_guard_coloring(g, col)
        check_result(g, res)

    def test_triangle(self):
        g = build(TRIANGLE)
        col = find_guard_coloring(g)
        assert col is not None
        res = guard_from_guard_coloring(g, col)
        assert len(res.edges) == 1
        check_result(g, res)

    def test_forced_contradiction_graph(self):
        g = no_guard_coloring_graph()
        assert g.n == 10 and g.m == 21
        assert sorted(f.side_count for f in g.faces).count(4) == 3
        assert find_guard_coloring(g) is None

    def test_search_cap(self):
        rot = [[1]] + [[i - 1, i + 1] for i in range(1, 24)] + [[23]]
        g = build({"n": 25, "rotations": rot})
        with pytest.raises(BudgetExceeded):
            find_guard_coloring(g)

    def test_monochromatic_face_rejected(self):
        g = build(TRIANGLE)
        with pytest.raises(NotAGuardColoring):
            guard_from_guard_coloring(g, TwoColoring(colors={0: 0, 1: 0, 2: 0}))

    def test_alternating_quad_rejected(self):
        g = ring(4)
        with pytest.raises(NotAGuardColoring):
            guard_from_guard_coloring(g, TwoColoring(colors={0: 0, 1: 1, 2: 0, 3: 1}))

    def test_missing_vertex_rejected(self):
        g = ring(4)
        with pytest.raises(NotAGuardColoring):
            guard_from_guard_coloring(g, TwoColoring(colors={0: 0, 1: 1, 2: 0}))

    def test_cover_sizes_sum_to_n(self):
        # the three sets partition the vertex count exactly
        g = build(K4)
        col = find_guard_coloring(g)
        res = guard_from_guard_coloring(g, col)
        assert res.claimed_bound == Fraction(4, 3)


class TestThreeHop:
    def test_no_quads(self):
        for doc in (K4, ICOSAHEDRON):
            g = build(doc)
            res = three_hop_guard(g)
            assert res.algorithm == "3hop"
            assert res.claimed_bound == Fraction(g.n, 3)
            assert len(res.edges) <= g.n // 3
            check_result(g, res)

    def test_wheel_triangle_seed(self):
        g = build(WHEEL5)
        res = three_hop_guard(g)
        assert len(res.edges) <= 1
        check_result(g, res)

    def test_quad_pendant_peels(self):
        g = build(QUAD_PENDANT)
        res = three_hop_guard(g)
        assert len(res.edges) <= 1
        check_result(g, res)

    def test_collar_merge_path(self):
        g = collar()
        res = three_hop_guard(g)
        assert len(res.edges) <= 13 // 3
        check_result(g, res)

    def test_two_triangles_peel_completely(self):
        g = build(TWO_TRIANGLES)
        res = three_hop_guard(g)
        assert len(res.edges) <= 2
        check_result(g, res)

    def test_adjacent_quads_rejected(self):
        with pytest.raises(QuadsTooClose):
            three_hop_guard(build(CUBE))

    def test_quad_sharing_vertices_with_itself_rejected(self):
        # a bare four-cycle bounds two quads zero hops apart
        with pytest.raises(QuadsTooClose):
            three_hop_guard(ring(4))
