"""Named instances and reproducible random generators.

Families cover the interesting regimes for edge guards: disjoint
triangles hit the n/3 lower bound exactly, fans are 2-degenerate,
random triangulations and their prunings exercise the reduction and
coloring pipelines, platonic solids give regular fixtures, far_quads
plants quadrilateral faces pairwise at least three hops apart, and
figure_ngc is the ten vertex graph with no guard two-coloring.

Everything is a pure function of its spec: the same family, size, seed
and options serialize to the same bytes.  Random families draw from a
private ``random.Random`` so results do not depend on global state.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Optional

from .embedding import EdgeGuardError, PlaneGraph, build_from_rotation


class GenerationFailed(EdgeGuardError):
    """A generator ran out of room or its result failed post checks."""


FAMILIES = (
    "disjoint_triangles",
    "fan_outerplanar",
    "random_triangulation",
    "random_plane",
    "platonic",
    "far_quads",
    "figure_ngc",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Everything needed to rebuild a graph bit for bit."""

    family: str
    size: int
    seed: int = 0
    options: Mapping[str, object] = field(default_factory=dict)


# ----------------------------------------------------------------------
# geometry helpers

def _doc_from_points(coords: dict, edges) -> dict:
    """Rotation document of a straight-line drawing, clockwise per vertex."""
    nbrs = {v: [] for v in coords}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotations = []
    for v in sorted(coords):
        x0, y0 = coords[v]
        rotations.append(
            sorted(
                nbrs[v],
                key=lambda w: math.atan2(coords[w][1] - y0, coords[w][0] - x0),
                reverse=True,
            )
        )
    return {
        "n": len(coords),
        "rotations": rotations,
        "coords": [coords[v] for v in sorted(coords)],
    }


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


# ----------------------------------------------------------------------
# families

def _disjoint_triangles(k: int) -> PlaneGraph:
    coords = {}
    edges = []
    for i in range(k):
        base = 3 * i
        x = 2.5 * i
        coords[base] = (x, 0.0)
        coords[base + 1] = (x + 1.0, 0.0)
        coords[base + 2] = (x + 0.5, 0.9)
        edges += [(base, base + 1), (base + 1, base + 2), (base + 2, base)]
    return build_from_rotation(_doc_from_points(coords, edges))


def _fan(n: int) -> PlaneGraph:
    # apex 0 sees the whole path along an arc above it
    coords = {0: (0.0, 0.0)}
    edges = []
    for i in range(1, n):
        t = math.radians(170 - 160 * (i - 1) / max(1, n - 2))
        coords[i] = (math.cos(t), math.sin(t))
        edges.append((0, i))
        if i > 1:
            edges.append((i - 1, i))
    return build_from_rotation(_doc_from_points(coords, edges))


def _jitter_point(rng: random.Random, a, b, c):
    w = [rng.uniform(0.15, 0.85) for _ in range(3)]
    s = sum(w)
    return (
        (w[0] * a[0] + w[1] * b[0] + w[2] * c[0]) / s,
        (w[0] * a[1] + w[1] * b[1] + w[2] * c[1]) / s,
    )


def _triangle_soup(n: int, rng: random.Random):
    """Incremental insertion into a fixed triangle plus random flips."""
    pts = {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (0.5, 0.866)}
    tris = [(0, 1, 2)]
    for v in range(3, n):
        i = rng.randrange(len(tris))
        a, b, c = tris.pop(i)
        pts[v] = _jitter_point(rng, pts[a], pts[b], pts[c])
        tris += [(a, b, v), (b, c, v), (c, a, v)]

    def edge_map():
        em = {}
        for ti, tri in enumerate(tris):
            for u, v in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                em.setdefault(frozenset((u, v)), []).append(ti)
        return em

    for _ in range(3 * n):
        em = edge_map()
        inner = sorted(
            (tuple(sorted(e)) for e, ts in em.items() if len(ts) == 2)
        )
        if not inner:
            break
        a, b = inner[rng.randrange(len(inner))]
        t1, t2 = em[frozenset((a, b))]
        c = next(x for x in tris[t1] if x not in (a, b))
        d = next(x for x in tris[t2] if x not in (a, b))
        if frozenset((c, d)) in em:
            continue
        # the flip is legal only across a strictly convex quadrilateral
        s1, s2 = _cross(pts[a], pts[b], pts[c]), _cross(pts[a], pts[b], pts[d])
        s3, s4 = _cross(pts[c], pts[d], pts[a]), _cross(pts[c], pts[d], pts[b])
        if s1 * s2 >= 0 or s3 * s4 >= 0:
            continue
        tris[t1] = (a, c, d)
        tris[t2] = (b, c, d)

    edges = {frozenset((u, v)) for tri in tris for u, v in zip(tri, tri[1:] + tri[:1])}
    return pts, [tuple(sorted(e)) for e in edges]


def _random_triangulation(n: int, rng: random.Random) -> PlaneGraph:
    pts, edges = _triangle_soup(n, rng)
    g = build_from_rotation(_doc_from_points(pts, edges))
    st = g.stats()
    if st.m != 3 * n - 6 or any(f.side_count != 3 for f in g.faces):
        raise GenerationFailed(f"soup of {n} points did not triangulate")
    return g


def _random_plane(n: int, rng: random.Random, p: float, min_degree: int) -> PlaneGraph:
    g = _random_triangulation(n, rng)
    for e in sorted(g.edge_ids):
        if rng.random() >= p:
            continue
        u, v = g.ends(e)
        if min_degree and min(g.degree(u), g.degree(v)) <= min_degree:
            continue
        g = g.remove_edge(e)
    return g


_PHI = (1 + math.sqrt(5)) / 2

_SOLIDS = {
    "tetrahedron": ([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], (4, 6)),
    "octahedron": (
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
        (6, 12),
    ),
    "cube": (sorted(product((-1, 1), repeat=3)), (8, 12)),
    "icosahedron": (
        sorted(
            (x, y, z)
            for sx, sy in product((-1, 1), repeat=2)
            for x, y, z in (
                (0, sx, sy * _PHI),
                (sx, sy * _PHI, 0),
                (sx * _PHI, 0, sy),
            )
        ),
        (12, 30),
    ),
    "dodecahedron": (
        sorted(product((-1, 1), repeat=3))
        + sorted(
            (x, y, z)
            for sx, sy in product((-1, 1), repeat=2)
            for x, y, z in (
                (0, sx / _PHI, sy * _PHI),
                (sx / _PHI, sy * _PHI, 0),
                (sx * _PHI, 0, sy / _PHI),
            )
        ),
        (20, 30),
    ),
}

_SIZE_TO_SOLID = {4: "tetrahedron", 6: "octahedron", 8: "cube",
                  12: "icosahedron", 20: "dodecahedron"}


def _platonic(name: str) -> PlaneGraph:
    """Rotations of a solid read off its 3D skeleton.

    Neighbors of a vertex are sorted clockwise as seen from outside,
    in the tangent plane of the (radial) outward normal.
    """
    pts, (want_n, want_m) = _SOLIDS[name]
    d2 = lambda p, q: sum((a - b) ** 2 for a, b in zip(p, q))
    dmin = min(d2(p, q) for p, q in combinations(pts, 2))
    nbrs = {v: [] for v in range(len(pts))}
    for (i, p), (j, q) in combinations(enumerate(pts), 2):
        if d2(p, q) < dmin * 1.000001:
            nbrs[i].append(j)
            nbrs[j].append(i)

    rotations = []
    for v, p in enumerate(pts):
        norm = math.sqrt(d2(p, (0, 0, 0)))
        nv = tuple(x / norm for x in p)
        ref = min(((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                  key=lambda e: abs(sum(a * b for a, b in zip(e, nv))))
        dot = sum(a * b for a, b in zip(ref, nv))
        e1 = tuple(a - dot * b for a, b in zip(ref, nv))
        n1 = math.sqrt(sum(a * a for a in e1))
        e1 = tuple(a / n1 for a in e1)
        e2 = (
            nv[1] * e1[2] - nv[2] * e1[1],
            nv[2] * e1[0] - nv[0] * e1[2],
            nv[0] * e1[1] - nv[1] * e1[0],
        )

        def angle(w):
            d = tuple(a - b for a, b in zip(pts[w], p))
            return math.atan2(
                sum(a * b for a, b in zip(d, e2)),
                sum(a * b for a, b in zip(d, e1)),
            )

        rotations.append(sorted(nbrs[v], key=angle, reverse=True))

    g = build_from_rotation({"n": len(pts), "rotations": rotations})
    if (g.n, g.m) != (want_n, want_m):
        raise GenerationFailed(f"{name} skeleton came out as n={g.n} m={g.m}")
    return g


# the two far_quads gadgets; derived by tracing their face walks
#
# fort: a quad with a roof triangle and two wrap edges, minimum degree 3,
# attach vertex t adjacent to every quad corner.  local ids t,ul,ur,ll,lr.
# collar: hub z, an eight ring, four corners forming the quad; the quad
# only ever borders pentagons, forcing the merge path in three_hop mode.

def _fort_rotations(base: int, arm: int) -> dict:
    t, ul, ur, ll, lr = range(base, base + 5)
    return {
        t: [ul, ur, lr, arm, ll],
        ul: [ll, ur, t],
        ur: [ul, lr, t],
        ll: [lr, ul, t],
        lr: [ur, ll, t],
    }


def _collar_rotations(base: int, arm: int) -> dict:
    z = base
    r = [base + 1 + j for j in range(8)]
    c = [base + 9 + j for j in range(4)]
    rot = {z: [arm] + r}
    for j in range(8):
        if j % 2 == 0:
            rot[r[j]] = [c[j // 2], r[(j + 1) % 8], z, r[(j - 1) % 8]]
        else:
            rot[r[j]] = [r[(j + 1) % 8], z, r[(j - 1) % 8]]
    for j in range(4):
        rot[c[j]] = [c[(j + 1) % 4], r[2 * j], c[(j - 1) % 4]]
    return rot


def _far_quads(k: int, rng: random.Random, separation: int) -> PlaneGraph:
    mids = max(1, separation - 2)
    sizes = {"fort": 5, "collar": 13}
    total = k * (1 + mids)
    if total + sizes["fort"] * k > 60:
        raise GenerationFailed(f"{k} gadgets do not fit in 60 vertices")
    kinds = []
    for i in range(k):
        # leave room for the remaining gadgets at their smallest
        reserve = sizes["fort"] * (k - 1 - i)
        kind = rng.choice(("fort", "collar"))
        if kind == "collar" and total + sizes["collar"] + reserve > 60:
            kind = "fort"
        kinds.append(kind)
        total += sizes[kind]

    rot: dict[int, list] = {}
    for i in range(k):
        rot[i] = [x for x in (i - 1, i + 1) if 0 <= x < k]
    base = k + k * mids
    for i, kind in enumerate(kinds):
        chain = [i] + [k + i * mids + j for j in range(mids)] + [base]
        for prev, cur, nxt in zip(chain, chain[1:], chain[2:] + [None]):
            if nxt is None:
                break
            rot[cur] = [prev, nxt]
        rot[i].append(chain[1])
        maker = _fort_rotations if kind == "fort" else _collar_rotations
        rot.update(maker(base, chain[-2]))
        base += sizes[kind]

    g = build_from_rotation({"n": base, "rotations": [rot[v] for v in range(base)]})
    quads = [
        f.id
        for f in g.faces
        if f.side_count == 4
        and len(f.walks) == 1
        and len({a for a, _ in f.walks[0]}) == 4
    ]
    if len(quads) != k or g.stats().alpha != k:
        raise GenerationFailed(f"expected {k} quads, found {len(quads)}")
    for q1, q2 in combinations(quads, 2):
        if g.face_hop_distance(q1, q2) < 3:
            raise GenerationFailed(f"quads {q1} and {q2} ended up too close")
    return g


def figure_no_guard_coloring() -> PlaneGraph:
    """The ten vertex plane graph admitting no guard two-coloring.

    An outer triangle, a six-ring around a hub, and six connectors
    placed so that any two-coloring is forced around the ring and
    strands one of the three quadrilateral faces without a
    monochromatic edge.  Vertices 0..2 are the outer triangle, 3..8
    the ring, 9 the hub.
    """
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
    return build_from_rotation(_doc_from_points(coords, edges))


# ----------------------------------------------------------------------
# dispatch

_BUDGET = 400


def generate(spec: GeneratorSpec) -> PlaneGraph:
    """Build the graph a spec names; equal specs give equal bytes."""
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}")
    opts = dict(spec.options or {})
    rng = random.Random(spec.seed)
    n = spec.size

    if spec.family == "disjoint_triangles":
        if not 1 <= n <= _BUDGET // 3:
            raise GenerationFailed(f"triangle count {n} out of range")
        return _disjoint_triangles(n)
    if spec.family == "fan_outerplanar":
        if not 3 <= n <= _BUDGET:
            raise GenerationFailed(f"fan size {n} out of range")
        return _fan(n)
    if spec.family == "random_triangulation":
        if not 3 <= n <= _BUDGET:
            raise GenerationFailed(f"triangulation size {n} out of range")
        return _random_triangulation(n, rng)
    if spec.family == "random_plane":
        if not 3 <= n <= _BUDGET:
            raise GenerationFailed(f"graph size {n} out of range")
        p = float(opts.get("p", 0.25))
        min_degree = int(opts.get("min_degree", 0))
        return _random_plane(n, rng, p, min_degree)
    if spec.family == "platonic":
        name = opts.get("name") or _SIZE_TO_SOLID.get(n)
        if name not in _SOLIDS:
            raise ValueError(f"no platonic solid for size {n} / name {name!r}")
        return _platonic(name)
    if spec.family == "far_quads":
        if n < 1:
            raise GenerationFailed("need at least one quad")
        separation = int(opts.get("separation", 3))
        return _far_quads(n, rng, separation)
    return figure_no_guard_coloring()
