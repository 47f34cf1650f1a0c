"""Guard sets read off proper colorings of a triangulated supergraph.

The route here is indirect: chord every face of the input into
triangles, four-color the result, and then harvest guard sets from the
color classes.  A maximal matching between two classes, topped up with
one edge per unmatched vertex, touches every vertex of both classes, so
any face showing three distinct colors is guarded by three of the six
pair covers.  Unions of two disjoint matchings are smaller but can miss
quadrilateral faces, which get patched edge by edge; the accounting
stays exact, nine sets summing to 3n plus the number of patches.

Faces of six or more sides are not chorded arbitrarily: three chords
anchor a triangle on every other corner, which blocks the one coloring
pattern (classes alternating around an even face) that would let a
matching union slip past a big face.

Two further constructions live here because they share the machinery: a
guard two-coloring (no face monochromatic, every face with a same-color
boundary edge) yields three sets summing to n, and a seeded variant
threads far-apart quadrilaterals through the matchings so that a third
of the vertices suffices even though quads are present.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .embedding import (
    BudgetExceeded,
    EdgeGuardError,
    GuardSet,
    PlaneGraph,
    VerificationFailed,
)
from .reductions import _is_kface, _validate_step, find_low_degree_step


class UntriangulatableFace(EdgeGuardError):
    """A face offered no legal diagonal while more than three sides remained."""


class Timeout(EdgeGuardError):
    """The coloring search exceeded its node budget."""


class ColoringMismatch(EdgeGuardError):
    """A coloring lacks the structure the guard construction relies on."""


class NotAGuardColoring(EdgeGuardError):
    """The supplied two-coloring fails the guard coloring conditions."""


class QuadsTooClose(EdgeGuardError):
    """Two quadrilateral faces are fewer than three hops apart."""


class SeedConflict(EdgeGuardError):
    """Seed edges for marked quads could not be threaded into a matching."""


@dataclass(frozen=True)
class TriangulationResult:
    """A chorded supergraph plus the records needed to reason about it.

    ``added`` pairs every new edge id with the face of the input it was
    drawn through.  ``deviations`` lists faces whose anchor corners
    coincided, where plain ear cutting was used instead.  ``quad_seeds``
    is only populated in three_hop mode and holds one record per marked
    quad: either the id of a neighboring triangle face or the four
    vertices of a merge corner.
    """

    supergraph: PlaneGraph
    added: tuple[tuple[int, int], ...]
    deviations: tuple[int, ...]
    quad_seeds: tuple[dict, ...]


@dataclass(frozen=True)
class VertexColoring:
    colors: dict[int, int]


@dataclass(frozen=True)
class TwoColoring:
    colors: dict[int, int]


@dataclass(frozen=True)
class Matching:
    edges: frozenset[int]
    seeds: frozenset[int]


@dataclass(frozen=True)
class GuardFamily:
    """Nine guard sets in a fixed order with their patch count."""

    labels: tuple[str, ...]
    sets: tuple[frozenset[int], ...]
    augmentations: int


# ----------------------------------------------------------------------
# triangulation

def _chord(work: PlaneGraph, fid: int, walk, i: int, j: int, source: int, added):
    """Split a single-walk face along tail positions i and j."""
    u, v = walk[i][0], walk[j][0]
    au = sum(1 for p in range(i) if walk[p][0] == u)
    av = sum(1 for p in range(j) if walk[p][0] == v)
    work, fa, fb, eid = work._insert_edge_full(u, v, fid, at=(au, av))
    added.append((eid, source))
    return work, (fa, work.face(fa).walks[0]), (fb, work.face(fb).walks[0])


def _sweep(work: PlaneGraph, fid: int, walk, source: int, added) -> PlaneGraph:
    """Cut ears off a single-walk face until only triangles remain."""
    while len(walk) > 3:
        k = len(walk)
        tails = [a for a, _ in walk]
        start = tails.index(min(tails))
        for off in range(k):
            i = (start + off) % k
            j = (i + 2) % k
            if tails[i] != tails[j] and not work.has_edge(tails[i], tails[j]):
                work, pa, pb = _chord(work, fid, walk, i, j, source, added)
                fid, walk = pa if len(pa[1]) > 3 else pb
                break
        else:
            raise UntriangulatableFace(f"face {source} ran out of diagonals")
    return work


def _anchor_triple(work: PlaneGraph, fid: int, walk, source: int, added):
    """Chord a triangle onto corners 0-2-4 counted from the lowest vertex.

    Mutual adjacency of those three corners is what the matching-union
    sets need on big faces.  Chords whose edge already exists elsewhere
    are skipped; the adjacency they would add is already there.  Returns
    None when the corners repeat a vertex and no triangle can anchor.
    """
    k = len(walk)
    tails = [a for a, _ in walk]
    r = tails.index(min(tails))
    anchors = {q: walk[(r + q) % k] for q in (0, 2, 4)}
    if len({d[0] for d in anchors.values()}) < 3:
        return None
    plan = ((0, 2), (2, 4), (4, 0))
    cur = (fid, walk)
    pieces = []
    for step, (a, b) in enumerate(plan):
        da, db = anchors[a], anchors[b]
        u, v = da[0], db[0]
        if work.has_edge(u, v):
            continue
        cw = cur[1]
        work, pa, pb = _chord(work, cur[0], cw, cw.index(da), cw.index(db), source, added)
        anchors[a] = (u, v)
        needed = {anchors[x] for ab in plan[step + 1:] for x in ab}
        if needed <= set(pa[1]):
            cur, shed = pa, pb
        else:
            cur, shed = pb, pa
        pieces.append(shed)
    pieces.append(cur)
    return work, pieces


def _connect_walks(work: PlaneGraph, added) -> PlaneGraph:
    # every face must be a single boundary walk before chords make sense
    while True:
        face = min(
            (f for f in work.faces if len(f.walks) > 1),
            key=lambda f: f.id,
            default=None,
        )
        if face is None:
            return work
        u = min(a for a, _ in face.walks[0])
        v = min(a for a, _ in face.walks[1])
        work, _, _, eid = work._insert_edge_full(u, v, face.id, at=(0, 0))
        added.append((eid, face.id))


def _flank_neighbor(walk, a: int, b: int) -> int:
    """a's other walk neighbor at the corner carrying edge a-b."""
    if (a, b) in walk:
        return walk[walk.index((a, b)) - 1][0]
    i = walk.index((b, a))
    return walk[(i + 1) % len(walk)][1]


def _merge_quad(work, q, added, quad_seeds, pending, consumed):
    """Open a marked quad into its neighbor across the lowest edge.

    With edge u-v gone the merged face is re-chorded so that u and v
    both sit on triangles whose third corners are w_f and w_q; any of
    those corners can later seed a matching that guards the quad.
    Occurrences are pinned by darts rather than vertices since the
    neighbor face may visit a vertex twice.
    """
    if q in consumed:
        raise SeedConflict(f"marked quad {q} was merged away by a neighbor")
    qwalk = work.face(q).walks[0]
    e = min(work.edge_id(a, b) for a, b in qwalk)
    u, v = work.ends(e)
    f1, f2 = work.edge_faces(e)
    partner = f2 if f1 == q else f1
    if partner in pending:
        pwalk, psource = pending.pop(partner)
    else:
        pwalk = work.face(partner).walks[0]
        psource = partner
        consumed.add(partner)
    consumed.add(q)

    w_q = _flank_neighbor(qwalk, u, v)
    w_f = _flank_neighbor(pwalk, u, v)
    quad_seeds.append(
        {"kind": "merge", "quad": q, "u": u, "v": v, "w_f": w_f, "w_q": w_q}
    )

    # anchor darts survive the removal and pin the merged corner
    carrier_uv = qwalk if (u, v) in qwalk else pwalk
    carrier_vu = qwalk if (v, u) in qwalk else pwalk
    dv = carrier_uv[(carrier_uv.index((u, v)) + 1) % len(carrier_uv)]
    du = carrier_vu[(carrier_vu.index((v, u)) + 1) % len(carrier_vu)]
    dwq = next(d for d in qwalk if d[0] == w_q)
    survivor = next(d for d in qwalk if d not in ((u, v), (v, u)))

    work = work.remove_edge(e)
    mfid = work.dart_face(survivor)
    mwalk = work.face(mfid).walks[0]
    p = mwalk.index(du)
    dwf = mwalk[(p + 1) % len(mwalk)] if du[1] == w_f else mwalk[p - 1]

    state = [mfid, mwalk]
    spare = []

    def chord(x, dx, y, dy):
        nonlocal work
        if work.has_edge(x, y):
            return
        cw = state[1]
        work, pa, pb = _chord(work, state[0], cw, cw.index(dx), cw.index(dy), q, added)
        keep, shed = (pa, pb) if du in pa[1] else (pb, pa)
        state[0], state[1] = keep
        spare.append(shed)

    chord(v, dv, w_q, dwq)
    if dv not in state[1]:
        dv = (v, w_q)
    if dwq not in state[1]:
        dwq = (w_q, v)
    chord(v, dv, w_f, dwf)
    if dwf not in state[1]:
        dwf = (w_f, v)
    if dwq not in state[1]:
        dwq = (w_q, v)
    chord(w_f, dwf, w_q, dwq)
    spare.append(tuple(state))
    for pfid, pw in spare:
        if len(pw) > 3:
            pending[pfid] = (pw, psource)
    return work


def _merge_marked(work, marked, added, quad_seeds, pending, consumed):
    marked = sorted(set(marked))
    for q in marked:
        if not _is_kface(work.face(q), 4):
            raise UntriangulatableFace(f"face {q} is not a simple quad")
    merge_later = []
    for q in marked:
        walk = work.face(q).walks[0]
        tri = []
        for dart in walk:
            f1, f2 = work.edge_faces(work.edge_id(*dart))
            other = f2 if f1 == q else f1
            if _is_kface(work.face(other), 3):
                tri.append(other)
        if tri:
            # a neighboring triangle face will carry the seed; no surgery
            quad_seeds.append({"kind": "triangle", "quad": q, "face": min(tri)})
        else:
            merge_later.append(q)
    for q in merge_later:
        work = _merge_quad(work, q, added, quad_seeds, pending, consumed)
    return work


def triangulate(
    g: PlaneGraph, mode: str = "standard", marked_quads=None
) -> TriangulationResult:
    """Chord every face of a plane graph into triangles.

    Multi-walk faces are first stitched together, then faces of six or
    more sides get an anchored chord triangle and everything else loses
    ears from its lowest corner until only triangles remain.  In mode
    "three_hop" the faces listed in ``marked_quads`` are merged into a
    neighbor before chording, recording per quad the corner vertices
    that seed selection needs.
    """
    if mode not in ("standard", "three_hop"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "three_hop" and marked_quads:
        raise ValueError("marked_quads needs mode='three_hop'")
    if g.n < 3:
        raise UntriangulatableFace("need at least three vertices")
    if any(g.degree(v) == 0 for v in g.vertices):
        raise UntriangulatableFace("isolated vertices cannot be chorded in")

    added: list[tuple[int, int]] = []
    deviations: list[int] = []
    quad_seeds: list[dict] = []
    work = _connect_walks(g, added)
    snapshot = sorted(f.id for f in work.faces)
    pending: dict[int, tuple[tuple, int]] = {}
    consumed: set[int] = set()
    if mode == "three_hop":
        work = _merge_marked(work, marked_quads or (), added, quad_seeds, pending, consumed)

    for fid in snapshot:
        if fid in consumed:
            continue
        walk = work.face(fid).walks[0]
        if len(walk) == 3:
            continue
        if len(walk) >= 6:
            got = _anchor_triple(work, fid, walk, fid, added)
            if got is None:
                deviations.append(fid)
                work = _sweep(work, fid, walk, fid, added)
                continue
            work, pieces = got
            for pfid, pwalk in pieces:
                if len(pwalk) > 3:
                    work = _sweep(work, pfid, pwalk, fid, added)
        else:
            work = _sweep(work, fid, walk, fid, added)
    for pfid, (pwalk, source) in sorted(pending.items()):
        if len(pwalk) > 3:
            work = _sweep(work, pfid, pwalk, source, added)

    assert work.m == 3 * work.n - 6, "triangulation fell short of 3n-6"
    return TriangulationResult(
        supergraph=work,
        added=tuple(added),
        deviations=tuple(deviations),
        quad_seeds=tuple(quad_seeds),
    )


# ----------------------------------------------------------------------
# coloring

def four_color(g: PlaneGraph, budget: int = 10_000_000) -> VertexColoring:
    """Proper coloring with colors 1..4 by saturation-guided backtracking."""
    verts = sorted(g.vertices)
    adj = {v: set(g.neighbors(v)) for v in verts}
    colors: dict[int, int] = {}
    sat = {v: set() for v in verts}
    nodes = 0

    def pick():
        best, best_key = None, None
        for v in verts:
            if v in colors:
                continue
            key = (-len(sat[v]), -len(adj[v]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def solve():
        nonlocal nodes
        v = pick()
        if v is None:
            return True
        for c in (1, 2, 3, 4):
            if c in sat[v]:
                continue
            nodes += 1
            if nodes > budget:
                raise Timeout(f"coloring search passed {budget} nodes")
            colors[v] = c
            touched = [u for u in adj[v] if u not in colors and c not in sat[u]]
            for u in touched:
                sat[u].add(c)
            if solve():
                return True
            for u in touched:
                sat[u].discard(c)
            del colors[v]
        return False

    if not solve():
        raise ColoringMismatch("no proper four-coloring found")
    for v in verts:
        for w in adj[v]:
            assert colors[v] != colors[w], "coloring broke properness"
    return VertexColoring(colors=colors)


# ----------------------------------------------------------------------
# guard sets from a four-coloring

_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
_PAIRINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def _lowest_edge_at(g: PlaneGraph, v: int) -> int:
    return min(g.edge_id(v, w) for w in g.neighbors(v))


def _greedy_matching(g, col, pair, preset=()):
    """Maximal matching between two color classes, lowest edge ids first."""
    want = set(pair)
    medges = set()
    matched = set()
    for e in preset:
        a, b = g.ends(e)
        medges.add(e)
        matched.update((a, b))
    for e in sorted(g.edge_ids):
        a, b = g.ends(e)
        if {col[a], col[b]} == want and a not in matched and b not in matched:
            medges.add(e)
            matched.update((a, b))
    return frozenset(medges), frozenset(matched)


def _cover_classes(g, col, pair, medges, matched):
    # every vertex of both classes ends up under a guard edge
    got = set(medges)
    for v in sorted(g.vertices):
        if col[v] in pair and v not in matched:
            got.add(_lowest_edge_at(g, v))
    return frozenset(got)


def _endpoints(g, edges):
    got = set()
    for e in edges:
        got.update(g.ends(e))
    return got


def guard_sets_from_coloring(g: PlaneGraph, coloring: VertexColoring) -> GuardFamily:
    """Nine guard sets from a four-coloring: six pair covers, three unions.

    The coloring must color every vertex and show at least three colors
    on every face, which a coloring of a triangulated supergraph always
    does.  Each union of two disjoint matchings is patched with one edge
    per quadrilateral face it misses; any quad is already guarded by at
    least two of the three unions, so the patches total at most the
    number of quads and the nine sizes sum to exactly 3n plus patches.
    """
    col = coloring.colors
    missing = [v for v in g.vertices if v not in col]
    if missing:
        raise ColoringMismatch(f"coloring misses vertices {missing[:4]}")
    for v in g.vertices:
        if g.degree(v) == 0:
            raise ColoringMismatch(f"vertex {v} is isolated and can host no guard")
    for face in g.faces:
        b = face.boundary_vertices
        if b and len({col[v] for v in b}) < 3:
            raise ColoringMismatch(f"face {face.id} sees fewer than three colors")

    labels = []
    sets = []
    matchings = {}
    for pair in _PAIRS:
        medges, matched = _greedy_matching(g, col, pair)
        matchings[pair] = (medges, matched)
        labels.append(f"{pair[0]}{pair[1]}")
        sets.append(_cover_classes(g, col, pair, medges, matched))

    quads = [f for f in sorted(g.faces, key=lambda f: f.id) if _is_kface(f, 4)]
    for face in quads:
        b = face.boundary_vertices
        hits = sum(
            1
            for p1, p2 in _PAIRINGS
            if b & _endpoints(g, matchings[p1][0] | matchings[p2][0])
        )
        assert hits >= 2, f"quad {face.id} escapes {3 - hits} matching unions"

    augmented = 0
    for p1, p2 in _PAIRINGS:
        got = set(matchings[p1][0] | matchings[p2][0])
        covered = _endpoints(g, got)
        for face in quads:
            b = face.boundary_vertices
            if b & covered:
                continue
            e = min(g.edge_id(v, w) for v in b for w in g.neighbors(v))
            got.add(e)
            covered.update(g.ends(e))
            augmented += 1
        labels.append(f"{p1[0]}{p1[1]}{p2[0]}{p2[1]}")
        sets.append(frozenset(got))

    total = sum(len(s) for s in sets)
    assert total == 3 * g.n + augmented, "family size accounting drifted"
    return GuardFamily(labels=tuple(labels), sets=tuple(sets), augmentations=augmented)


def chromatic_guard(g: PlaneGraph) -> GuardSet:
    """Smallest of the nine coloring-derived sets, bound n/3 + alpha/9."""
    work = g.delete_vertices([v for v in g.vertices if g.degree(v) == 0])
    if len(work.faces) == 1:
        chosen = frozenset([min(work.edge_ids)]) if work.m else frozenset()
    else:
        tri = triangulate(work)
        coloring = four_color(tri.supergraph)
        family = guard_sets_from_coloring(work, coloring)
        chosen = min(family.sets, key=len)
    alpha = g.stats().alpha
    bound = Fraction(g.n, 3) + Fraction(alpha, 9)
    result = GuardSet(edges=chosen, algorithm="chromatic", claimed_bound=bound)
    report = g.verify_guard_set(result.edges)
    if not report.ok:
        raise VerificationFailed(f"faces {list(report.unguarded)} end up unguarded")
    return result


# ----------------------------------------------------------------------
# guard two-colorings

def _guard_coloring_flaw(g: PlaneGraph, col) -> Optional[str]:
    for face in g.faces:
        b = face.boundary_vertices
        if not b:
            continue
        if len({col[v] for v in b}) < 2:
            return f"face {face.id} is monochromatic"
        if not any(col[a] == col[b2] for w in face.walks for a, b2 in w):
            return f"face {face.id} lacks a monochromatic boundary edge"
    return None


def find_guard_coloring(g: PlaneGraph) -> Optional[TwoColoring]:
    """Exhaustive search for a guard two-coloring, or None.

    A guard coloring leaves no face monochromatic yet gives every face
    a boundary edge with both ends the same color.  One vertex is
    pinned to break the color-swap symmetry; faces are checked the
    moment their last boundary vertex is assigned.
    """
    if g.n > 24:
        raise BudgetExceeded(f"two-coloring search is capped at 24 vertices, got {g.n}")
    verts = sorted(g.vertices)
    if not verts:
        return TwoColoring(colors={})
    specs = []
    by_vertex: dict[int, list[int]] = {v: [] for v in verts}
    for face in g.faces:
        b = face.boundary_vertices
        if not b:
            continue
        fi = len(specs)
        specs.append((b, tuple(d for w in face.walks for d in w)))
        for v in b:
            by_vertex[v].append(fi)
    remaining = [len(b) for b, _ in specs]
    col: dict[int, int] = {}

    def face_ok(fi):
        b, darts = specs[fi]
        if len({col[v] for v in b}) < 2:
            return False
        return any(col[a] == col[b2] for a, b2 in darts)

    def assign(idx):
        if idx == len(verts):
            return True
        v = verts[idx]
        for c in (0, 1) if idx else (0,):
            col[v] = c
            done = []
            ok = True
            for fi in by_vertex[v]:
                remaining[fi] -= 1
                done.append(fi)
                if remaining[fi] == 0 and not face_ok(fi):
                    ok = False
                    break
            if ok and assign(idx + 1):
                return True
            for fi in done:
                remaining[fi] += 1
            del col[v]
        return False

    if assign(0):
        return TwoColoring(colors=dict(col))
    return None


def guard_from_guard_coloring(g: PlaneGraph, coloring: TwoColoring) -> GuardSet:
    """Three sets from a guard coloring, sizes summing to n; keep the best.

    Matchings inside each color class catch the monochromatic boundary
    edges, their union guards every face by maximality, and each class
    cover falls back on the other color being present.
    """
    work = g.delete_vertices([v for v in g.vertices if g.degree(v) == 0])
    col = coloring.colors
    missing = [v for v in work.vertices if v not in col]
    if missing:
        raise NotAGuardColoring(f"coloring misses vertices {missing[:4]}")
    flaw = _guard_coloring_flaw(work, col)
    if flaw:
        raise NotAGuardColoring(flaw)

    sets = []
    both: set[int] = set()
    for c in (0, 1):
        medges: set[int] = set()
        matched: set[int] = set()
        for e in sorted(work.edge_ids):
            a, b = work.ends(e)
            if col[a] == c and col[b] == c and a not in matched and b not in matched:
                medges.add(e)
                matched.update((a, b))
        got = set(medges)
        for v in sorted(work.vertices):
            if col[v] == c and v not in matched:
                got.add(_lowest_edge_at(work, v))
        sets.append(frozenset(got))
        both |= medges
    sets.append(frozenset(both))
    assert sum(len(s) for s in sets) == work.n, "class cover accounting drifted"

    chosen = min(sets, key=len)
    result = GuardSet(
        edges=chosen, algorithm="guard-coloring", claimed_bound=Fraction(g.n, 3)
    )
    report = g.verify_guard_set(result.edges)
    if not report.ok:
        raise VerificationFailed(f"faces {list(report.unguarded)} end up unguarded")
    return result


# ----------------------------------------------------------------------
# far apart quads

def _seeded_pair_cover(work: PlaneGraph, tri: TriangulationResult, coloring) -> frozenset[int]:
    """Smallest of the 12/34 covers and their union, seeded per marked quad."""
    col = coloring.colors
    seeds: dict[tuple[int, int], list[int]] = {(1, 2): [], (3, 4): []}
    for rec in tri.quad_seeds:
        if rec["kind"] == "triangle":
            walk = work.face(rec["face"]).walks[0]
            hits = [(a, b) for a, b in walk if {col[a], col[b]} in ({1, 2}, {3, 4})]
            if len(hits) != 1:
                raise ColoringMismatch(
                    f"triangle {rec['face']} offers {len(hits)} seed edges"
                )
            a, b = hits[0]
            pair = (1, 2) if {col[a], col[b]} == {1, 2} else (3, 4)
            seeds[pair].append(work.edge_id(a, b))
        else:
            # Candidates: the quad's own edges plus the flank edge u-w_f.
            # One of them is always monochromatic in a class: if the
            # three proper quad edges all straddle the classes, the
            # v-w_q chord makes {v, w_q} exhaust one class, and the
            # u-w_q and u-w_f edges then pin {u, w_f} to the other.
            walk = work.face(rec["quad"]).walks[0]
            cand = {work.edge_id(a, b) for a, b in walk}
            if work.has_edge(rec["u"], rec["w_f"]):
                cand.add(work.edge_id(rec["u"], rec["w_f"]))
            hits = [
                e
                for e in sorted(cand)
                if {col[work.ends(e)[0]], col[work.ends(e)[1]]} in ({1, 2}, {3, 4})
            ]
            if not hits:
                raise SeedConflict(f"quad {rec['quad']} has no class edge to seed")
            a, b = work.ends(hits[0])
            pair = (1, 2) if {col[a], col[b]} == {1, 2} else (3, 4)
            seeds[pair].append(hits[0])

    matchings = {}
    for pair, lst in seeds.items():
        used: set[int] = set()
        for e in lst:
            a, b = work.ends(e)
            if a in used or b in used:
                raise SeedConflict(f"seed edges of classes {pair} collide at a vertex")
            used.update((a, b))
        medges, matched = _greedy_matching(work, col, pair, preset=lst)
        matchings[pair] = Matching(edges=medges, seeds=frozenset(lst)), matched

    candidates = []
    union: set[int] = set()
    for pair in ((1, 2), (3, 4)):
        matching, matched = matchings[pair]
        candidates.append(_cover_classes(work, col, pair, matching.edges, matched))
        union |= matching.edges
    candidates.append(frozenset(union))
    assert sum(len(s) for s in candidates) == work.n, "pair cover accounting drifted"
    return min(candidates, key=len)


def three_hop_guard(g: PlaneGraph) -> GuardSet:
    """Guard with at most n/3 edges when quad faces are three hops apart.

    Low-degree peeling runs first and refuses to mint new quads (a
    degree-1 vertex on a six-sided face takes two neighbors with it);
    the residual is triangulated with every surviving quad merged or
    seeded, and a seeded pair cover guards what the peeling left.
    """
    marked = sorted(f.id for f in g.faces if _is_kface(f, 4))
    for q1, q2 in combinations(marked, 2):
        d = g.face_hop_distance(q1, q2)
        if d < 3:
            raise QuadsTooClose(f"faces {q1} and {q2} sit {d} hops apart")

    chosen: set[int] = set()
    work = g
    while len(work.faces) > 1:
        step = find_low_degree_step(work, protect_quads=True)
        if step is None:
            break
        _validate_step(work, step, Fraction(1, 3))
        chosen.update(step.guard_edges)
        work = work.delete_vertices(step.removed_vertices)

    if len(work.faces) == 1:
        # peeling may already cover everything; only spend an edge if not
        if work.m and not g.verify_guard_set(frozenset(chosen)).ok:
            chosen.add(min(work.edge_ids))
    else:
        live = {f.id for f in work.faces}
        tri = triangulate(
            work, mode="three_hop", marked_quads=[q for q in marked if q in live]
        )
        coloring = four_color(tri.supergraph)
        col = coloring.colors
        for face in work.faces:
            b = face.boundary_vertices
            if b and len({col[v] for v in b}) < 3:
                raise ColoringMismatch(
                    f"residual face {face.id} sees fewer than three colors"
                )
        chosen |= _seeded_pair_cover(work, tri, coloring)

    result = GuardSet(
        edges=frozenset(chosen), algorithm="3hop", claimed_bound=Fraction(g.n, 3)
    )
    report = g.verify_guard_set(result.edges)
    if not report.ok:
        raise VerificationFailed(f"faces {list(report.unguarded)} end up unguarded")
    return result
