"""Iterated local reductions that assemble guard sets edge by edge.

Each reduction step names a few guard edges E' and a vertex set V' to
delete, keeping |E'| <= c|V'| for whatever ratio c the surrounding
algorithm claims; summed over a full run that yields at most c*n guard
edges.  Every face incident to a deleted vertex must already see one of
the step's guards, which is asserted per step, and the assembled guard
set is re-checked against the original graph, so a construction bug
surfaces as a hard error instead of a silently bad answer.

Edge ids are stable across deletion, which is what lets a step chosen
deep in the shrunken graph name edges of the original one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional

from .embedding import (
    EdgeGuardError,
    Face,
    GuardSet,
    PlaneGraph,
    VerificationFailed,
)


class StepNotFound(EdgeGuardError):
    """The step provider gave up while faces were still unguarded."""


class NotTwoDegenerate(EdgeGuardError):
    """Low-degree peeling stalled: the remaining graph has min degree > 2."""


class NoConfiguration(EdgeGuardError):
    """No reducible configuration was found where theory promises one."""


class InvalidWitness(EdgeGuardError):
    """A detected configuration did not support its step construction."""


@dataclass(frozen=True)
class Configuration:
    tag: str
    witness: dict


@dataclass(frozen=True)
class ReductionStep:
    guard_edges: frozenset[int]
    removed_vertices: frozenset[int]
    rule: str


def _is_kface(face: Face, k: int) -> bool:
    if len(face.walks) != 1:
        return False
    walk = face.walks[0]
    return len(walk) == k and len({a for a, _ in walk}) == k


def classify_edge(g: PlaneGraph, eid: int) -> str:
    """weak / semiweak / strong by how many flanking faces are triangles."""
    f1, f2 = g.edge_faces(eid)
    tri = int(_is_kface(g.face(f1), 3)) + int(_is_kface(g.face(f2), 3))
    return ("strong", "semiweak", "weak")[tri]


def _corners(g: PlaneGraph, u: int):
    """Rotation-consecutive neighbor pairs at u with their corner face id."""
    nbrs = g.neighbors(u)
    d = len(nbrs)
    out = []
    for i in range(d):
        x, y = nbrs[i], nbrs[(i + 1) % d]
        out.append((x, y, g.dart_face((u, y))))
    return out


def _third(g: PlaneGraph, fid: int, u: int, v: int) -> Optional[int]:
    """Apex of a triangle flank, or None when the flank is no triangle."""
    face = g.face(fid)
    if not _is_kface(face, 3):
        return None
    return next(a for a, _ in face.walks[0] if a not in (u, v))


def _step(g: PlaneGraph, pairs, removed, rule) -> ReductionStep:
    edges = frozenset(g.edge_id(a, b) for a, b in pairs)
    return ReductionStep(
        guard_edges=edges, removed_vertices=frozenset(removed), rule=rule
    )


def _pick(g: PlaneGraph, v: int, excluded) -> int:
    got = min((x for x in g.neighbors(v) if x not in excluded), default=None)
    if got is None:
        raise InvalidWitness(f"neighborhood of {v} is exhausted")
    return got


# ----------------------------------------------------------------------
# low degree peeling

def find_low_degree_step(g: PlaneGraph, protect_quads: bool = False) -> Optional[ReductionStep]:
    """Remove the lowest vertex of degree <= 2, guarding where needed.

    Degree 0 and 1 vertices go unguarded: no face disappears with them.
    With ``protect_quads`` a degree-1 vertex on a six-sided face takes
    its support and one more neighbor along, guarded by the edge between
    them, so the shrunken face never becomes a freshly minted quad.
    A degree-2 vertex takes an edge at its lowest neighbor as guard.
    Returns None once the minimum degree is 3 or more.
    """
    low = [v for v in g.vertices if g.degree(v) <= 1]
    if low:
        v = low[0]
        if protect_quads and g.degree(v) == 1:
            u = g.neighbors(v)[0]
            if g.face(g.dart_face((v, u))).side_count == 6:
                w = min(x for x in g.neighbors(u) if x != v)
                return _step(g, [(u, w)], {v, u, w}, "Degree0or1")
        return ReductionStep(frozenset(), frozenset({v}), "Degree0or1")
    deg2 = [v for v in g.vertices if g.degree(v) == 2]
    if deg2:
        v = deg2[0]
        u = min(g.neighbors(v))
        w = min(x for x in g.neighbors(u) if x != v)
        return _step(g, [(u, w)], {v, u, w}, "Degree2")
    return None


# ----------------------------------------------------------------------
# degree-3 handling and the small-vertex-on-a-triangle step

def _deg3_step(g: PlaneGraph, u: int) -> ReductionStep:
    """Reduce around a degree-3 vertex, no assumptions on its faces."""
    nbrs = sorted(g.neighbors(u))
    for v1, v2 in combinations(nbrs, 2):
        if g.has_edge(v1, v2):
            return _step(g, [(v1, v2)], {u, v1, v2}, "Deg3AdjacentNeighbors")
    v1, v2 = nbrs[0], nbrs[1]
    v1p = _pick(g, v1, {u})
    v2p = _pick(g, v2, {u, v1p})
    removed = {u, v1, v2, v1p, v2p}
    if len(removed) != 5:
        raise InvalidWitness(f"degree-3 reduction at {u} collapsed: {sorted(removed)}")
    return _step(g, [(v1, v1p), (v2, v2p)], removed, "Deg3Generic")


def _triangle_corner_pairs(g: PlaneGraph, u: int):
    pairs = [
        tuple(sorted((x, y))) for x, y, fid in _corners(g, u) if _is_kface(g.face(fid), 3)
    ]
    return sorted(set(pairs))


def _lebesgue_step(g: PlaneGraph, u: Optional[int] = None) -> ReductionStep:
    """Reduce at a vertex of degree at most 5 sitting on a triangle.

    Expects minimum degree 4.  At most two faces around u avoid the
    chosen triangle pair, and they share a neighbor of u, so one extra
    edge suffices for them.
    """
    if u is None:
        for cand in g.vertices:
            if g.degree(cand) <= 5 and _triangle_corner_pairs(g, cand):
                u = cand
                break
        else:
            raise NoConfiguration("no vertex of degree <= 5 on a triangle")
    pairs = _triangle_corner_pairs(g, u)
    if g.degree(u) > 5 or not pairs:
        raise InvalidWitness(f"vertex {u} is no small triangle vertex")
    v1, v2 = pairs[0]
    unguarded = [
        fid
        for fid in g.faces_at(u)
        if not (g.face(fid).boundary_vertices & {v1, v2})
    ]
    if not unguarded:
        return _step(g, [(v1, v2)], {u, v1, v2}, "LebesgueTriangle")
    v3 = None
    for cand in sorted(g.neighbors(u)):
        if cand in (v1, v2):
            continue
        if all(cand in g.face(fid).boundary_vertices for fid in unguarded):
            v3 = cand
            break
    if v3 is None:
        raise InvalidWitness(f"faces {sorted(unguarded)} around {u} share no neighbor")
    v3p = _pick(g, v3, {u, v1, v2})
    removed = {u, v1, v2, v3, v3p}
    if len(removed) != 5:
        raise InvalidWitness(f"triangle reduction at {u} collapsed: {sorted(removed)}")
    return _step(g, [(v1, v2), (v3, v3p)], removed, "LebesgueTriangle")


def find_lebesgue_configuration(g: PlaneGraph) -> Configuration:
    """Smallest-vertex light configuration; needs minimum degree 3.

    Checks, in order: a degree-3 vertex on a face with at most five
    sides, a degree-4 vertex on a triangle, a degree-5 vertex with at
    least four triangle corners.
    """
    for v in g.vertices:
        if g.degree(v) != 3:
            continue
        small = [fid for fid in g.faces_at(v) if g.face(fid).side_count <= 5]
        if small:
            return Configuration(
                "LebesgueTriangle", {"kind": "deg3_face5", "vertex": v, "face": small[0]}
            )
    for v in g.vertices:
        if g.degree(v) != 4:
            continue
        tris = sorted(fid for _, _, fid in _corners(g, v) if _is_kface(g.face(fid), 3))
        if tris:
            return Configuration(
                "LebesgueTriangle", {"kind": "deg4_triangle", "vertex": v, "face": tris[0]}
            )
    for v in g.vertices:
        if g.degree(v) != 5:
            continue
        tris = [fid for _, _, fid in _corners(g, v) if _is_kface(g.face(fid), 3)]
        if len(tris) >= 4:
            return Configuration(
                "LebesgueTriangle",
                {"kind": "deg5_triangles", "vertex": v, "face": min(tris)},
            )
    raise NoConfiguration("no light vertex configuration")


# ----------------------------------------------------------------------
# the eight reducible configurations for the 3n/8 bound

def find_borodin_configuration(g: PlaneGraph) -> Configuration:
    """First reducible configuration by fixed priority; min degree 3.

    Weak and semiweak edges at 3-vertices go first: the remaining rules
    build their guards out of triangle vertices and lean on those being
    degree 4 or more, which holds exactly because L1 and L4 are gone.
    """
    deg = {v: g.degree(v) for v in g.vertices}

    def edges_at(u):
        return [(v, g.edge_id(u, v)) for v in sorted(g.neighbors(u))]

    for want, tag, cap in (("weak", "L1", 10), ("semiweak", "L4", 8)):
        for u in g.vertices:
            if deg[u] != 3:
                continue
            for v, e in edges_at(u):
                if deg[v] <= cap and classify_edge(g, e) == want:
                    return Configuration(tag, {"u": u, "v": v})

    for u in g.vertices:
        if deg[u] != 4:
            continue
        for v, e in edges_at(u):
            if deg[v] <= 6 and classify_edge(g, e) == "weak":
                return Configuration("L2a", {"u": u, "v": v})

    for u in g.vertices:
        if deg[u] != 4:
            continue
        for v, e in edges_at(u):
            if deg[v] == 7 and classify_edge(g, e) == "weak":
                p = _third(g, g.dart_face((u, v)), u, v)
                q = _third(g, g.dart_face((v, u)), u, v)
                if any(
                    classify_edge(g, g.edge_id(v, a)) == "weak" for a in (p, q)
                ):
                    return Configuration("L2b", {"u": u, "v": v})

    for u in g.vertices:
        if deg[u] != 5:
            continue
        tris = [fid for _, _, fid in _corners(g, u) if _is_kface(g.face(fid), 3)]
        if len(tris) < 4:
            continue
        for v, e in edges_at(u):
            if deg[v] <= 6 and classify_edge(g, e) == "weak":
                return Configuration("L3", {"u": u, "v": v})

    for u in g.vertices:
        if deg[u] != 4:
            continue
        for v, e in edges_at(u):
            if deg[v] <= 5 and classify_edge(g, e) == "semiweak":
                return Configuration("L5", {"u": u, "v": v})

    for u in g.vertices:
        if deg[u] != 3:
            continue
        for v, e in edges_at(u):
            if deg[v] > 5:
                continue
            quads = sorted(fid for fid in g.edge_faces(e) if _is_kface(g.face(fid), 4))
            if quads:
                return Configuration("L6", {"u": u, "v": v, "face": quads[0]})

    for face in g.faces:
        if not _is_kface(face, 5):
            continue
        verts = [a for a, _ in face.walks[0]]
        if sum(1 for x in verts if deg[x] == 3) >= 4:
            return Configuration("L7", {"face": face.id})

    raise NoConfiguration("no reducible configuration at minimum degree 3")


def _patch_around(g: PlaneGraph, v: int, endpoints: set, used: set):
    """One more guard edge for the faces at v that E' does not reach.

    Those faces share a neighbor of v; the edge leaves that neighbor
    along the lowest such face.  Returns None when nothing is missing.
    """
    unguarded = sorted(
        fid
        for fid in g.faces_at(v)
        if not (g.face(fid).boundary_vertices & endpoints)
    )
    if not unguarded:
        return None
    vp = None
    for cand in sorted(g.neighbors(v)):
        if cand in used:
            continue
        if all(cand in g.face(fid).boundary_vertices for fid in unguarded):
            vp = cand
            break
    if vp is None:
        raise InvalidWitness(f"faces {unguarded} at {v} share no usable neighbor")
    lowest = g.face(unguarded[0])
    cands = set()
    for walk in lowest.walks:
        for k, (a, _) in enumerate(walk):
            if a == vp:
                cands.add(walk[k][1])
                cands.add(walk[k - 1][0])
    cands -= used | {v, vp}
    if not cands:
        raise InvalidWitness(f"no free walk neighbor of {vp} on face {lowest.id}")
    return vp, min(cands)


def _with_patch(g, v, pairs, removed, rule):
    endpoints = {x for pair in pairs for x in pair}
    extra = _patch_around(g, v, endpoints, set(removed))
    if extra is not None:
        vp, vpp = extra
        pairs = pairs + [(vp, vpp)]
        removed = removed | {vp, vpp}
    return _step(g, pairs, removed, rule)


def step_for_configuration(g: PlaneGraph, cfg: Configuration) -> ReductionStep:
    """Build the guard-and-delete step a detected configuration promises."""
    w = cfg.witness
    if cfg.tag == "LebesgueTriangle":
        if w.get("kind") == "deg3_face5":
            return _deg3_step(g, w["vertex"])
        return _lebesgue_step(g, w["vertex"])

    if cfg.tag in ("L1", "L4"):
        u, v = w["u"], w["v"]
        thirds = [
            z
            for z in (
                _third(g, g.dart_face((u, v)), u, v),
                _third(g, g.dart_face((v, u)), u, v),
            )
            if z is not None
        ]
        if not thirds:
            raise InvalidWitness(f"edge {u}-{v} has no triangle flank")
        z = min(thirds)
        return _step(g, [(v, z)], {u, v, z}, cfg.tag)

    if cfg.tag in ("L2a", "L2b", "L3"):
        u, v = w["u"], w["v"]
        t1 = _third(g, g.dart_face((u, v)), u, v)
        t2 = _third(g, g.dart_face((v, u)), u, v)
        if t1 is None or t2 is None:
            raise InvalidWitness(f"edge {u}-{v} is not weak")

        if cfg.tag == "L2a":
            p, q = min(t1, t2), max(t1, t2)
            if g.has_edge(p, q):
                return _step(g, [(p, q)], {u, p, q}, cfg.tag)
            pp = _pick(g, p, {u, v})
            qp = _pick(g, q, {u, v, pp})
            pairs, removed = [(p, pp), (q, qp)], {u, v, p, pp, q, qp}

        elif cfg.tag == "L2b":
            weak_apexes = sorted(
                a for a in (t1, t2) if classify_edge(g, g.edge_id(v, a)) == "weak"
            )
            if not weak_apexes:
                raise InvalidWitness(f"no weak apex edge at {v}")
            q = weak_apexes[0]
            p = t2 if q == t1 else t1
            sides = [_third(g, f, v, q) for f in g.edge_faces(g.edge_id(v, q))]
            sides = [s for s in sides if s is not None and s != u]
            if not sides:
                raise InvalidWitness(f"apex edge {v}-{q} has no far triangle")
            qp = min(sides)
            if g.has_edge(p, q):
                return _step(g, [(p, q)], {u, p, q}, cfg.tag)
            pp = _pick(g, p, {u, v, qp})
            pairs, removed = [(p, pp), (q, qp)], {u, v, p, pp, q, qp}

        else:  # L3
            nbrs = g.neighbors(u)
            d = len(nbrs)
            i = nbrs.index(v)
            before, far_before = nbrs[i - 1], nbrs[i - 2]
            after, far_after = nbrs[(i + 1) % d], nbrs[(i + 2) % d]
            # the corner one step beyond an apex, away from v
            options = []
            if _is_kface(g.face(g.dart_face((u, before))), 3):
                options.append((before, far_before))
            if _is_kface(g.face(g.dart_face((u, far_after))), 3):
                options.append((after, far_after))
            if not options:
                raise InvalidWitness(f"no triangle corner beside the apexes of {u}-{v}")
            q, qp = min(options)
            p = after if q == before else before
            rest = [x for x in g.neighbors(p) if x not in (u, v, q, qp)]
            if rest:
                pp = min(rest)
                pairs, removed = [(p, pp), (q, qp)], {u, v, p, pp, q, qp}
            else:
                vp = _pick(g, v, {u, p, q, qp})
                pairs, removed = [(q, qp), (v, vp)], {u, p, q, qp, v, vp}
                if len(removed) != 6:
                    raise InvalidWitness(f"configuration at {u}-{v} collapsed")
                return _step(g, pairs, removed, cfg.tag)

        if len(removed) != 6:
            raise InvalidWitness(f"configuration at {u}-{v} collapsed")
        return _with_patch(g, v, pairs, removed, cfg.tag)

    if cfg.tag == "L5":
        u, v = w["u"], w["v"]
        t1 = _third(g, g.dart_face((u, v)), u, v)
        t2 = _third(g, g.dart_face((v, u)), u, v)
        p = t1 if t1 is not None else t2
        if p is None or (t1 is not None and t2 is not None):
            raise InvalidWitness(f"edge {u}-{v} is not semiweak")
        nbrs = g.neighbors(u)
        i = nbrs.index(v)
        side = {nbrs[i - 1], nbrs[(i + 1) % len(nbrs)]}
        up = min(side - {p})
        if g.has_edge(p, up):
            return _step(g, [(p, up)], {u, p, up}, cfg.tag)
        upp = _pick(g, up, {u, v})
        pp = _pick(g, p, {u, v, upp})
        removed = {u, up, upp, p, pp, v}
        if len(removed) != 6:
            raise InvalidWitness(f"configuration at {u}-{v} collapsed")
        return _with_patch(g, v, [(p, pp), (up, upp)], removed, cfg.tag)

    if cfg.tag == "L6":
        u, v = w["u"], w["v"]
        quad = g.face(w["face"])
        if not _is_kface(quad, 4) or u not in quad.boundary_vertices:
            raise InvalidWitness(f"face {w['face']} is no quad at {u}")
        walk = quad.walks[0]
        k = next(i for i, (a, _) in enumerate(walk) if a == u)
        after, opposite, before = (
            walk[(k + 1) % 4][0],
            walk[(k + 2) % 4][0],
            walk[(k + 3) % 4][0],
        )
        if v not in (after, before):
            raise InvalidWitness(f"{v} is no quad neighbor of {u}")
        p = after if v == before else before
        q = opposite
        third = _pick(g, u, {v, p})
        if third == q:
            return _step(g, [(p, q)], {u, p, q}, cfg.tag)
        for x in (p, q, v):
            if g.has_edge(third, x):
                return _step(g, [(third, x)], {u, third, x}, cfg.tag)
        tp = _pick(g, third, {u})
        removed = {u, third, tp, p, q, v}
        if len(removed) != 6:
            raise InvalidWitness(f"configuration at {u}-{v} collapsed")
        return _with_patch(g, v, [(p, q), (third, tp)], removed, cfg.tag)

    if cfg.tag == "L7":
        face = g.face(w["face"])
        if not _is_kface(face, 5):
            raise InvalidWitness(f"face {w['face']} is no simple pentagon")
        walk = face.walks[0]
        verts = [a for a, _ in walk]
        u = max(verts, key=lambda x: (g.degree(x), -x))
        k = verts.index(u)
        v, w1, p, w2 = (verts[(k + i) % 5] for i in (1, 2, 3, 4))
        if g.has_edge(p, u):
            return _step(g, [(p, u)], {u, p, w2}, cfg.tag)
        if g.has_edge(p, v):
            return _step(g, [(p, v)], {v, p, w1}, cfg.tag)
        pp = _pick(g, p, {w1, w2})
        removed = {u, v, w1, p, w2, pp}
        if len(removed) != 6:
            raise InvalidWitness(f"pentagon {w['face']} collapsed")
        return _step(g, [(u, v), (p, pp)], removed, cfg.tag)

    raise InvalidWitness(f"unknown configuration tag {cfg.tag!r}")


# ----------------------------------------------------------------------
# the driver

def _validate_step(work: PlaneGraph, step: ReductionStep, c: Fraction) -> None:
    """Reject a step whose guards could not justify its deletions."""
    removed = step.removed_vertices
    endpoints = set()
    for e in step.guard_edges:
        a, b = work.ends(e)
        endpoints.update((a, b))
    if not removed or not removed <= set(work.vertices):
        raise VerificationFailed(f"step {step.rule} removes nothing usable")
    if not endpoints <= removed:
        raise VerificationFailed(f"step {step.rule} keeps a guard endpoint alive")
    if Fraction(len(step.guard_edges)) > c * len(removed):
        raise VerificationFailed(
            f"step {step.rule}: {len(step.guard_edges)} guards for "
            f"{len(removed)} vertices breaks the {c} ratio"
        )
    if step.rule != "Degree0or1":
        for face in work.faces:
            boundary = face.boundary_vertices
            if boundary & removed and not boundary & endpoints:
                raise VerificationFailed(
                    f"step {step.rule} leaves face {face.id} unguarded"
                )


def run_iterative(
    g: PlaneGraph,
    provider: Callable[[PlaneGraph], Optional[ReductionStep]],
    c,
    algorithm: str,
) -> GuardSet:
    """Repeat provider steps until one face remains; verify at the end.

    Each step is checked on the spot: guard edges must exist, their
    endpoints must be deleted with them, the edge count must fit c|V'|,
    and, except for bare low-degree removals, every face at a deleted
    vertex must see a guard endpoint.
    """
    c = Fraction(c)
    chosen: set[int] = set()
    work = g
    if len(work.faces) == 1 and work.m:
        chosen.add(min(work.edge_ids))
    while len(work.faces) > 1:
        step = provider(work)
        if step is None:
            raise StepNotFound(f"stuck with {len(work.faces)} faces left")
        _validate_step(work, step, c)
        chosen.update(step.guard_edges)
        work = work.delete_vertices(step.removed_vertices)

    bound = c * g.n
    result = GuardSet(
        edges=frozenset(chosen), algorithm=algorithm, claimed_bound=bound
    )
    report = g.verify_guard_set(result.edges)
    if not report.ok:
        raise VerificationFailed(f"faces {list(report.unguarded)} end up unguarded")
    return result


def guard_two_degenerate(g: PlaneGraph) -> GuardSet:
    """Guard via low-degree peeling only; needs a 2-degenerate peel order."""

    def provider(h: PlaneGraph) -> ReductionStep:
        step = find_low_degree_step(h)
        if step is None:
            raise NotTwoDegenerate(f"minimum degree is {min(h.degree(v) for v in h.vertices)}")
        return step

    return run_iterative(g, provider, Fraction(1, 3), "n3-degenerate")


def guard_two_fifths(g: PlaneGraph) -> GuardSet:
    """Guard any plane graph with at most 2n/5 edges."""

    def provider(h: PlaneGraph) -> ReductionStep:
        step = find_low_degree_step(h)
        if step is not None:
            return step
        deg3 = [v for v in h.vertices if h.degree(v) == 3]
        if deg3:
            for u in deg3:
                nbrs = sorted(h.neighbors(u))
                for v1, v2 in combinations(nbrs, 2):
                    if h.has_edge(v1, v2):
                        return _step(h, [(v1, v2)], {u, v1, v2}, "Deg3AdjacentNeighbors")
            return _deg3_step(h, deg3[0])
        return _lebesgue_step(h)

    return run_iterative(g, provider, Fraction(2, 5), "2n5")


def guard_three_eighths(g: PlaneGraph) -> GuardSet:
    """Guard any plane graph with at most 3n/8 edges."""

    def provider(h: PlaneGraph) -> ReductionStep:
        step = find_low_degree_step(h)
        if step is not None:
            return step
        return step_for_configuration(h, find_borodin_configuration(h))

    return run_iterative(g, provider, Fraction(3, 8), "3n8")
