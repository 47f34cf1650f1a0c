"""Plane graphs stored as rotation systems, with an explicit face registry.

A graph is a clockwise rotation system: for every vertex, the cyclic
order of its neighbors as seen in the drawing.  Faces are recovered by
the standard dart-tracing rule (the successor of dart (u, v) is the dart
leaving v toward the neighbor that follows u in v's rotation) and kept
in a registry, so mutations can update face identity incrementally
instead of starting over.  Only simple graphs are supported: no loops,
no parallel edges.

Disconnected graphs additionally carry nesting hints describing which
face each component floats in.  Without hints, every component and
every isolated vertex shares one unbounded face.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence


class EdgeGuardError(Exception):
    """Base class for every error this package raises on purpose."""


class MalformedRotation(EdgeGuardError):
    """The rotation table is not a simple, symmetric rotation system."""


class NonPlanarEmbedding(EdgeGuardError):
    """Some connected component fails Euler's formula for the sphere."""


class BadNesting(EdgeGuardError):
    """Nesting hints are out of range, duplicated, or inconsistent."""


class UnknownVertex(EdgeGuardError):
    pass


class UnknownEdge(EdgeGuardError):
    pass


class UnknownFace(EdgeGuardError):
    pass


class EdgeExists(EdgeGuardError):
    pass


class NotOnFace(EdgeGuardError):
    """Endpoint of a requested insertion does not lie on the target face."""


class AmbiguousOccurrence(EdgeGuardError):
    """A vertex meets the target face more than once and no occurrence was picked."""


class VerificationFailed(EdgeGuardError):
    """A constructed guard set left some face unguarded."""


class BudgetExceeded(EdgeGuardError):
    """An exhaustive search hit its configured limit before finishing."""


Dart = tuple[int, int]
Walk = tuple[Dart, ...]


def allowance(bound) -> int:
    """Largest guard count a claimed bound permits.

    Anything in (0, 1) still allows one guard; at and below zero allows
    none; otherwise the floor.
    """
    b = Fraction(bound)
    if b <= 0:
        return 0
    if b < 1:
        return 1
    return int(b) if b.denominator == 1 else int(math.floor(b))


def _canonical(walk: Walk) -> Walk:
    # rotate so the smallest dart leads; walks then compare by value
    k = walk.index(min(walk))
    return walk[k:] + walk[:k]


def _trace_walks(rot: Mapping[int, Sequence[int]]) -> list[Walk]:
    """All face walks of a rotation system, canonical, in discovery order.

    Discovery order scans vertices ascending and rotation positions in
    listed order, so it is a pure function of the table.
    """
    pos = {v: {u: i for i, u in enumerate(nbrs)} for v, nbrs in rot.items()}
    seen: set[Dart] = set()
    walks: list[Walk] = []
    for v in sorted(rot):
        for w in rot[v]:
            start = (v, w)
            if start in seen:
                continue
            walk = []
            cur = start
            while True:
                walk.append(cur)
                seen.add(cur)
                a, b = cur
                nbrs = rot[b]
                cur = (b, nbrs[(pos[b][a] + 1) % len(nbrs)])
                if cur == start:
                    break
            walks.append(_canonical(tuple(walk)))
    return walks


def _components(rot: Mapping[int, Sequence[int]]) -> list[frozenset[int]]:
    """Connected components, sorted by their smallest vertex."""
    unseen = set(rot)
    comps = []
    while unseen:
        root = min(unseen)
        comp = {root}
        queue = deque([root])
        unseen.discard(root)
        while queue:
            v = queue.popleft()
            for w in rot[v]:
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


class _UnionFind:
    def __init__(self):
        self._parent = {}

    def add(self, x):
        self._parent.setdefault(x, x)

    def find(self, x):
        p = self._parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb


@dataclass(frozen=True)
class Face:
    """One face: its boundary walks plus any isolated vertices floating in it.

    ``walks`` holds canonical dart tuples sorted lexicographically; a face
    of a disconnected graph may be bounded by several walks, one per
    component it touches.
    """

    id: int
    walks: tuple[Walk, ...]
    isolated: frozenset[int]

    @property
    def boundary_vertices(self) -> frozenset[int]:
        verts = set(self.isolated)
        for walk in self.walks:
            for a, _ in walk:
                verts.add(a)
        return frozenset(verts)

    @property
    def side_count(self) -> int:
        """Total darts along the boundary; a bridge contributes two."""
        return sum(len(w) for w in self.walks)


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    f: int
    c: int
    alpha: int
    min_degree: int
    max_degree: int


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    unguarded: tuple[int, ...]


@dataclass(frozen=True)
class GuardSet:
    """A set of guard edges together with the bound its construction claims."""

    edges: frozenset[int]
    algorithm: str
    claimed_bound: Fraction

    def to_doc(self, g: "PlaneGraph") -> dict:
        pairs = sorted(g.ends(e) for e in self.edges)
        return {
            "edges": [[u, v] for u, v in pairs],
            "algorithm": self.algorithm,
            "bound": str(self.claimed_bound),
        }


def guard_set_from_doc(g: "PlaneGraph", doc: Mapping) -> GuardSet:
    edges = frozenset(g.edge_id(u, v) for u, v in doc["edges"])
    return GuardSet(
        edges=edges,
        algorithm=str(doc.get("algorithm", "unknown")),
        claimed_bound=Fraction(str(doc["bound"])),
    )


_ROOT = ("outer",)  # union-find sentinel for the unbounded face


class PlaneGraph:
    """Immutable plane graph; all mutations return a fresh instance.

    Edge ids are stable: an edge keeps its id for as long as it exists
    and ids are never reused, so guard edges chosen on a reduced graph
    remain valid names in the original.  Vertex ids likewise persist
    across deletion; ``serialize`` renumbers both.
    """

    __slots__ = (
        "_rot",
        "_ends",
        "_eid_of",
        "_next_eid",
        "_faces",
        "_dart_face",
        "_outer",
        "_next_fid",
        "_coords",
    )

    def __init__(self, *_args, **_kw):
        raise TypeError("use build_from_rotation() or a mutation method")

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def _new(cls, rot, ends, next_eid, faces, outer, next_fid, coords):
        g = object.__new__(cls)
        g._rot = rot
        g._ends = ends
        g._eid_of = {uv: e for e, uv in ends.items()}
        g._next_eid = next_eid
        g._faces = faces
        g._dart_face = {
            (a, b): fid for fid, face in faces.items() for walk in face.walks for a, b in walk
        }
        g._outer = outer
        g._next_fid = next_fid
        g._coords = coords
        return g

    @classmethod
    def _build(cls, n: int, rotations: Sequence[Sequence[int]], nesting, coords):
        rot: dict[int, tuple[int, ...]] = {}
        for v in range(n):
            nbrs = tuple(rotations[v])
            for w in nbrs:
                if not isinstance(w, int) or isinstance(w, bool) or not (0 <= w < n):
                    raise MalformedRotation(f"vertex {v}: neighbor {w!r} out of range")
                if w == v:
                    raise MalformedRotation(f"vertex {v}: self-loop")
            if len(set(nbrs)) != len(nbrs):
                raise MalformedRotation(f"vertex {v}: repeated neighbor")
            rot[v] = nbrs
        for v, nbrs in rot.items():
            for w in nbrs:
                if v not in rot[w]:
                    raise MalformedRotation(f"edge {v}-{w} listed only at {v}")

        pairs = sorted({(min(v, w), max(v, w)) for v in rot for w in rot[v]})
        ends = dict(enumerate(pairs))

        walks = _trace_walks(rot)
        comps = _components(rot)
        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}

        comp_walks: dict[int, list[int]] = {ci: [] for ci in range(len(comps))}
        for wi, walk in enumerate(walks):
            comp_walks[comp_of[walk[0][0]]].append(wi)

        # each component must close up on the sphere before any nesting
        # of components into each other is even considered
        for ci, comp in enumerate(comps):
            mi = sum(len(rot[v]) for v in comp) // 2
            if mi == 0:
                continue
            if len(comp) - mi + len(comp_walks[ci]) != 2:
                raise NonPlanarEmbedding(
                    f"component {ci}: {len(comp)} vertices, {mi} edges, "
                    f"{len(comp_walks[ci])} walks"
                )

        outer_walk = {}
        for ci, wis in comp_walks.items():
            if wis:
                outer_walk[ci] = sorted(wis, key=lambda k: (-len(walks[k]), k))[0]

        uf = _UnionFind()
        uf.add(_ROOT)
        for wi in range(len(walks)):
            uf.add(wi)

        iso_target: dict[int, Optional[int]] = {}  # vertex -> walk index or None for outer
        for ci, comp in enumerate(comps):
            if ci not in outer_walk:
                iso_target[min(comp)] = None

        hinted: set[int] = set()
        for hint in nesting or ():
            try:
                ci = hint["component"]
                tj = hint["inside"]["component"]
                tw = hint["inside"]["walk"]
            except (TypeError, KeyError):
                raise BadNesting(f"malformed hint {hint!r}")
            if not (isinstance(ci, int) and isinstance(tj, int) and isinstance(tw, int)):
                raise BadNesting(f"malformed hint {hint!r}")
            if not (0 <= ci < len(comps)) or not (0 <= tj < len(comps)) or ci == tj:
                raise BadNesting(f"hint {hint!r}: bad component index")
            if ci in hinted:
                raise BadNesting(f"component {ci} hinted twice")
            hinted.add(ci)
            if not (0 <= tw < len(comp_walks[tj])):
                raise BadNesting(f"hint {hint!r}: component {tj} has no walk {tw}")
            target = comp_walks[tj][tw]
            if ci in outer_walk:
                uf.union(outer_walk[ci], target)
            else:
                iso_target[min(comps[ci])] = target
        for ci, wi in outer_walk.items():
            if ci not in hinted:
                uf.union(wi, _ROOT)

        groups: dict = {}
        for wi in range(len(walks)):
            groups.setdefault(uf.find(wi), []).append(wi)

        root_key = uf.find(_ROOT)
        face_walks: dict[int, list[int]] = {0: groups.pop(root_key, [])}
        for key in sorted(groups, key=lambda k: min(groups[k])):
            face_walks[len(face_walks)] = groups[key]

        group_face = {uf.find(wis[0]): fid for fid, wis in face_walks.items() if wis}
        group_face[root_key] = 0

        face_iso: dict[int, set[int]] = {fid: set() for fid in face_walks}
        for v, target in iso_target.items():
            key = root_key if target is None else uf.find(target)
            face_iso[group_face[key]].add(v)

        faces = {
            fid: Face(
                id=fid,
                walks=tuple(sorted(walks[wi] for wi in wis)),
                isolated=frozenset(face_iso[fid]),
            )
            for fid, wis in face_walks.items()
        }

        if n - len(ends) + len(faces) != 1 + len(comps):
            raise BadNesting(
                f"nesting yields {len(faces)} faces for n={n} m={len(ends)} "
                f"c={len(comps)}; Euler's formula fails"
            )

        coord_map = None
        if coords is not None:
            if len(coords) != n:
                raise MalformedRotation("coords length differs from n")
            coord_map = {v: (float(x), float(y)) for v, (x, y) in enumerate(coords)}

        return cls._new(rot, ends, len(ends), faces, 0, len(faces), coord_map)

    # ------------------------------------------------------------------
    # read access

    @property
    def n(self) -> int:
        return len(self._rot)

    @property
    def m(self) -> int:
        return len(self._ends)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._rot))

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._ends))

    @property
    def faces(self) -> tuple[Face, ...]:
        return tuple(self._faces[fid] for fid in sorted(self._faces))

    @property
    def outer_face(self) -> int:
        return self._outer

    @property
    def coords(self) -> Optional[dict[int, tuple[float, float]]]:
        return dict(self._coords) if self._coords is not None else None

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self._rot[v]
        except KeyError:
            raise UnknownVertex(f"no vertex {v}")

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_vertex(self, v: int) -> bool:
        return v in self._rot

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._eid_of

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._eid_of[(min(u, v), max(u, v))]
        except KeyError:
            raise UnknownEdge(f"no edge {u}-{v}")

    def ends(self, eid: int) -> tuple[int, int]:
        try:
            return self._ends[eid]
        except KeyError:
            raise UnknownEdge(f"no edge id {eid}")

    def face(self, fid: int) -> Face:
        try:
            return self._faces[fid]
        except KeyError:
            raise UnknownFace(f"no face {fid}")

    def dart_face(self, dart: Dart) -> int:
        try:
            return self._dart_face[dart]
        except KeyError:
            raise UnknownEdge(f"no dart {dart}")

    def edge_faces(self, eid: int) -> tuple[int, int]:
        u, v = self.ends(eid)
        return self._dart_face[(u, v)], self._dart_face[(v, u)]

    def faces_at(self, v: int) -> tuple[int, ...]:
        if v not in self._rot:
            raise UnknownVertex(f"no vertex {v}")
        fids = set()
        for w in self._rot[v]:
            fids.add(self._dart_face[(v, w)])
            fids.add(self._dart_face[(w, v)])
        if not self._rot[v]:
            for fid, face in self._faces.items():
                if v in face.isolated:
                    fids.add(fid)
        return tuple(sorted(fids))

    # ------------------------------------------------------------------
    # serialization

    def serialize(self) -> dict:
        """Plain-dict form with vertices renumbered 0..n-1.

        Nesting hints are regenerated in canonical form: one hint per
        component or isolated vertex that does not float in the outer
        face, pointing at that face's host walk.
        """
        verts = sorted(self._rot)
        remap = {v: i for i, v in enumerate(verts)}
        rotations = [[remap[w] for w in self._rot[v]] for v in verts]
        doc: dict = {"n": len(verts), "rotations": rotations}
        hints = self._nesting_hints(verts, remap, rotations)
        if hints:
            doc["nesting"] = hints
        if self._coords is not None:
            doc["coords"] = [list(self._coords[v]) for v in verts]
        return doc

    def _nesting_hints(self, verts, remap, rotations):
        rot = {v: tuple(nbrs) for v, nbrs in enumerate(rotations)}
        comps = _components(rot)
        if len(comps) <= 1:
            return []
        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
        walks = _trace_walks(rot)
        comp_walks: dict[int, list[int]] = {ci: [] for ci in range(len(comps))}
        walk_index = {}
        for wi, walk in enumerate(walks):
            ci = comp_of[walk[0][0]]
            walk_index[wi] = (ci, len(comp_walks[ci]))
            comp_walks[ci].append(wi)
        # a compact walk's face in the current registry, via any dart
        def face_of(wi):
            a, b = walks[wi][0]
            return self._dart_face[(verts[a], verts[b])]

        by_face: dict[int, list[int]] = {}
        for wi in range(len(walks)):
            by_face.setdefault(face_of(wi), []).append(wi)

        # Peel components outward-in.  When a face is reached from the
        # outer side, every not-yet-placed component on it hangs there;
        # the rest of that component's faces lie strictly inside it, so
        # reaching a face records the host-side walk that encloses it.
        # The longest walk of a component need not face its enclosing
        # face after mutations, so enclosure is read off the registry.
        enclosing = {}
        host_walk = {}
        queue = deque([self._outer])
        seen = {self._outer}
        while queue:
            fid = queue.popleft()
            for wi in by_face.get(fid, ()):
                ci = walk_index[wi][0]
                if ci in enclosing:
                    continue
                enclosing[ci] = fid
                for wj in comp_walks[ci]:
                    fj = face_of(wj)
                    if fj not in seen:
                        seen.add(fj)
                        host_walk[fj] = wj
                        queue.append(fj)

        hints = []
        for ci in sorted(comp_walks):
            if comp_walks[ci]:
                fid = enclosing[ci]
            else:
                v = verts[min(comps[ci])]
                fid = next(f for f, face in self._faces.items() if v in face.isolated)
            if fid == self._outer:
                continue
            hj, hw = walk_index[host_walk[fid]]
            hints.append({"component": ci, "inside": {"component": hj, "walk": hw}})
        return hints

    def to_json(self) -> str:
        return json.dumps(self.serialize(), sort_keys=True)

    # ------------------------------------------------------------------
    # mutations

    def delete_vertices(self, victims: Iterable[int]) -> "PlaneGraph":
        """Remove vertices and their edges; merge the faces around them.

        Faces not incident to any removed vertex keep their id and walks.
        For each removed vertex the faces around it collapse into one;
        overlapping collapses chain, and every resulting merged face gets
        a fresh id.  Surviving vertex ids are unchanged.
        """
        vs = set(victims)
        for v in vs:
            if v not in self._rot:
                raise UnknownVertex(f"no vertex {v}")
        if not vs:
            return self

        new_rot = {
            v: tuple(w for w in nbrs if w not in vs)
            for v, nbrs in self._rot.items()
            if v not in vs
        }
        edge_victims = [v for v in vs if self._rot[v]]

        uf = _UnionFind()
        for fid in self._faces:
            uf.add(fid)
        touched: set[int] = set()
        for v in edge_victims:
            around = set()
            for w in self._rot[v]:
                around.add(self._dart_face[(v, w)])
                around.add(self._dart_face[(w, v)])
            touched |= around
            first = min(around)
            for fid in around:
                uf.union(first, fid)
        touched = {fid for fid in self._faces if uf.find(fid) in {uf.find(t) for t in touched}}

        old_walk_face = {w: fid for fid, face in self._faces.items() for w in face.walks}
        new_walks = _trace_walks(new_rot)

        group_walks: dict[int, list[Walk]] = {}
        group_iso: dict[int, set[int]] = {}
        for fid in touched:
            key = uf.find(fid)
            group_walks.setdefault(key, [])
            group_iso.setdefault(key, set()).update(self._faces[fid].isolated - vs)

        kept: dict[int, Face] = {}
        for fid, face in self._faces.items():
            if fid not in touched:
                kept[fid] = Face(id=fid, walks=face.walks, isolated=face.isolated - vs)

        for walk in new_walks:
            old_fid = old_walk_face.get(walk)
            if old_fid is not None:
                if old_fid not in touched:
                    continue  # untouched faces keep their walks verbatim
                group_walks[uf.find(old_fid)].append(walk)
            else:
                # brand new walk: every dart on it existed before, and all
                # of its old corner faces fell into the same merge group
                group_walks[uf.find(self._dart_face[walk[0]])].append(walk)

        for v, nbrs in self._rot.items():
            if v not in vs and nbrs and not new_rot[v]:
                key = uf.find(self._dart_face[(v, nbrs[0])])
                group_iso[key].add(v)

        faces = dict(kept)
        next_fid = self._next_fid
        merged_fid: dict[int, int] = {}
        for key in sorted(group_walks, key=lambda k: min(f for f in touched if uf.find(f) == k)):
            faces[next_fid] = Face(
                id=next_fid,
                walks=tuple(sorted(group_walks[key])),
                isolated=frozenset(group_iso[key]),
            )
            merged_fid[key] = next_fid
            next_fid += 1

        if not faces:
            faces = {next_fid: Face(id=next_fid, walks=(), isolated=frozenset())}
            next_fid += 1

        if self._outer in touched:
            outer = merged_fid[uf.find(self._outer)]
        elif self._outer in faces:
            outer = self._outer
        else:
            outer = min(faces)

        ends = {e: uv for e, uv in self._ends.items() if uv[0] not in vs and uv[1] not in vs}
        coords = None
        if self._coords is not None:
            coords = {v: xy for v, xy in self._coords.items() if v not in vs}
        return PlaneGraph._new(new_rot, ends, self._next_eid, faces, outer, next_fid, coords)

    def _face_occurrences(self, face: Face, v: int):
        """Corners of v along the face, in walk order then position order."""
        occ = []
        for wi, walk in enumerate(face.walks):
            for p, (a, _) in enumerate(walk):
                if a == v:
                    occ.append((wi, p))
        if v in face.isolated:
            occ.append(("isolated", None))
        return occ

    def insert_edge(self, u: int, v: int, face: int, at=None) -> "PlaneGraph":
        """Draw edge u-v through the given face.

        Both endpoints must lie on the face.  ``at`` picks one corner per
        endpoint as a pair of occurrence indices into the face's boundary
        enumeration; it may be omitted when both endpoints meet the face
        exactly once.  Splitting a face retires its id in favor of two
        fresh ones; joining two walks of one face keeps the id.
        """
        return self._insert_edge_full(u, v, face, at)[0]

    def _insert_edge_full(self, u, v, fid, at=None):
        for x in (u, v):
            if x not in self._rot:
                raise UnknownVertex(f"no vertex {x}")
        if u == v:
            raise MalformedRotation("refusing self-loop")
        if fid not in self._faces:
            raise UnknownFace(f"no face {fid}")
        if self.has_edge(u, v):
            raise EdgeExists(f"edge {u}-{v} already present")
        face = self._faces[fid]

        occ_u = self._face_occurrences(face, u)
        occ_v = self._face_occurrences(face, v)
        if not occ_u:
            raise NotOnFace(f"vertex {u} not on face {fid}")
        if not occ_v:
            raise NotOnFace(f"vertex {v} not on face {fid}")
        if at is None:
            if len(occ_u) > 1 or len(occ_v) > 1:
                raise AmbiguousOccurrence(
                    f"face {fid} meets {u} x{len(occ_u)} and {v} x{len(occ_v)}; pass at="
                )
            su, sv = occ_u[0], occ_v[0]
        else:
            try:
                au, av = at
                su, sv = occ_u[au], occ_v[av]
            except (TypeError, ValueError, IndexError):
                raise AmbiguousOccurrence(f"at={at!r} does not select corners of {u} and {v}")

        rot = dict(self._rot)

        def splice(a, b, corner):
            # put b into a's rotation right after the tail of a's arriving dart
            wi, p = corner
            if wi == "isolated":
                rot[a] = (b,)
                return
            walk = face.walks[wi]
            x = walk[p - 1][0]
            nbrs = rot[a]
            k = nbrs.index(x)
            rot[a] = nbrs[: k + 1] + (b,) + nbrs[k + 1 :]

        splice(u, v, su)
        splice(v, u, sv)

        eid = self._next_eid
        ends = dict(self._ends)
        ends[eid] = (min(u, v), max(u, v))

        faces = dict(self._faces)
        next_fid = self._next_fid
        outer = self._outer
        wu, pu = su
        wv, pv = sv

        if wu != "isolated" and wv != "isolated" and wu == wv:
            # chord across one walk: the face splits in two
            walk = face.walks[wu]
            i, j = pu, pv

            def seg(a, b):
                return walk[a:b] if a <= b else walk[a:] + walk[:b]

            piece_a = ((u, v),) + seg(j, i)
            piece_b = ((v, u),) + seg(i, j)
            others = tuple(w for k, w in enumerate(face.walks) if k != wu)
            fid_a, fid_b = next_fid, next_fid + 1
            next_fid += 2
            del faces[fid]
            faces[fid_a] = Face(id=fid_a, walks=(_canonical(piece_a),), isolated=frozenset())
            faces[fid_b] = Face(
                id=fid_b,
                walks=tuple(sorted(others + (_canonical(piece_b),))),
                isolated=face.isolated,
            )
            if outer == fid:
                outer = fid_b
            g = PlaneGraph._new(rot, ends, eid + 1, faces, outer, next_fid, self._coords)
            return g, fid_a, fid_b, eid

        # all remaining shapes keep the face id
        iso = set(face.isolated)
        if wu == "isolated" and wv == "isolated":
            merged = ((u, v), (v, u))
            removed = ()
            iso -= {u, v}
        elif wu == "isolated":
            walk = face.walks[wv]
            merged = ((u, v),) + walk[pv:] + walk[:pv] + ((v, u),)
            removed = (wv,)
            iso.discard(u)
        elif wv == "isolated":
            walk = face.walks[wu]
            merged = ((v, u),) + walk[pu:] + walk[:pu] + ((u, v),)
            removed = (wu,)
            iso.discard(v)
        else:
            walk_u, walk_v = face.walks[wu], face.walks[wv]
            merged = (
                ((u, v),)
                + walk_v[pv:]
                + walk_v[:pv]
                + ((v, u),)
                + walk_u[pu:]
                + walk_u[:pu]
            )
            removed = (wu, wv)
        others = tuple(w for k, w in enumerate(face.walks) if k not in removed)
        faces[fid] = Face(
            id=fid,
            walks=tuple(sorted(others + (_canonical(merged),))),
            isolated=frozenset(iso),
        )
        g = PlaneGraph._new(rot, ends, eid + 1, faces, outer, next_fid, self._coords)
        return g, fid, None, eid

    def remove_edge(self, eid: int) -> "PlaneGraph":
        """Erase an edge.

        An edge with two distinct faces merges them into one fresh face.
        A bridge has the same face on both sides; that face keeps its id
        and the walk splits, with endpoints dropping to isolated when
        their degree hits zero.
        """
        u, v = self.ends(eid)
        d1, d2 = (u, v), (v, u)
        f1, f2 = self._dart_face[d1], self._dart_face[d2]

        rot = dict(self._rot)
        rot[u] = tuple(w for w in rot[u] if w != v)
        rot[v] = tuple(w for w in rot[v] if w != u)
        ends = {e: uv for e, uv in self._ends.items() if e != eid}
        faces = dict(self._faces)
        next_fid = self._next_fid
        outer = self._outer

        if f1 != f2:
            fa, fb = self._faces[f1], self._faces[f2]
            walk1 = next(w for w in fa.walks if d1 in w)
            walk2 = next(w for w in fb.walks if d2 in w)
            i, j = walk1.index(d1), walk2.index(d2)
            merged = walk1[i + 1 :] + walk1[:i] + walk2[j + 1 :] + walk2[:j]
            walks = tuple(
                sorted(
                    tuple(w for w in fa.walks if w != walk1)
                    + tuple(w for w in fb.walks if w != walk2)
                    + (_canonical(merged),)
                )
            )
            del faces[f1]
            del faces[f2]
            fid = next_fid
            next_fid += 1
            faces[fid] = Face(id=fid, walks=walks, isolated=fa.isolated | fb.isolated)
            if outer in (f1, f2):
                outer = fid
        else:
            face = self._faces[f1]
            walk = next(w for w in face.walks if d1 in w)
            i = walk.index(d1)
            rest = walk[i + 1 :] + walk[:i]
            j = rest.index(d2)
            piece_a, piece_b = rest[:j], rest[j + 1 :]
            new_walks = tuple(w for w in face.walks if w != walk)
            iso = set(face.isolated)
            for piece, endpoint in ((piece_a, v), (piece_b, u)):
                if piece:
                    new_walks += (_canonical(piece),)
                else:
                    iso.add(endpoint)
            faces[f1] = Face(id=f1, walks=tuple(sorted(new_walks)), isolated=frozenset(iso))

        return PlaneGraph._new(rot, ends, self._next_eid, faces, outer, next_fid, self._coords)

    # ------------------------------------------------------------------
    # queries

    def verify_guard_set(self, edges: Iterable[int]) -> VerificationReport:
        """Check that every face sees an endpoint of some chosen edge.

        A face with no boundary at all (only possible in an empty graph)
        needs no guard; a face inhabited solely by isolated vertices can
        never be guarded by edges.
        """
        endpoints: set[int] = set()
        for e in edges:
            a, b = self.ends(e)
            endpoints.add(a)
            endpoints.add(b)
        unguarded = []
        for fid in sorted(self._faces):
            boundary = self._faces[fid].boundary_vertices
            if boundary and not (boundary & endpoints):
                unguarded.append(fid)
        return VerificationReport(ok=not unguarded, unguarded=tuple(unguarded))

    def stats(self) -> GraphStats:
        degs = [len(nbrs) for nbrs in self._rot.values()]
        alpha = 0
        for face in self._faces.values():
            if len(face.walks) == 1 and not face.isolated:
                walk = face.walks[0]
                if len(walk) == 4 and len({a for a, _ in walk}) == 4:
                    alpha += 1
        return GraphStats(
            n=self.n,
            m=self.m,
            f=len(self._faces),
            c=len(_components(self._rot)),
            alpha=alpha,
            min_degree=min(degs) if degs else 0,
            max_degree=max(degs) if degs else 0,
        )

    def face_hop_distance(self, f1: int, f2: int):
        """Fewest edges from a boundary vertex of f1 to one of f2.

        Faces sharing a vertex are at distance 0; unreachable pairs give
        ``math.inf``.
        """
        if f1 not in self._faces:
            raise UnknownFace(f"no face {f1}")
        if f2 not in self._faces:
            raise UnknownFace(f"no face {f2}")
        if f1 == f2:
            return 0
        src = self._faces[f1].boundary_vertices
        dst = self._faces[f2].boundary_vertices
        if not src or not dst:
            return math.inf
        dist = {v: 0 for v in src}
        queue = deque(src)
        best = math.inf
        while queue:
            x = queue.popleft()
            if x in dst:
                return dist[x]
            for y in self._rot[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return best

    # ------------------------------------------------------------------
    # invariants

    def validate(self) -> None:
        """Assert internal consistency; used by tests after mutations."""
        rot = self._rot
        for v, nbrs in rot.items():
            assert len(set(nbrs)) == len(nbrs) and v not in nbrs
            for w in nbrs:
                assert v in rot[w], f"asymmetric edge {v}-{w}"
                assert (min(v, w), max(v, w)) in self._eid_of
        assert len(self._ends) == sum(len(nb) for nb in rot.values()) // 2

        walks = set(_trace_walks(rot))
        stored = [w for face in self._faces.values() for w in face.walks]
        assert len(stored) == len(walks), "face registry duplicates or misses walks"
        assert set(stored) == walks

        iso_stored = [v for face in self._faces.values() for v in face.isolated]
        iso_actual = {v for v, nbrs in rot.items() if not nbrs}
        assert len(iso_stored) == len(iso_actual) and set(iso_stored) == iso_actual

        for fid, face in self._faces.items():
            assert face.id == fid
            assert tuple(sorted(face.walks)) == face.walks
            for w in face.walks:
                assert w == _canonical(w)
                for dart in w:
                    assert self._dart_face[dart] == fid
        assert len(self._dart_face) == 2 * len(self._ends)

        assert self._outer in self._faces
        assert self.n - self.m + len(self._faces) == 1 + len(_components(rot)), (
            "Euler's formula fails"
        )
        assert all(fid < self._next_fid for fid in self._faces)
        assert all(e < self._next_eid for e in self._ends)


def build_from_rotation(doc: Mapping) -> PlaneGraph:
    """Build a plane graph from its serialized form.

    Expects ``{"n": int, "rotations": [[...], ...]}`` with clockwise
    neighbor lists, plus optional ``nesting`` hints and ``coords``.
    """
    try:
        n = doc["n"]
        rotations = doc["rotations"]
    except (TypeError, KeyError):
        raise MalformedRotation("document needs 'n' and 'rotations'")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise MalformedRotation(f"bad vertex count {n!r}")
    if len(rotations) != n:
        raise MalformedRotation(f"{len(rotations)} rotations for {n} vertices")
    return PlaneGraph._build(n, rotations, doc.get("nesting"), doc.get("coords"))


def trace_faces(g: PlaneGraph) -> tuple[Walk, ...]:
    """Retrace every face walk from scratch, in discovery order.

    This ignores the registry entirely, so tests can cross-check the
    incrementally maintained faces against a fresh trace.
    """
    return tuple(_trace_walks(g._rot))
