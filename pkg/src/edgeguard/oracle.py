"""Exact minimum edge-guard search.

Guarding is set cover in disguise: the universe is the faces, and each
edge covers the faces that see one of its endpoints.  Instances here are
small, so a branch-and-bound over that cover instance is exact and fast
enough.  Among all minimum covers we return the lexicographically least
one under ascending edge ids, which pins the answer down for tests.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .embedding import BudgetExceeded, EdgeGuardError, GuardSet, PlaneGraph


class Infeasible(EdgeGuardError):
    """Some face cannot be guarded by any edge at all."""


def _cover_table(g: PlaneGraph):
    """Edge -> faces it guards, plus the faces that need guarding."""
    need = [
        (face.id, face.boundary_vertices) for face in g.faces if face.boundary_vertices
    ]
    covers = {}
    for e in g.edge_ids:
        u, v = g.ends(e)
        hit = frozenset(fid for fid, verts in need if u in verts or v in verts)
        if hit:
            covers[e] = hit
    universe = frozenset(fid for fid, _ in need)
    by_face = {fid: [] for fid in universe}
    for e in sorted(covers):
        for fid in covers[e]:
            by_face[fid].append(e)
    return covers, universe, by_face


def _lower_bound(covers, pool, uncovered):
    widest = 0
    for e in pool:
        widest = max(widest, len(covers[e] & uncovered))
        if widest >= len(uncovered):
            break
    if widest == 0:
        return math.inf
    return -(-len(uncovered) // widest)


def _greedy(covers, universe):
    uncovered = set(universe)
    chosen = []
    while uncovered:
        best = max(sorted(covers), key=lambda e: len(covers[e] & uncovered))
        if not covers[best] & uncovered:
            return None
        chosen.append(best)
        uncovered -= covers[best]
    return chosen


def _minimize(covers, by_face, universe, cap):
    """Smallest cover using at most ``cap`` edges, or None."""
    best_set = None
    best = cap + 1

    def rec(uncovered, chosen):
        nonlocal best, best_set
        if not uncovered:
            if len(chosen) < best:
                best = len(chosen)
                best_set = list(chosen)
            return
        pool = [e for e in covers if e not in chosen]
        if len(chosen) + _lower_bound(covers, pool, uncovered) >= best:
            return
        fid = min(uncovered, key=lambda f: (len(by_face[f]), f))
        for e in by_face[fid]:
            chosen.append(e)
            rec(uncovered - covers[e], chosen)
            chosen.pop()

    rec(universe, [])
    return best_set


def _completes(covers, by_face, uncovered, k, cutoff):
    """Can ``uncovered`` be finished with at most k edges of id > cutoff?"""
    if not uncovered:
        return True
    if k <= 0:
        return False
    pool = [e for e in covers if e > cutoff]
    if _lower_bound(covers, pool, uncovered) > k:
        return False
    fid = min(uncovered, key=lambda f: (sum(1 for e in by_face[f] if e > cutoff), f))
    for e in by_face[fid]:
        if e > cutoff and _completes(covers, by_face, uncovered - covers[e], k - 1, cutoff):
            return True
    return False


def minimum_guard_set(
    g: PlaneGraph, upper_hint: Optional[int] = None, *, budget: int = 64
) -> GuardSet:
    """Exact minimum guard set, lexicographically least by edge ids.

    ``upper_hint`` is a size the caller believes achievable (say from one
    of the constructive algorithms); it only prunes.  A wrong hint costs
    a second search but never a wrong answer.  Graphs with more than
    ``budget`` edges are refused rather than searched forever.
    """
    if g.m > budget:
        raise BudgetExceeded(f"{g.m} candidate edges exceeds budget {budget}")
    covers, universe, by_face = _cover_table(g)
    orphan = [fid for fid, cands in by_face.items() if not cands]
    if orphan:
        raise Infeasible(f"faces {sorted(orphan)} have no incident edge to guard them")
    if not universe:
        return GuardSet(edges=frozenset(), algorithm="minimum", claimed_bound=Fraction(0))

    greedy = _greedy(covers, universe)
    cap = len(greedy)
    if upper_hint is not None:
        cap = min(cap, max(upper_hint, 1))
    best = _minimize(covers, by_face, universe, cap)
    if best is None:
        # the hint undershot the true minimum; redo with a sound cap
        best = _minimize(covers, by_face, universe, len(greedy))
    k = len(best)

    chosen: list[int] = []
    covered: frozenset = frozenset()
    cutoff = -1
    while covered != universe:
        for e in sorted(covers):
            if e <= cutoff or not (covers[e] - covered):
                continue
            if _completes(covers, by_face, universe - covered - covers[e], k - len(chosen) - 1, e):
                chosen.append(e)
                covered |= covers[e]
                cutoff = e
                break
        else:
            raise AssertionError("lexicographic completion lost a known solution")

    return GuardSet(edges=frozenset(chosen), algorithm="minimum", claimed_bound=Fraction(k))


def is_guardable_with(g: PlaneGraph, k: int, *, budget: int = 64) -> bool:
    """Whether some set of at most k edges guards every face.

    Unguardable graphs (a face with no incident edges anywhere on its
    boundary) simply answer False for every k.
    """
    if g.m > budget:
        raise BudgetExceeded(f"{g.m} candidate edges exceeds budget {budget}")
    covers, universe, by_face = _cover_table(g)
    if not universe:
        return k >= 0
    if any(not cands for cands in by_face.values()):
        return False
    if k <= 0:
        return False
    greedy = _greedy(covers, universe)
    if greedy is not None and len(greedy) <= k:
        return True
    return _completes(covers, by_face, universe, k, -1)
