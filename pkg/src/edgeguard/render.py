"""Deterministic SVG drawings of plane graphs.

Layout preference order: stored coordinates, then a barycentric layout
with the outer face pinned to a circle, then a force-directed fallback.
Output bytes depend only on the graph and the guard set; the SVG id
salt is fixed and no timestamps are written.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .embedding import EdgeGuardError, PlaneGraph

_SALT = "edgeguard"


class LayoutFailed(EdgeGuardError):
    """No usable drawing for this graph."""


def tutte_layout(g: PlaneGraph) -> dict:
    """Outer boundary pinned to a circle, interior vertices averaged.

    Needs the outer face to be a simple cycle; degenerate solves
    (singular system, collapsed edges) are rejected so callers can fall
    back to a force-directed placement.
    """
    if g.n == 0:
        raise LayoutFailed("nothing to draw")
    outer = g.face(g.outer_face)
    if len(outer.walks) != 1 or outer.isolated:
        raise LayoutFailed("outer face is not a single cycle")
    cycle = [a for a, _ in outer.walks[0]]
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise LayoutFailed("outer walk revisits a vertex")

    pos = {}
    for i, v in enumerate(cycle):
        t = 2 * math.pi * i / len(cycle)
        pos[v] = (math.cos(t), math.sin(t))
    interior = [v for v in g.vertices if v not in pos]
    if not interior:
        return pos

    idx = {v: i for i, v in enumerate(interior)}
    a = np.zeros((len(interior), len(interior)))
    b = np.zeros((len(interior), 2))
    for v in interior:
        d = g.degree(v)
        if d == 0:
            raise LayoutFailed(f"vertex {v} floats free")
        a[idx[v], idx[v]] = d
        for w in g.neighbors(v):
            if w in idx:
                a[idx[v], idx[w]] -= 1
            else:
                b[idx[v]] += pos[w]
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise LayoutFailed(f"barycentric system is singular: {exc}")
    if not np.all(np.isfinite(sol)):
        raise LayoutFailed("barycentric solve diverged")
    for v in interior:
        pos[v] = (float(sol[idx[v], 0]), float(sol[idx[v], 1]))
    for e in g.edge_ids:
        u, v = g.ends(e)
        if math.dist(pos[u], pos[v]) < 1e-9:
            raise LayoutFailed(f"edge {u}-{v} collapsed to a point")
    return pos


def _spring_layout(g: PlaneGraph) -> dict:
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(sorted(g.vertices))
    h.add_edges_from(sorted(g.ends(e) for e in g.edge_ids))
    placed = nx.spring_layout(h, seed=0)
    return {v: (float(x), float(y)) for v, (x, y) in placed.items()}


def compute_layout(g: PlaneGraph) -> dict:
    if g.coords is not None:
        return g.coords
    if g.n == 0:
        raise LayoutFailed("nothing to draw")
    try:
        return tutte_layout(g)
    except LayoutFailed:
        return _spring_layout(g)


def render_svg(g: PlaneGraph, path, guards=frozenset(), layout=None) -> None:
    """Draw the graph to an SVG file, one line element per edge.

    Guard edges are thick and red; bounded faces carry their id at the
    centroid of their boundary vertices.
    """
    pos = compute_layout(g) if layout is None else layout
    guard_set = frozenset(guards)
    plt.rcParams["svg.hashsalt"] = _SALT
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    try:
        for e in sorted(g.edge_ids):
            u, v = g.ends(e)
            (x1, y1), (x2, y2) = pos[u], pos[v]
            if e in guard_set:
                ax.plot([x1, x2], [y1, y2], color="#d62728", linewidth=3.0, zorder=2)
            else:
                ax.plot([x1, x2], [y1, y2], color="#555555", linewidth=1.2, zorder=1)
        verts = sorted(g.vertices)
        if verts:
            ax.scatter(
                [pos[v][0] for v in verts],
                [pos[v][1] for v in verts],
                s=130,
                color="white",
                edgecolors="#222222",
                zorder=3,
            )
        for v in verts:
            ax.text(pos[v][0], pos[v][1], str(v), fontsize=7,
                    ha="center", va="center", zorder=4)
        for face in g.faces:
            if face.id == g.outer_face or not face.boundary_vertices:
                continue
            pts = [pos[v] for v in sorted(face.boundary_vertices)]
            cx = sum(x for x, _ in pts) / len(pts)
            cy = sum(y for _, y in pts) / len(pts)
            ax.text(cx, cy, f"f{face.id}", fontsize=6, color="#1f77b4",
                    ha="center", va="center", zorder=4)
        ax.set_aspect("equal")
        ax.axis("off")
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def report_figures(rows, outdir) -> list:
    """Summary plots for a batch run: sizes against n, and a histogram."""
    plt.rcParams["svg.hashsalt"] = _SALT
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        ns = [r["n"] for r in rows]
        sizes = [r["guards"] for r in rows]
        ax.scatter(ns, sizes, color="#1f77b4", zorder=2)
        span = sorted(set(ns))
        if span:
            ax.plot(span, [x / 3 for x in span], color="#d62728",
                    linestyle="--", label="n/3", zorder=1)
            ax.legend()
        ax.set_xlabel("vertices")
        ax.set_ylabel("guard edges")
        target = outdir / "guards_vs_n.svg"
        fig.savefig(target, format="svg", metadata={"Date": None})
        paths.append(target)
    finally:
        plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        if sizes:
            ax.hist(sizes, bins=range(0, max(sizes) + 2), color="#1f77b4",
                    edgecolor="white")
        ax.set_xlabel("guard edges")
        ax.set_ylabel("instances")
        target = outdir / "size_histogram.svg"
        fig.savefig(target, format="svg", metadata={"Date": None})
        paths.append(target)
    finally:
        plt.close(fig)
    return paths
