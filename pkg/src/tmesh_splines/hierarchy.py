"""Hierarchical T-meshes: recursive midpoint-cross refinement.

An HMesh is a tensor-product base grid plus an ordered list of cell
subdivisions; subdividing a level-k cell inserts a cross through its center
(four level-(k+1) subcells).  The level of a cell is its depth in this
quadtree, so the realized mesh does not depend on the recorded order.

The module also carries the level bookkeeping (every line coordinate is
created at a unique level), isolated-cell and crossing-vertex-connectedness
analysis, the decomposition into crossing-vertex-connected submeshes, the
branch/entering-l-edge/characteristic-vertex machinery with the order used
to triangularize constraint systems, and support l-edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from bisect import bisect_left, bisect_right

from .rational import rat, rat_from_json, rat_to_json
from .mesh import (
    TMesh, LEdge, MeshError, NoCrossingVertices, ParseError,
    build_from_spans, tensor_mesh, extend as extend_tmesh, extension_lines,
)


class NoSuchCell(MeshError):
    """Referenced cell does not exist in the hierarchy."""


class AlreadySubdivided(MeshError):
    """The referenced cell already carries a cross."""


class NotHierarchical(MeshError):
    """The operation needs hierarchical level structure."""


class NotCvc(MeshError):
    """The mesh is not crossing-vertex connected."""


class NotInterior(MeshError):
    """The operation needs an interior l-edge."""


@dataclass(frozen=True)
class HCell:
    level: int
    x0: object
    x1: object
    y0: object
    y1: object

    @property
    def center(self):
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    @property
    def rect(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def key(self):
        return (self.level, self.center)


@dataclass
class LevelAnnotation:
    """Level numbers of l-edges, minimal segments, and crossing vertices."""

    hline_level: dict
    vline_level: dict
    ledge_level: dict
    segment_level: dict
    vertex_level: dict  # crossing vertex -> (horizontal level, vertical level)


class HMesh:
    """Immutable hierarchical T-mesh (optionally extended)."""

    def __init__(self, base_x, base_y, subdivisions=(), extension=None):
        self.base_x = tuple(rat(x) for x in base_x)
        self.base_y = tuple(rat(y) for y in base_y)
        if len(self.base_x) < 2 or len(self.base_y) < 2:
            raise ParseError("base grid needs at least 2 coordinates per axis")
        if list(self.base_x) != sorted(set(self.base_x)) or \
           list(self.base_y) != sorted(set(self.base_y)):
            raise ParseError("base coordinates must be strictly increasing")
        self.subdivisions = tuple((int(l), (rat(c[0]), rat(c[1]))) for l, c in subdivisions)
        self.extension = extension  # (m, n, margin) or None
        self._replay()

    def _replay(self):
        cells = {}
        for i, x0 in enumerate(self.base_x[:-1]):
            for j, y0 in enumerate(self.base_y[:-1]):
                x1, y1 = self.base_x[i + 1], self.base_y[j + 1]
                cells[(0, ((x0 + x1) / 2, (y0 + y1) / 2))] = HCell(0, x0, x1, y0, y1)
        subdivided = {}
        for level, center in self.subdivisions:
            key = (level, center)
            if key not in cells:
                raise NoSuchCell(f"no level-{level} cell centered at {center}")
            if key in subdivided:
                raise AlreadySubdivided(f"cell {key} is already subdivided")
            c = cells[key]
            cx, cy = center
            lvl = level + 1
            subdivided[key] = c
            for q in (HCell(lvl, c.x0, cx, c.y0, cy),
                      HCell(lvl, cx, c.x1, c.y0, cy),
                      HCell(lvl, c.x0, cx, cy, c.y1),
                      HCell(lvl, cx, c.x1, cy, c.y1)):
                cells[(lvl, q.center)] = q
        self._all_cells = cells
        self._subdivided = subdivided
        self.max_level = max((l + 1 for l, _ in self.subdivisions), default=0)

    # -- structure queries ----------------------------------------------------

    def leaf_cells(self):
        return sorted((c for k, c in self._all_cells.items() if k not in self._subdivided),
                      key=lambda c: (c.y0, c.x0, c.level))

    def subdivided_cells(self):
        return sorted(self._subdivided.values(), key=lambda c: (c.level, c.y0, c.x0))

    def cells_at_level(self, level):
        return sorted((c for c in self._all_cells.values() if c.level == level),
                      key=lambda c: (c.y0, c.x0))

    def find_cell(self, point):
        """The leaf cell whose closed rectangle contains the point."""
        best = None
        for c in self.leaf_cells():
            if c.x0 <= point[0] <= c.x1 and c.y0 <= point[1] <= c.y1:
                if best is None or c.level > best.level:
                    best = c
        return best

    def subdivide(self, level, center) -> "HMesh":
        """New HMesh with a cross inserted in the referenced cell."""
        if self.extension is not None:
            raise NotHierarchical("cannot subdivide an extended mesh")
        center = (rat(center[0]), rat(center[1]))
        return HMesh(self.base_x, self.base_y,
                     self.subdivisions + ((level, center),))

    # -- realization ------------------------------------------------------------

    def _plain_spans(self):
        xl, xr = self.base_x[0], self.base_x[-1]
        yb, yt = self.base_y[0], self.base_y[-1]
        hspans = [(y, xl, xr) for y in self.base_y[1:-1]]
        vspans = [(x, yb, yt) for x in self.base_x[1:-1]]
        for c in self.subdivided_cells():
            cx, cy = c.center
            hspans.append((cy, c.x0, c.x1))
            vspans.append((cx, c.y0, c.y1))
        return (xl, xr, yb, yt), hspans, vspans

    @cached_property
    def plain_mesh(self) -> TMesh:
        domain, hspans, vspans = self._plain_spans()
        return build_from_spans(domain, hspans, vspans)

    @cached_property
    def realized(self) -> TMesh:
        if self.extension is None:
            return self.plain_mesh
        m, n, margin = self.extension
        return extend_tmesh(self.plain_mesh, m, n, margin)

    @cached_property
    def _line_levels(self):
        """Maps y -> level and x -> level for every realized line coordinate.

        Each arm coordinate is an odd dyadic offset of a unique generation
        within its base row/column, so the creating level is well defined.
        """
        hl = {y: 0 for y in self.base_y}
        vl = {x: 0 for x in self.base_x}
        for c in self.subdivided_cells():
            cx, cy = c.center
            lvl = c.level + 1
            if hl.setdefault(cy, lvl) != lvl or vl.setdefault(cx, lvl) != lvl:
                raise NotHierarchical("conflicting line levels")
        if self.extension is not None:
            mesh = self.realized
            for x, _, _ in mesh.vsegments:
                vl.setdefault(x, 0)
            for y, _, _ in mesh.hsegments:
                hl.setdefault(y, 0)
        return hl, vl

    # -- isolated cells and delta ------------------------------------------------

    def _same_level_neighbors(self, cell: HCell):
        out = []
        for other in self.cells_at_level(cell.level):
            if other is cell or other.key() == cell.key():
                continue
            if (other.y0 == cell.y0 and other.y1 == cell.y1
                    and (other.x1 == cell.x0 or other.x0 == cell.x1)):
                out.append(other)
            elif (other.x0 == cell.x0 and other.x1 == cell.x1
                    and (other.y1 == cell.y0 or other.y0 == cell.y1)):
                out.append(other)
        return out

    def isolated_cells(self):
        """Subdivided cells none of whose same-level h/v neighbors is subdivided."""
        out = []
        for c in self.subdivided_cells():
            if not any(n.key() in self._subdivided for n in self._same_level_neighbors(c)):
                out.append(c)
        return out

    def delta(self) -> int:
        """delta = isolated subdivided cell count + 1 (structural for extensions)."""
        if self.extension is not None:
            return crossing_components(self.realized)
        return len(self.isolated_cells()) + 1


# -- construction helpers ------------------------------------------------------


def hmesh_from_base(xs, ys) -> HMesh:
    return HMesh(xs, ys)


def subdivide(h: HMesh, level, center) -> HMesh:
    return h.subdivide(level, center)


def extend_hmesh(h: HMesh, m: int, n: int, margin=None) -> HMesh:
    """Extension of a hierarchical mesh, keeping the level bookkeeping.

    Added grid lines carry level 0; extended edges keep their source level.
    """
    if h.extension is not None:
        raise NotHierarchical("mesh is already extended")
    extension_lines(h.plain_mesh, m, n, margin)  # validate parameters
    return HMesh(h.base_x, h.base_y, h.subdivisions, extension=(m, n, margin))


def isolated_cells(h: HMesh):
    cells = h.isolated_cells()
    return cells, len(cells) + 1


def annotate_levels(obj) -> LevelAnnotation:
    """Level annotation of an HMesh (or all-zero for a plain TMesh)."""
    if isinstance(obj, HMesh):
        mesh = obj.realized
        hl, vl = obj._line_levels
    elif isinstance(obj, TMesh):
        mesh = obj
        hl = {y for y, _, _ in mesh.hsegments} | {mesh.domain[2], mesh.domain[3]}
        vl = {x for x, _, _ in mesh.vsegments} | {mesh.domain[0], mesh.domain[1]}
        hl = {y: 0 for y in hl}
        vl = {x: 0 for x in vl}
    else:
        raise TypeError(f"cannot annotate {type(obj)!r}")
    ledge_level = {}
    for l in mesh.ledges + mesh.boundary_ledges:
        ledge_level[l] = hl[l.coord] if l.orientation == "h" else vl[l.coord]
    segment_level = {}
    for y, x0, x1 in mesh.hsegments:
        segment_level[("h", y, x0, x1)] = hl[y]
    for x, y0, y1 in mesh.vsegments:
        segment_level[("v", x, y0, y1)] = vl[x]
    vertex_level = {v: (hl[v[1]], vl[v[0]]) for v in mesh.crossing_vertices}
    return LevelAnnotation(hl, vl, ledge_level, segment_level, vertex_level)


# -- crossing-vertex connectivity ------------------------------------------------


def crossing_adjacency(mesh: TMesh):
    """Adjacency between consecutive crossing vertices on common l-edges."""
    adj = {v: [] for v in mesh.crossing_vertices}
    crossing = set(mesh.crossing_vertices)
    for l in mesh.ledges:
        if l.orientation == "h":
            on = sorted(v for v in crossing if v[1] == l.coord and l.lo <= v[0] <= l.hi)
        else:
            on = sorted((v for v in crossing if v[0] == l.coord and l.lo <= v[1] <= l.hi),
                        key=lambda v: v[1])
        for a, b in zip(on, on[1:]):
            adj[a].append(b)
            adj[b].append(a)
    return adj


def crossing_components(mesh: TMesh) -> int:
    adj = crossing_adjacency(mesh)
    seen = set()
    comps = 0
    for v in adj:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def is_crossing_vertex_connected(mesh: TMesh) -> bool:
    """True iff all crossing vertices are joined by paths whose joints are
    crossing vertices (Definition of crossing-vertex connectedness)."""
    if isinstance(mesh, HMesh):
        mesh = mesh.realized
    if not mesh.crossing_vertices:
        raise NoCrossingVertices("mesh has no crossing vertices")
    return crossing_components(mesh) == 1


def witness_path(mesh: TMesh, a, b):
    """A poly-line (list of crossing vertices) between a and b, or None.

    Consecutive listed vertices lie on a common l-edge; every joint of the
    poly-line is a crossing vertex.
    """
    if isinstance(mesh, HMesh):
        mesh = mesh.realized
    adj = crossing_adjacency(mesh)
    if a not in adj or b not in adj:
        raise NoCrossingVertices(f"{a} or {b} is not a crossing vertex")
    prev = {a: None}
    queue = [a]
    while queue:
        nxt = []
        for u in queue:
            if u == b:
                path = []
                while u is not None:
                    path.append(u)
                    u = prev[u]
                return path[::-1]
            for w in adj[u]:
                if w not in prev:
                    prev[w] = u
                    nxt.append(w)
        queue = nxt
    return None


# -- decomposition (mesh subtraction) ---------------------------------------------


def _strictly_inside(seg, rect):
    kind, c, lo, hi = seg
    x0, x1, y0, y1 = rect
    if kind == "h":
        return y0 < c < y1 and x0 <= lo and hi <= x1
    return x0 < c < x1 and y0 <= lo and hi <= y1


def decompose(h: HMesh):
    """Split into crossing-vertex-connected submeshes V_0 .. V_C.

    V_0 is the mesh with every isolated subdivided cell's interior removed
    (the cell stays a cell); each other part is the hierarchical structure
    inside one isolated cell, with deeper isolated interiors removed in turn.
    """
    if h.extension is not None:
        raise NotHierarchical("decompose works on plain hierarchical meshes")
    mesh = h.realized
    iso = h.isolated_cells()
    regions = [c.rect for c in iso]
    segs = ([("h", y, x0, x1) for y, x0, x1 in mesh.interior_hsegments()]
            + [("v", x, y0, y1) for x, y0, y1 in mesh.interior_vsegments()])
    parts = []
    domains = [mesh.domain] + regions
    for i, dom in enumerate(domains):
        inner = [r for r in regions if r != dom
                 and dom[0] <= r[0] and r[1] <= dom[1]
                 and dom[2] <= r[2] and r[3] <= dom[3]]
        if i > 0:
            keep = [s for s in segs if _strictly_inside(s, dom)]
        else:
            keep = list(segs)
        keep = [s for s in keep if not any(_strictly_inside(s, r) for r in inner)]
        hspans = [(c, lo, hi) for k, c, lo, hi in keep if k == "h"]
        vspans = [(c, lo, hi) for k, c, lo, hi in keep if k == "v"]
        parts.append(build_from_spans(dom, hspans, vspans))
    return parts


# -- branches, entering l-edges, characteristic vertices ----------------------------


@dataclass
class Branch:
    level: int
    index: int
    ledges: tuple
    entering: LEdge
    entering_vertex: object  # None for the level-0 branch
    dist: dict = field(default_factory=dict)
    char_vertex: dict = field(default_factory=dict)


@dataclass
class BranchDecomposition:
    branches: list
    branch_of: dict  # LEdge -> Branch
    annotation: LevelAnnotation

    def branch_counts(self):
        counts = {}
        for b in self.branches:
            counts[b.level] = counts.get(b.level, 0) + 1
        return counts

    def sort_key(self, ledge: LEdge):
        """Key realizing the ordering <1 with a deterministic tie-break."""
        b = self.branch_of[ledge]
        return (b.level, b.index, b.dist[ledge],
                (ledge.orientation, ledge.coord, ledge.lo))

    def ordered_ledges(self):
        return sorted(self.branch_of, key=self.sort_key)


def _ledge_intersections(mesh: TMesh, levels: LevelAnnotation):
    """For each interior l-edge, its continuous partners and linking vertices."""
    h_by_line = {}
    v_by_line = {}
    for l in mesh.ledges:
        (h_by_line if l.orientation == "h" else v_by_line).setdefault(l.coord, []).append(l)
    pairs = {l: [] for l in mesh.ledges}
    for v in mesh.crossing_vertices:
        hl = next((l for l in h_by_line.get(v[1], []) if l.lo <= v[0] <= l.hi), None)
        vl = next((l for l in v_by_line.get(v[0], []) if l.lo <= v[1] <= l.hi), None)
        if hl is not None and vl is not None:
            pairs[hl].append((vl, v))
            pairs[vl].append((hl, v))
    return pairs


def branch_decomposition(h) -> BranchDecomposition:
    """Branches of same-level l-edges with entering l-edges, distances and
    characteristic vertices; requires a crossing-vertex-connected mesh."""
    mesh = h.realized if isinstance(h, HMesh) else h
    ann = annotate_levels(h)
    if not mesh.crossing_vertices:
        raise NoCrossingVertices("mesh has no crossing vertices")
    if crossing_components(mesh) != 1:
        raise NotCvc("mesh is not crossing-vertex connected")
    pairs = _ledge_intersections(mesh, ann)
    by_level = {}
    for l in mesh.ledges:
        by_level.setdefault(ann.ledge_level[l], []).append(l)

    branches = []
    branch_of = {}
    for level in sorted(by_level):
        ledges = set(by_level[level])
        comps = []
        todo = set(ledges)
        while todo:
            seed = min(todo)
            comp = {seed}
            stack = [seed]
            todo.discard(seed)
            while stack:
                cur = stack.pop()
                for other, _v in pairs[cur]:
                    if other in todo:
                        todo.discard(other)
                        comp.add(other)
                        stack.append(other)
            comps.append(comp)
        comps.sort(key=lambda c: min(c))
        if level == 0 and len(comps) != 1:
            raise NotCvc("level-0 l-edges do not form a single branch")
        for idx, comp in enumerate(comps, start=1):
            if level == 0:
                entering = min(comp)
                entering_vertex = None
            else:
                candidates = []
                for l in comp:
                    for other, v in pairs[l]:
                        if ann.ledge_level[other] < level:
                            candidates.append(((v[1], v[0]), other, v))
                if not candidates:
                    raise NotCvc(f"level-{level} branch has no entering l-edge")
                _, entering, entering_vertex = min(candidates)
            br = Branch(level, idx, tuple(sorted(comp)), entering, entering_vertex)
            _branch_bfs(br, pairs)
            branches.append(br)
            for l in comp:
                branch_of[l] = br
    return BranchDecomposition(branches, branch_of, ann)


def _branch_bfs(br: Branch, pairs):
    """Distances (series lengths) from the entering l-edge and characteristic
    vertices (intersection with a minimal-series predecessor, ties broken by
    lexicographically smallest (y, x))."""
    members = set(br.ledges)
    dist = {br.entering: 1}
    frontier = [br.entering]
    while frontier:
        nxt = []
        for cur in frontier:
            for other, _v in pairs[cur]:
                if other in members and other not in dist:
                    dist[other] = dist[cur] + 1
                    nxt.append(other)
        frontier = nxt
    missing = members - set(dist)
    if missing:
        raise NotCvc(f"branch members unreachable from the entering l-edge: {sorted(missing)}")
    br.dist = dist
    for l in br.ledges:
        if l == br.entering:
            continue
        cands = [v for other, v in pairs[l]
                 if other in dist and dist[other] == dist[l] - 1]
        br.char_vertex[l] = min(cands, key=lambda v: (v[1], v[0]))


# -- support l-edges -------------------------------------------------------------


def _ledge_at(mesh: TMesh, orientation, coord, lo, hi) -> LEdge:
    for l in mesh.ledges + mesh.boundary_ledges:
        if l.orientation == orientation and l.coord == coord and l.lo <= lo and hi <= l.hi:
            return l
    raise NotHierarchical(
        f"no {orientation} l-edge at {coord} covering [{lo},{hi}]")


def support_ledges(h: HMesh, ledge: LEdge):
    """The two support l-edges (below/above for horizontal, left/right for
    vertical) bracketing the given interior l-edge."""
    mesh = h.realized
    ann = annotate_levels(h)
    if ledge.is_boundary or ledge not in ann.ledge_level:
        raise NotInterior(f"{ledge} is not an interior l-edge")
    level = ann.ledge_level[ledge]
    hl, vl = (ann.hline_level, ann.vline_level)
    if level == 0:
        if ledge.orientation == "h":
            coords = sorted(y for y, l in hl.items() if l == 0)
            i = coords.index(ledge.coord)
            lo_c, hi_c = coords[i - 1], coords[i + 1]
        else:
            coords = sorted(x for x, l in vl.items() if l == 0)
            i = coords.index(ledge.coord)
            lo_c, hi_c = coords[i - 1], coords[i + 1]
    else:
        cells = [c for c in h.subdivided_cells()
                 if c.level == level - 1
                 and (c.center[1] if ledge.orientation == "h" else c.center[0]) == ledge.coord]
        if ledge.orientation == "h":
            cells = [c for c in cells if c.x0 < ledge.hi and ledge.lo < c.x1]
            lo_set = {c.y0 for c in cells}
            hi_set = {c.y1 for c in cells}
        else:
            cells = [c for c in cells if c.y0 < ledge.hi and ledge.lo < c.y1]
            lo_set = {c.x0 for c in cells}
            hi_set = {c.x1 for c in cells}
        if not cells or len(lo_set) != 1 or len(hi_set) != 1:
            raise NotHierarchical(f"cannot identify the inserted crosses of {ledge}")
        lo_c, hi_c = lo_set.pop(), hi_set.pop()
    return (_ledge_at(mesh, ledge.orientation, lo_c, ledge.lo, ledge.hi),
            _ledge_at(mesh, ledge.orientation, hi_c, ledge.lo, ledge.hi))


# -- random generation -------------------------------------------------------------


def generate_random(seed, base_rows, base_cols, levels, subdivision_prob,
                    require_cvc=False) -> HMesh:
    """Deterministic random hierarchical mesh.

    Subdivides each cell of the current level with the given probability;
    with require_cvc, any isolated pick is repaired by also subdividing its
    first same-level neighbor until no isolated cells remain.
    """
    if base_rows < 1 or base_cols < 1 or levels < 0:
        raise ParseError("base_rows, base_cols >= 1 and levels >= 0 required")
    if not (0 <= subdivision_prob <= 1):
        raise ParseError("subdivision probability must be in [0, 1]")
    rng = random.Random(seed)
    h = HMesh(range(base_cols + 1), range(base_rows + 1))
    subs = []
    for level in range(levels):
        cells = h.cells_at_level(level)
        chosen = [c for c in cells if rng.random() < subdivision_prob]
        if require_cvc:
            chosen_keys = {c.key() for c in chosen}
            changed = True
            while changed:
                changed = False
                for c in list(chosen):
                    nbrs = h._same_level_neighbors(c)
                    if nbrs and not any(n.key() in chosen_keys for n in nbrs):
                        pick = min(nbrs, key=lambda n: (n.y0, n.x0))
                        chosen.append(pick)
                        chosen_keys.add(pick.key())
                        changed = True
        if not chosen:
            continue
        subs.extend((level, c.center) for c in sorted(chosen, key=lambda c: (c.y0, c.x0)))
        h = HMesh(h.base_x, h.base_y, subs)
    return h


# -- JSON -------------------------------------------------------------------------


def hmesh_to_json(h: HMesh) -> dict:
    doc = {
        "base": {"x": [rat_to_json(x) for x in h.base_x],
                 "y": [rat_to_json(y) for y in h.base_y]},
        "subdivide": [{"level": l, "center": [rat_to_json(c[0]), rat_to_json(c[1])]}
                      for l, c in h.subdivisions],
    }
    return doc


def hmesh_from_json(doc) -> HMesh:
    try:
        base = doc["base"]
        xs = [rat_from_json(v) for v in base["x"]]
        ys = [rat_from_json(v) for v in base["y"]]
        subs = [(int(s["level"]), (rat_from_json(s["center"][0]), rat_from_json(s["center"][1])))
                for s in doc.get("subdivide", [])]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"bad hierarchical mesh description: {e}") from e
    return HMesh(xs, ys, subs)
