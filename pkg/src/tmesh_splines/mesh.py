"""Exact-rational regular T-meshes.

A regular T-mesh is an axis-aligned rectangle partitioned into axis-aligned
rectangular cells; T-junctions are allowed.  Meshes are normalized from either
a cell list or interior segment spans into one canonical immutable structure:
minimal edge segments (between adjacent collinear vertices), vertices, and
cells.  All coordinates are exact rationals and all predicates are exact
equality tests, so every derived count (and the rank computations downstream)
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from bisect import bisect_right, bisect_left

from .rational import rat, rat_from_json, rat_to_json, ZERO


class MeshError(Exception):
    """Base class for all mesh construction/usage errors."""


class NotRegular(MeshError):
    """The cells do not tile the domain rectangle with rectangles."""


class Overlap(MeshError):
    """Two cell interiors intersect."""


class DanglingSegment(MeshError):
    """A segment endpoint does not lie on any perpendicular segment."""


class InvalidDegree(MeshError):
    """Degree parameter out of range for the requested operation."""


class InvalidMargin(MeshError):
    """Extension margin must be positive."""


class NoCrossingVertices(MeshError):
    """The operation requires at least one crossing vertex."""


class ParseError(MeshError):
    """Malformed mesh description."""


# Vertex classes per the five-way classification.
CROSSING = "crossing"
HTEE = "htee"  # endpoint of a horizontal edge on a vertical through-line
VTEE = "vtee"  # endpoint of a vertical edge on a horizontal through-line
BOUNDARY = "boundary"
CORNER = "corner"


@dataclass(frozen=True, order=True)
class LEdge:
    """A maximal mesh-aligned line segment (chain of collinear edges).

    For orientation 'h' the line is y = coord and the span is in x; for 'v'
    the line is x = coord and the span is in y.
    """

    orientation: str
    coord: object
    lo: object
    hi: object
    is_boundary: bool = False

    @property
    def endpoints(self):
        if self.orientation == "h":
            return ((self.lo, self.coord), (self.hi, self.coord))
        return ((self.coord, self.lo), (self.coord, self.hi))

    def contains_point(self, p) -> bool:
        x, y = p
        if self.orientation == "h":
            return y == self.coord and self.lo <= x <= self.hi
        return x == self.coord and self.lo <= y <= self.hi


@dataclass
class MeshStats:
    F: int
    V: int  # interior vertices
    V_plus: int
    V_T: int
    V_b: int  # boundary vertices including corners
    V_bT: int  # boundary vertices excluding corners
    E_h: int  # interior horizontal minimal segments
    E_v: int
    E: int  # interior l-edges
    E_h_ledges: int
    E_v_ledges: int


def _merge_intervals(ivals):
    """Merge a list of (lo, hi) rational intervals; touching spans fuse."""
    ivals = sorted(ivals)
    out = []
    for lo, hi in ivals:
        if lo >= hi:
            raise ParseError(f"degenerate span ({lo}, {hi})")
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _in_spans(spans, v) -> bool:
    """Is v inside (closed) one of the sorted disjoint spans?"""
    i = bisect_right(spans, (v,))
    if i < len(spans) and spans[i][0] == v:
        return True
    if i > 0:
        lo, hi = spans[i - 1]
        return lo <= v <= hi
    return False


def _covers(spans, lo, hi) -> bool:
    """Does one of the sorted disjoint spans contain [lo, hi]?"""
    i = bisect_right(spans, (lo,))
    if i < len(spans) and spans[i][0] == lo:
        return spans[i][1] >= hi
    if i > 0:
        s, e = spans[i - 1]
        return s <= lo and hi <= e
    return False


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class TMesh:
    """Immutable regular T-mesh.

    Use :func:`build_mesh`, :func:`tensor_mesh` or :func:`mesh_from_json` to
    construct one; the constructor itself expects pre-normalized data.
    """

    def __init__(self, domain, hsegments, vsegments, cells, vertices):
        self.domain = domain  # (xl, xr, yb, yt)
        self.hsegments = tuple(hsegments)  # (y, x0, x1) minimal, sorted
        self.vsegments = tuple(vsegments)  # (x, y0, y1) minimal, sorted
        self.cells = tuple(cells)  # (x0, x1, y0, y1) sorted by (y0, x0)
        self.vertices = tuple(vertices)

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.domain, self.hsegments, self.vsegments)

    def __eq__(self, other):
        return isinstance(other, TMesh) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        xl, xr, yb, yt = self.domain
        return f"TMesh([{xl},{xr}]x[{yb},{yt}], F={len(self.cells)})"

    # -- basic predicates ----------------------------------------------------

    def is_boundary_point(self, p) -> bool:
        xl, xr, yb, yt = self.domain
        x, y = p
        return x == xl or x == xr or y == yb or y == yt

    def is_corner(self, p) -> bool:
        xl, xr, yb, yt = self.domain
        return p in ((xl, yb), (xr, yb), (xl, yt), (xr, yt))

    def interior_hsegments(self):
        xl, xr, yb, yt = self.domain
        return [s for s in self.hsegments if s[0] != yb and s[0] != yt]

    def interior_vsegments(self):
        xl, xr, yb, yt = self.domain
        return [s for s in self.vsegments if s[0] != xl and s[0] != xr]

    # -- vertex classification ---------------------------------------------

    @cached_property
    def vertex_classes(self):
        """dict vertex -> one of crossing/htee/vtee/boundary/corner."""
        dirs = {v: set() for v in self.vertices}
        for y, x0, x1 in self.hsegments:
            dirs[(x0, y)].add("E")
            dirs[(x1, y)].add("W")
        for x, y0, y1 in self.vsegments:
            dirs[(x, y0)].add("N")
            dirs[(x, y1)].add("S")
        classes = {}
        for v, d in dirs.items():
            if self.is_corner(v):
                classes[v] = CORNER
            elif self.is_boundary_point(v):
                classes[v] = BOUNDARY
            else:
                k = len(d)
                if k == 4:
                    classes[v] = CROSSING
                elif k == 3:
                    # The through-line direction pair decides the type.
                    classes[v] = HTEE if {"N", "S"} <= d else VTEE
                else:
                    raise NotRegular(f"interior vertex {v} has degree {k}")
        return classes

    @cached_property
    def crossing_vertices(self):
        return tuple(
            v for v in sorted(self.vertices, key=lambda p: (p[1], p[0]))
            if self.vertex_classes[v] == CROSSING
        )

    # -- l-edges -------------------------------------------------------------

    @cached_property
    def ledges(self):
        """Interior l-edges, sorted (horizontal before vertical)."""
        out = []
        for orient, segs in (("h", self.interior_hsegments()), ("v", self.interior_vsegments())):
            by_line = {}
            for c, a, b in segs:
                by_line.setdefault(c, []).append((a, b))
            for c in sorted(by_line):
                runs = sorted(by_line[c])
                lo, hi = runs[0]
                for a, b in runs[1:]:
                    if a == hi:
                        hi = b
                    else:
                        out.append(LEdge(orient, c, lo, hi))
                        lo, hi = a, b
                out.append(LEdge(orient, c, lo, hi))
        return tuple(sorted(out))

    @cached_property
    def boundary_ledges(self):
        xl, xr, yb, yt = self.domain
        return (
            LEdge("h", yb, xl, xr, True),
            LEdge("h", yt, xl, xr, True),
            LEdge("v", xl, yb, yt, True),
            LEdge("v", xr, yb, yt, True),
        )

    def all_ledges(self):
        return tuple(self.ledges) + self.boundary_ledges

    def ledge_through(self, p, orientation):
        """The (unique) l-edge of the given orientation through point p."""
        for l in self.ledges:
            if l.orientation == orientation and l.contains_point(p):
                return l
        for l in self.boundary_ledges:
            if l.orientation == orientation and l.contains_point(p):
                return l
        return None

    # -- statistics ----------------------------------------------------------

    @cached_property
    def stats(self) -> MeshStats:
        classes = self.vertex_classes
        v_plus = sum(1 for c in classes.values() if c == CROSSING)
        v_t = sum(1 for c in classes.values() if c in (HTEE, VTEE))
        v_bt = sum(1 for c in classes.values() if c == BOUNDARY)
        v_b = v_bt + 4
        e_h = len(self.interior_hsegments())
        e_v = len(self.interior_vsegments())
        hl = sum(1 for l in self.ledges if l.orientation == "h")
        vl = len(self.ledges) - hl
        st = MeshStats(
            F=len(self.cells), V=v_plus + v_t, V_plus=v_plus, V_T=v_t,
            V_b=v_b, V_bT=v_bt, E_h=e_h, E_v=e_v, E=len(self.ledges),
            E_h_ledges=hl, E_v_ledges=vl,
        )
        # Topological identities; a failure here is an internal bug.
        assert st.F == st.V_plus + st.E + 1, f"F={st.F} != V+ + E + 1"
        assert st.V_T + st.V_bT == 2 * st.E, "T-vertex / l-edge endpoint count"
        return st

    # -- cell lookup ---------------------------------------------------------

    @cached_property
    def _grid(self):
        """Micro-grid (X, Y, micro->cell index map) for point location."""
        xs = sorted({self.domain[0], self.domain[1]} | {x for x, _, _ in self.vsegments})
        ys = sorted({self.domain[2], self.domain[3]} | {y for y, _, _ in self.hsegments})
        cell_of = {}
        for ci, (x0, x1, y0, y1) in enumerate(self.cells):
            i0, i1 = xs.index(x0), xs.index(x1)
            j0, j1 = ys.index(y0), ys.index(y1)
            for i in range(i0, i1):
                for j in range(j0, j1):
                    cell_of[(i, j)] = ci
        return xs, ys, cell_of

    def locate_cell(self, p, sx=1, sy=1):
        """Index of the cell containing p, biased toward side (sx, sy).

        For a point on a mesh line the bias picks the adjacent cell on the
        +/- side in each axis.  Returns None outside the domain.
        """
        xs, ys, cell_of = self._grid
        x, y = p
        xl, xr, yb, yt = self.domain
        if not (xl <= x <= xr and yb <= y <= yt):
            return None
        i = bisect_right(xs, x) - 1
        if i == len(xs) - 1 or (x == xs[i] and sx < 0):
            i -= 1
        j = bisect_right(ys, y) - 1
        if j == len(ys) - 1 or (y == ys[j] and sy < 0):
            j -= 1
        if i < 0 or j < 0:
            return None
        return cell_of[(i, j)]

    @cached_property
    def _cells_by_side(self):
        """Maps side coordinate -> sorted (lo, hi, cell index) lists."""
        bottom, top, left, right = {}, {}, {}, {}
        for ci, (x0, x1, y0, y1) in enumerate(self.cells):
            bottom.setdefault(y0, []).append((x0, x1, ci))
            top.setdefault(y1, []).append((x0, x1, ci))
            left.setdefault(x0, []).append((y0, y1, ci))
            right.setdefault(x1, []).append((y0, y1, ci))
        for d in (bottom, top, left, right):
            for k in d:
                d[k].sort()
        return bottom, top, left, right

    def _find_side_cell(self, index, coord, lo, hi):
        lst = index.get(coord)
        if not lst:
            return None
        i = bisect_right(lst, (lo, hi, len(self.cells))) - 1
        for k in (i, i + 1):
            if 0 <= k < len(lst):
                a, b, ci = lst[k]
                if a <= lo and hi <= b:
                    return ci
        return None


# -- builders ----------------------------------------------------------------


def _normalize_from_spans(domain, hspans, vspans):
    xl, xr, yb, yt = domain
    if not (xl < xr and yb < yt):
        raise ParseError("domain rectangle is degenerate")
    hline = {}
    for y, x0, x1 in hspans:
        if not (yb <= y <= yt and xl <= x0 < x1 <= xr):
            raise ParseError(f"horizontal span y={y} [{x0},{x1}] outside domain")
        hline.setdefault(y, []).append((x0, x1))
    vline = {}
    for x, y0, y1 in vspans:
        if not (xl <= x <= xr and yb <= y0 < y1 <= yt):
            raise ParseError(f"vertical span x={x} [{y0},{y1}] outside domain")
        vline.setdefault(x, []).append((y0, y1))
    hline.setdefault(yb, []).append((xl, xr))
    hline.setdefault(yt, []).append((xl, xr))
    vline.setdefault(xl, []).append((yb, yt))
    vline.setdefault(xr, []).append((yb, yt))
    hline = {y: _merge_intervals(sp) for y, sp in hline.items()}
    vline = {x: _merge_intervals(sp) for x, sp in vline.items()}

    # Vertices: every point lying on both a horizontal and a vertical span.
    verts_on_h = {y: set() for y in hline}
    verts_on_v = {x: set() for x in vline}
    for y, hsp in hline.items():
        for x, vsp in vline.items():
            if _in_spans(hsp, x) and _in_spans(vsp, y):
                verts_on_h[y].add(x)
                verts_on_v[x].add(y)

    # Every span endpoint must be a vertex, else it dangles mid-cell.
    for y, hsp in hline.items():
        for lo, hi in hsp:
            for x in (lo, hi):
                if x not in verts_on_h[y]:
                    raise DanglingSegment(f"endpoint ({x},{y}) of a horizontal span")
    for x, vsp in vline.items():
        for lo, hi in vsp:
            for y in (lo, hi):
                if y not in verts_on_v[x]:
                    raise DanglingSegment(f"endpoint ({x},{y}) of a vertical span")

    # Split spans at vertices into minimal segments.
    hsegments = []
    for y, hsp in hline.items():
        xs = sorted(verts_on_h[y])
        for lo, hi in hsp:
            run = [x for x in xs if lo <= x <= hi]
            hsegments.extend((y, a, b) for a, b in zip(run, run[1:]))
    vsegments = []
    for x, vsp in vline.items():
        ys = sorted(verts_on_v[x])
        for lo, hi in vsp:
            run = [y for y in ys if lo <= y <= hi]
            vsegments.extend((x, a, b) for a, b in zip(run, run[1:]))

    # Reconstruct cells by merging micro-cells across uncovered micro-edges.
    X = sorted(vline)
    Y = sorted(hline)
    nx, ny = len(X) - 1, len(Y) - 1
    uf = _UnionFind(nx * ny)
    for i in range(nx):
        for j in range(ny):
            if i + 1 < nx and not _covers(vline[X[i + 1]], Y[j], Y[j + 1]):
                uf.union(i * ny + j, (i + 1) * ny + j)
            if j + 1 < ny and not _covers(hline[Y[j + 1]], X[i], X[i + 1]):
                uf.union(i * ny + j, i * ny + j + 1)
    regions = {}
    for i in range(nx):
        for j in range(ny):
            regions.setdefault(uf.find(i * ny + j), []).append((i, j))
    cells = []
    for micro in regions.values():
        is_ = [i for i, _ in micro]
        js = [j for _, j in micro]
        x0, x1 = X[min(is_)], X[max(is_) + 1]
        y0, y1 = Y[min(js)], Y[max(js) + 1]
        area = sum((X[i + 1] - X[i]) * (Y[j + 1] - Y[j]) for i, j in micro)
        if area != (x1 - x0) * (y1 - y0):
            raise NotRegular("segments split the domain into a non-rectangular cell")
        cells.append((x0, x1, y0, y1))
    cells.sort(key=lambda c: (c[2], c[0]))

    vertices = sorted({(x, y) for y in hline for x in verts_on_h[y]})
    mesh = TMesh(domain, sorted(hsegments), sorted(vsegments), cells, vertices)
    mesh.vertex_classes  # force degree validation
    return mesh


def build_from_spans(domain, hspans, vspans) -> TMesh:
    """Build a mesh from a domain rectangle plus interior segment spans.

    Spans may be fragmented or overlapping; they are merged and split at
    vertices.  Boundary spans are implied and may be included or omitted.
    """
    return _normalize_from_spans(domain, hspans, vspans)


def build_from_cells(cells, domain=None) -> TMesh:
    """Build a mesh from a cell list; the cells must tile the domain."""
    if not cells:
        raise ParseError("cell list is empty")
    for x0, x1, y0, y1 in cells:
        if not (x0 < x1 and y0 < y1):
            raise ParseError(f"cell [{x0},{x1}]x[{y0},{y1}] has no area")
    if domain is None:
        domain = (
            min(c[0] for c in cells), max(c[1] for c in cells),
            min(c[2] for c in cells), max(c[3] for c in cells),
        )
    xl, xr, yb, yt = domain
    for c in cells:
        if not (xl <= c[0] and c[1] <= xr and yb <= c[2] and c[3] <= yt):
            raise NotRegular(f"cell {c} sticks out of the domain")
    cells = sorted(cells, key=lambda c: (c[2], c[0]))
    for i in range(len(cells)):
        x0, x1, y0, y1 = cells[i]
        for j in range(i + 1, len(cells)):
            a0, a1, b0, b1 = cells[j]
            if x0 < a1 and a0 < x1 and y0 < b1 and b0 < y1:
                raise Overlap(f"cells {cells[i]} and {cells[j]} overlap")
    area = sum((c[1] - c[0]) * (c[3] - c[2]) for c in cells)
    if area != (xr - xl) * (yt - yb):
        raise NotRegular("cells do not cover the domain rectangle")
    hspans = []
    vspans = []
    for x0, x1, y0, y1 in cells:
        if y0 != yb:
            hspans.append((y0, x0, x1))
        if y1 != yt:
            hspans.append((y1, x0, x1))
        if x0 != xl:
            vspans.append((x0, y0, y1))
        if x1 != xr:
            vspans.append((x1, y0, y1))
    mesh = _normalize_from_spans(domain, hspans, vspans)
    if list(mesh.cells) != cells:
        raise NotRegular("cell list does not form a T-mesh")
    return mesh


def tensor_mesh(xs, ys) -> TMesh:
    """Tensor-product mesh with the given sorted line coordinates."""
    xs = [rat(x) for x in xs]
    ys = [rat(y) for y in ys]
    if len(xs) < 2 or len(ys) < 2 or sorted(set(xs)) != xs or sorted(set(ys)) != ys:
        raise ParseError("tensor mesh needs >= 2 strictly increasing coordinates per axis")
    domain = (xs[0], xs[-1], ys[0], ys[-1])
    hspans = [(y, xs[0], xs[-1]) for y in ys[1:-1]]
    vspans = [(x, ys[0], ys[-1]) for x in xs[1:-1]]
    return build_from_spans(domain, hspans, vspans)


def build_mesh(spec) -> TMesh:
    """Build a validated mesh from a description dict (see mesh JSON format)."""
    if "cells" in spec:
        cells = [
            (rat_from_json(c["x0"]), rat_from_json(c["x1"]),
             rat_from_json(c["y0"]), rat_from_json(c["y1"]))
            for c in spec["cells"]
        ]
        domain = None
        if "domain" in spec:
            d = spec["domain"]
            domain = (rat_from_json(d["x"][0]), rat_from_json(d["x"][1]),
                      rat_from_json(d["y"][0]), rat_from_json(d["y"][1]))
        return build_from_cells(cells, domain)
    try:
        d = spec["domain"]
        domain = (rat_from_json(d["x"][0]), rat_from_json(d["x"][1]),
                  rat_from_json(d["y"][0]), rat_from_json(d["y"][1]))
        hspans = [(rat_from_json(s["y"]), rat_from_json(s["x0"]), rat_from_json(s["x1"]))
                  for s in spec.get("hsegments", [])]
        vspans = [(rat_from_json(s["x"]), rat_from_json(s["y0"]), rat_from_json(s["y1"]))
                  for s in spec.get("vsegments", [])]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"bad mesh description: {e}") from e
    return build_from_spans(domain, hspans, vspans)


# -- operations ---------------------------------------------------------------


def classify_vertices(mesh: TMesh):
    return dict(mesh.vertex_classes)


def extract_ledges(mesh: TMesh):
    return list(mesh.ledges)


def mesh_stats(mesh: TMesh) -> MeshStats:
    return mesh.stats


def associated_tensor_mesh(mesh: TMesh) -> TMesh:
    """The tensor-product mesh obtained by extending all interior l-edges."""
    xl, xr, yb, yt = mesh.domain
    xs = sorted({xl, xr} | {l.coord for l in mesh.ledges if l.orientation == "v"})
    ys = sorted({yb, yt} | {l.coord for l in mesh.ledges if l.orientation == "h"})
    return tensor_mesh(xs, ys)


def extension_lines(mesh: TMesh, m: int, n: int, margin=None):
    """Coordinates of the surrounding grid lines of the extension.

    Returns (new_domain, added_xs, added_ys) where the added line lists
    include the old boundary coordinates.
    """
    if m < 1 or n < 1:
        raise InvalidDegree("extension needs m, n >= 1")
    xl, xr, yb, yt = mesh.domain
    if margin is None:
        mx = (xr - xl) / 4
        my = (yt - yb) / 4
    else:
        mx = my = rat(margin)
        if mx <= 0:
            raise InvalidMargin("margin must be > 0")
    added_xs = sorted({xl - i * mx for i in range(m + 1)} | {xr + i * mx for i in range(m + 1)})
    added_ys = sorted({yb - i * my for i in range(n + 1)} | {yt + i * my for i in range(n + 1)})
    new_domain = (added_xs[0], added_xs[-1], added_ys[0], added_ys[-1])
    return new_domain, added_xs, added_ys


def extend(mesh: TMesh, m: int, n: int, margin=None) -> TMesh:
    """Extension mesh: m extra lines outside each vertical side, n outside
    each horizontal side (the surrounding grid has 2(m+1) vertical and
    2(n+1) horizontal lines counting the old boundary).  Interior l-edges
    with an endpoint on the old boundary are extended to the new boundary.
    """
    new_domain, added_xs, added_ys = extension_lines(mesh, m, n, margin)
    X0, X1, Y0, Y1 = new_domain
    xl, xr, yb, yt = mesh.domain
    hspans = [(y, X0, X1) for y in added_ys if y not in (Y0, Y1)]
    vspans = [(x, Y0, Y1) for x in added_xs if x not in (X0, X1)]
    for l in mesh.ledges:
        if l.orientation == "h":
            lo = X0 if l.lo == xl else l.lo
            hi = X1 if l.hi == xr else l.hi
            hspans.append((l.coord, lo, hi))
        else:
            lo = Y0 if l.lo == yb else l.lo
            hi = Y1 if l.hi == yt else l.hi
            vspans.append((l.coord, lo, hi))
    return build_from_spans(new_domain, hspans, vspans)


def restrict_to_domain(mesh: TMesh, domain) -> TMesh:
    """The sub-mesh of cells inside the given rectangle (must tile it)."""
    xl, xr, yb, yt = domain
    cells = [c for c in mesh.cells
             if xl <= c[0] and c[1] <= xr and yb <= c[2] and c[3] <= yt]
    return build_from_cells(cells, domain)


OUTSIDE = None


def edge_segments_with_sides(mesh: TMesh):
    """Each minimal segment with its adjacent cells.

    Yields (('h'|'v', coord, lo, hi), side_a, side_b) where for horizontal
    segments side_a is the cell below and side_b the cell above, and for
    vertical segments side_a is left / side_b is right; a missing side
    (domain boundary) is None.
    """
    bottom, top, left, right = mesh._cells_by_side
    out = []
    for y, x0, x1 in mesh.hsegments:
        below = mesh._find_side_cell(top, y, x0, x1)
        above = mesh._find_side_cell(bottom, y, x0, x1)
        out.append((("h", y, x0, x1), below, above))
    for x, y0, y1 in mesh.vsegments:
        lft = mesh._find_side_cell(right, x, y0, y1)
        rgt = mesh._find_side_cell(left, x, y0, y1)
        out.append((("v", x, y0, y1), lft, rgt))
    return out


# -- JSON ---------------------------------------------------------------------


def mesh_to_json(mesh: TMesh) -> dict:
    """Serialize a mesh with bit-exact rationals; interior l-edges as spans."""
    xl, xr, yb, yt = mesh.domain
    doc = {
        "domain": {"x": [rat_to_json(xl), rat_to_json(xr)],
                   "y": [rat_to_json(yb), rat_to_json(yt)]},
        "hsegments": [], "vsegments": [],
    }
    for l in mesh.ledges:
        if l.orientation == "h":
            doc["hsegments"].append({"y": rat_to_json(l.coord),
                                     "x0": rat_to_json(l.lo), "x1": rat_to_json(l.hi)})
        else:
            doc["vsegments"].append({"x": rat_to_json(l.coord),
                                     "y0": rat_to_json(l.lo), "y1": rat_to_json(l.hi)})
    return doc


def mesh_from_json(doc) -> TMesh:
    return build_mesh(doc)
