import pytest

from tmesh_splines.rational import rat
from tmesh_splines.mesh import NoCrossingVertices, tensor_mesh
from tmesh_splines.hierarchy import (
    HMesh, NoSuchCell, AlreadySubdivided, NotCvc, NotInterior,
    subdivide, annotate_levels, isolated_cells, is_crossing_vertex_connected,
    witness_path, decompose, branch_decomposition, support_ledges,
    generate_random, extend_hmesh, crossing_components,
    hmesh_to_json, hmesh_from_json,
)


def test_subdivide_single_cell():
    h = HMesh([0, 2], [0, 2]).subdivide(0, (1, 1))
    mesh = h.realized
    assert mesh.stats.F == 4
    assert (rat(1), rat(1)) in mesh.vertices
    ann = annotate_levels(h)
    assert ann.vertex_level[(rat(1), rat(1))] == (1, 1)


def test_subdivide_errors():
    h = HMesh([0, 2], [0, 2])
    with pytest.raises(NoSuchCell):
        h.subdivide(0, (rat(1), rat(3)))
    with pytest.raises(NoSuchCell):
        h.subdivide(1, (rat(1), rat(1)))
    h2 = h.subdivide(0, (1, 1))
    with pytest.raises(AlreadySubdivided):
        h2.subdivide(0, (1, 1))


def test_adjacent_subdivision_makes_mid_edge_crossing():
    # two horizontally adjacent cells; the shared-edge midpoint becomes a
    # crossing vertex of mixed level
    h = HMesh([0, 2, 4], [0, 2]).subdivide(0, (1, 1)).subdivide(0, (3, 1))
    ann = annotate_levels(h)
    assert ann.vertex_level[(rat(2), rat(1))] == (1, 0)
    mesh = h.realized
    led = mesh.ledge_through((rat(2), rat(1)), "h")
    assert (led.lo, led.hi) == (rat(0), rat(4))  # merged arms


def test_levels_trivial_and_one_cross(fig6):
    level0 = HMesh([0, 1, 2], [0, 1, 2])
    ann = annotate_levels(level0)
    assert set(ann.ledge_level.values()) == {0}
    assert all(v == (0, 0) for v in ann.vertex_level.values())
    ann6 = annotate_levels(fig6)
    cross_levels = sorted(ann6.ledge_level[l] for l in fig6.realized.ledges)
    assert cross_levels == [0, 0, 0, 0, 1, 1]
    assert ann6.vertex_level[(rat(3, 2), rat(3, 2))] == (1, 1)


def test_levels_fig5_configuration(fig5):
    # the two-vertex configuration: same-level intersection and mixed one
    ann = annotate_levels(fig5)
    assert ann.vertex_level[(rat(11, 8), rat(3, 2))] == (2, 2)
    assert ann.vertex_level[(rat(7, 4), rat(3, 2))] == (2, 1)


def test_extension_levels(fig6):
    ext = extend_hmesh(fig6, 2, 2, rat(1, 4))
    ann = annotate_levels(ext)
    # margin lines and old boundary lines carry level 0
    assert ann.hline_level[rat(-1, 4)] == 0
    assert ann.hline_level[rat(0)] == 0
    # the cross arms keep level 1
    assert ann.vline_level[rat(3, 2)] == 1


def test_isolated_cells_fig6_fig5(fig5, fig6):
    iso, delta = isolated_cells(fig6)
    assert delta == 2 and len(iso) == 1
    assert iso[0].rect == (rat(1), rat(2), rat(1), rat(2))
    iso5, delta5 = isolated_cells(fig5)
    assert delta5 == 2
    assert [c.rect for c in iso5] == [(rat(0), rat(1, 2), rat(0), rat(1, 2))]
    level0 = HMesh([0, 1, 2], [0, 1, 2])
    assert isolated_cells(level0) == ([], 1)


def test_cvc(fig5, fig6, fig9, grid3):
    assert is_crossing_vertex_connected(grid3)
    assert not is_crossing_vertex_connected(fig6)
    assert not is_crossing_vertex_connected(fig5)
    assert is_crossing_vertex_connected(fig9)
    with pytest.raises(NoCrossingVertices):
        is_crossing_vertex_connected(tensor_mesh([0, 1], [0, 1]))


def test_witness_path_fig7(fig5):
    # fig7 is the same mesh as fig5; the highlighted pair is connected even
    # though the whole mesh is not crossing-vertex connected.
    mesh = fig5.realized
    a, b = (rat(11, 8), rat(1, 4)), (rat(17, 8), rat(13, 4))
    path = witness_path(mesh, a, b)
    assert path[0] == a and path[-1] == b
    crossing = set(mesh.crossing_vertices)
    for p in path:
        assert p in crossing
    for u, v in zip(path, path[1:]):
        assert u[0] == v[0] or u[1] == v[1]
    # the isolated cross center reaches nothing
    assert witness_path(mesh, (rat(1, 4), rat(1, 4)), a) is None


def test_cvc_iff_no_isolated_random():
    hit_isolated = hit_connected = 0
    for seed in range(40):
        h = generate_random(seed, 3, 3, 2, 0.35)
        if not h.realized.crossing_vertices:
            continue
        iso, _ = isolated_cells(h)
        cvc = is_crossing_vertex_connected(h.realized)
        assert cvc == (len(iso) == 0)
        hit_isolated += bool(iso)
        hit_connected += not iso
    assert hit_isolated > 3 and hit_connected > 3  # both sides exercised


def test_decompose_fig6(fig6):
    parts = decompose(fig6)
    assert len(parts) == 2
    whole, inner = parts
    assert whole.stats.F == 9  # subdivided cell's interior removed
    assert inner.domain == (rat(1), rat(2), rat(1), rat(2))
    assert inner.stats.F == 4
    st = fig6.realized.stats
    _, delta = isolated_cells(fig6)
    assert sum(p.stats.V_plus - p.stats.E + 1 for p in parts) == \
        st.V_plus - st.E + delta


def test_decompose_trivial(fig9):
    assert len(decompose(fig9)) == 1


def test_decompose_properties_random():
    for seed in range(25):
        h = generate_random(seed, 3, 3, 3, 0.3)
        parts = decompose(h)
        st = h.realized.stats
        iso, delta = isolated_cells(h)
        assert len(parts) == len(iso) + 1
        assert sum(p.stats.V_plus - p.stats.E + 1 for p in parts) == \
            st.V_plus - st.E + delta
        assert sum(p.stats.V_plus for p in parts) == st.V_plus
        assert sum(p.stats.E for p in parts) == st.E
        for p in parts:
            if p.crossing_vertices:
                assert crossing_components(p) == 1


def test_branch_decomposition_fig9(fig9):
    bd = branch_decomposition(fig9)
    assert bd.branch_counts() == {0: 1, 1: 1, 2: 2}
    # characteristic vertex level is (k, j) or (j, k) with j <= k
    for br in bd.branches:
        for l, v in br.char_vertex.items():
            kh, kv = bd.annotation.vertex_level[v]
            k = bd.annotation.ledge_level[l]
            assert max(kh, kv) <= k
            assert k in (kh, kv)


def test_branch_decomposition_tensor(grid3):
    bd = branch_decomposition(HMesh([0, 1, 2], [0, 1, 2]))
    assert bd.branch_counts() == {0: 1}
    order = bd.ordered_ledges()
    assert len(order) == 2


def test_branch_rejects_non_cvc(fig6):
    with pytest.raises(NotCvc):
        branch_decomposition(fig6)


def test_char_vertices_distinct_random():
    for seed in range(15):
        h = generate_random(seed, 3, 3, 2, 0.4, require_cvc=True)
        if not h.realized.crossing_vertices:
            continue
        bd = branch_decomposition(h)
        chars = [br.char_vertex[l] for br in bd.branches for l in br.char_vertex]
        assert len(chars) == len(set(chars))
        for br in bd.branches:
            for l, v in br.char_vertex.items():
                k = bd.annotation.ledge_level[l]
                kh, kv = bd.annotation.vertex_level[v]
                assert k == max(kh, kv)


def test_support_ledges_fig6(fig6):
    mesh = fig6.realized
    arm = mesh.ledge_through((rat(3, 2), rat(3, 2)), "h")
    lo, hi = support_ledges(fig6, arm)
    assert (lo.coord, hi.coord) == (rat(1), rat(2))
    line1 = mesh.ledge_through((rat(1, 2), rat(1)), "h")
    lo, hi = support_ledges(fig6, line1)
    assert (lo.coord, hi.coord) == (rat(0), rat(2))
    assert lo.is_boundary
    with pytest.raises(NotInterior):
        support_ledges(fig6, mesh.boundary_ledges[0])


def test_support_ledges_cover_random():
    # the vertical l-edges through the endpoints reach both support l-edges
    # with no crossing vertex strictly between (checked via coverage + level)
    for seed in range(10):
        h = generate_random(seed, 3, 3, 2, 0.4, require_cvc=True)
        ann = annotate_levels(h)
        for l in h.realized.ledges:
            lo, hi = support_ledges(h, l)
            assert lo.lo <= l.lo and l.hi <= lo.hi
            assert hi.lo <= l.lo and l.hi <= hi.hi
            k = ann.ledge_level[l]
            for s in (lo, hi):
                assert ann.ledge_level[s] < k or (k == 0 and ann.ledge_level[s] == 0)
            if l.orientation == "h":
                assert lo.coord < l.coord < hi.coord


def test_generate_random_contract():
    h0 = generate_random(3, 2, 4, 2, 0.0)
    assert not h0.subdivisions  # prob 0 keeps the tensor mesh
    a = generate_random(9, 3, 3, 2, 0.5, require_cvc=True)
    b = generate_random(9, 3, 3, 2, 0.5, require_cvc=True)
    assert a.subdivisions == b.subdivisions
    assert isolated_cells(a)[1] == 1


def test_hmesh_json_roundtrip(fig5):
    doc = hmesh_to_json(fig5)
    again = hmesh_from_json(doc)
    assert again.realized == fig5.realized
    assert again.subdivisions == fig5.subdivisions


def test_subdivide_preserves_identities():
    h = HMesh([0, 1, 2, 3], [0, 1, 2, 3])
    for target in [(0, (rat(1, 2), rat(1, 2))), (0, (rat(3, 2), rat(1, 2))),
                   (1, (rat(1, 4), rat(1, 4)))]:
        h = h.subdivide(*target)
        st = h.realized.stats
        assert st.F == st.V_plus + st.E + 1
