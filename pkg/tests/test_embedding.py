import pytest

from tmesh_splines.rational import rat, ZERO
from tmesh_splines.mesh import tensor_mesh
from tmesh_splines.hierarchy import HMesh, generate_random, branch_decomposition
from tmesh_splines.oracle import SpaceSpec, dim_oracle, assemble_system, nullspace_basis
from tmesh_splines.embedding import (
    bilinear_constraints, bilinear_constraints_raw,
    raw_biquadratic_constraints, collinear_constraints, biquadratic_constraints,
    ordered_constraint_matrix, row_sparsity_violations, case1a_zero_coefficients,
)
from tmesh_splines.basis import hierarchical_basis
from conftest import random_tmesh


def test_bilinear_row_counts_and_ranks(grid3, fig2):
    sc = tensor_mesh([0, 1], [0, 1])
    red = bilinear_constraints(sc)
    assert red.nrows == 2 and red.rank() == 1
    assert sc.stats.F - red.rank() == 0 == sc.stats.V_plus

    red3 = bilinear_constraints(grid3)
    assert red3.nrows == 4 and red3.rank() == 3
    assert grid3.stats.F - red3.rank() == 1 == grid3.stats.V_plus

    red2 = bilinear_constraints(fig2)
    assert red2.nrows == fig2.stats.E + 2
    assert red2.defective_rank() == 1
    assert fig2.stats.F - red2.rank() == fig2.stats.V_plus


def test_bilinear_raw_vs_reduced_rank():
    for seed in range(12):
        mesh = random_tmesh(seed, 2, 3, splits=6)
        raw = bilinear_constraints_raw(mesh)
        red = bilinear_constraints(mesh)
        assert raw.nrows == mesh.stats.E + 4
        assert red.nrows == mesh.stats.E + 2
        assert raw.rank() == red.rank()
        if mesh.stats.V_plus > 0:
            assert red.defective_rank() == 1
            assert raw.matrix.stack(red.matrix).rank() == red.rank()


def test_raw_biquadratic_fig2(fig2):
    raw = raw_biquadratic_constraints(fig2)
    assert raw.nrows == 6
    assert raw.rank() == 5  # defective rank one
    assert 6 - raw.rank() == 1  # V+ - rank = dim


def test_biquadratic_chain_random():
    # dim chain d(2,2) = d(1,1) - rank, and the (lb) inequality with the
    # unreduced count
    for seed in range(8):
        mesh = random_tmesh(seed, 2, 2, splits=5)
        st = mesh.stats
        d11 = dim_oracle(mesh, SpaceSpec(1, 1, 0, 0, hbc=True))
        d22 = dim_oracle(mesh, SpaceSpec(2, 2, 1, 1, hbc=True))
        raw = raw_biquadratic_constraints(mesh)
        assert d22 == d11 - raw.rank()
        assert d22 >= d11 - raw.nrows
        rawb = raw_biquadratic_constraints(mesh, include_boundary=True)
        assert rawb.nrows == st.E + 4
        assert rawb.rank() == raw.rank()
        assert d22 >= d11 - rawb.nrows
        if st.V_plus > 0:
            assert raw.rank() <= st.E - 1
            assert d22 >= st.V_plus - st.E + 1
        col = collinear_constraints(mesh)
        assert col.rank() == raw.rank()


def test_collinear_rows_proportional_to_jump_rows(grid3):
    raw = raw_biquadratic_constraints(grid3)
    col = collinear_constraints(grid3)
    for r_jump, r_col in zip(raw.matrix.rows, col.matrix.rows):
        assert set(r_jump) == set(r_col)
        cols = sorted(r_jump)
        if not cols:
            continue
        ratio = r_col[cols[0]] / r_jump[cols[0]]
        for c in cols:
            assert r_col[c] == ratio * r_jump[c]


def test_tensor_rank_exactly_E_minus_1():
    for k in (4, 5, 6):
        mesh = tensor_mesh(range(k), range(k))
        raw = raw_biquadratic_constraints(mesh)
        st = mesh.stats
        assert raw.rank() == st.E - 1
        assert st.V_plus - raw.rank() == bsp_count(k - 2)


def bsp_count(g):
    return max(0, g - 1) ** 2


def test_support_form_equals_other_forms(fig6):
    hb = hierarchical_basis(fig6)
    sup = biquadratic_constraints(fig6, hb)
    col = collinear_constraints(fig6, hb)
    raw = raw_biquadratic_constraints(fig6.realized, hb)
    assert sup.rank() == col.rank() == raw.rank()
    st = fig6.realized.stats
    assert st.V_plus - sup.rank() == 1


def test_support_form_rank_random_hier():
    for seed in range(8):
        h = generate_random(seed, 3, 3, 2, 0.35)
        mesh = h.realized
        if not mesh.crossing_vertices:
            continue
        hb = hierarchical_basis(h)
        sup = biquadratic_constraints(h, hb)
        col = collinear_constraints(h, hb)
        assert sup.rank() == col.rank()
        d22 = dim_oracle(mesh, SpaceSpec(2, 2, 1, 1, hbc=True))
        assert d22 == mesh.stats.V_plus - sup.rank()


def test_sparsity_propositions(fig6):
    assert row_sparsity_violations(fig6) == []
    assert case1a_zero_coefficients(fig6) == []
    for seed in range(6):
        h = generate_random(seed, 3, 3, 2, 0.4, require_cvc=True)
        assert row_sparsity_violations(h) == []
        assert case1a_zero_coefficients(h) == []


def test_ordered_matrix_tensor_grid():
    h = HMesh(range(4), range(4))
    mat, rep = ordered_constraint_matrix(h)
    st = h.realized.stats
    assert rep.T == st.E - 1
    assert mat.rank() == rep.T
    assert st.V_plus - mat.rank() == dim_oracle(h.realized,
                                                SpaceSpec(2, 2, 1, 1, hbc=True))


def test_ordered_matrix_fig9(fig9):
    mat, rep = ordered_constraint_matrix(fig9)
    st = fig9.realized.stats
    assert rep.T == st.E - 1
    assert rep.branch_counts == {0: 1, 1: 1, 2: 2}
    assert mat.rank() == rep.T
    # strict check of the triangular pattern on the raw matrix
    for i in range(rep.T):
        assert mat.rows[i].get(i, ZERO) != 0
        for j in range(i):
            assert mat.rows[i].get(j, ZERO) == 0


def test_ordered_matrix_full_system_rank(fig9):
    hb = hierarchical_basis(fig9)
    st = fig9.realized.stats
    full = biquadratic_constraints(fig9, hb)
    assert full.rank() == st.E - 1  # deleting the entering row loses nothing
    mat, rep = ordered_constraint_matrix(fig9, hb)
    assert mat.rank() == st.E - 1
