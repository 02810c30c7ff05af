"""Dense assembly of the layer operators, symmetrization, matrix dumps."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg as sla

from npspectra import (
    ConfigError,
    DiscreteOperator,
    GridError,
    NotPositiveDefinite,
    assemble_double_layer,
    assemble_operators,
    assemble_single_layer,
    build_grid,
    concatenate_grids,
    dump_operator,
    euler_characteristic,
    plemelj_residual,
    read_matrix_dump,
    rigid_transform,
    sphere,
    symmetrize,
    to_weighted_l2,
    torus,
)


@pytest.fixture(scope="module")
def sphere_ops(sphere_grid_small):
    k_op, s_op = assemble_operators(sphere_grid_small)
    return sphere_grid_small, k_op, s_op


@pytest.fixture(scope="module")
def sphere_sym(sphere_ops):
    grid, k_op, s_op = sphere_ops
    kw = to_weighted_l2(k_op)
    sw = to_weighted_l2(s_op)
    return grid, kw, sw, symmetrize(kw, sw)


def test_double_layer_constant_eigenpair(sphere_ops):
    grid, k_op, _ = sphere_ops
    ones = np.ones(grid.n_nodes)
    assert np.abs(k_op.matrix @ ones - 0.5).max() <= 1e-13


def test_double_layer_constant_eigenpair_torus(torus_grid_small):
    k_op = assemble_double_layer(torus_grid_small)
    ones = np.ones(torus_grid_small.n_nodes)
    assert np.abs(k_op.matrix @ ones - 0.5).max() <= 1e-13


def test_single_layer_constant_on_unit_sphere(sphere_ops):
    # the continuum value is 1: the classic closed form
    # int dS(y) / (4 pi |x - y|) = 1 on the unit sphere
    grid, _, s_op = sphere_ops
    resid = np.abs(-s_op.matrix @ np.ones(grid.n_nodes) - 1.0).max()
    assert resid <= 1.2e-3


def test_single_layer_residual_decreases_under_refinement():
    fine = build_grid(sphere(), 32, 64)
    _, s_op = assemble_operators(fine)
    resid_fine = np.abs(-s_op.matrix @ np.ones(fine.n_nodes) - 1.0).max()
    coarse = build_grid(sphere(), 16, 32)
    _, s_c = assemble_operators(coarse)
    resid_coarse = np.abs(-s_c.matrix @ np.ones(coarse.n_nodes) - 1.0).max()
    # measured ratio 1.82: first-order scheme with a log factor
    assert resid_fine <= 6.5e-4
    assert resid_coarse / resid_fine >= 1.7


def test_near_correction_improves_constant_potential(sphere_grid_small):
    _, s_corr = assemble_operators(sphere_grid_small)
    _, s_raw = assemble_operators(sphere_grid_small, near_correction=False)
    ones = np.ones(sphere_grid_small.n_nodes)
    err_corr = np.abs(-s_corr.matrix @ ones - 1.0).max()
    err_raw = np.abs(-s_raw.matrix @ ones - 1.0).max()
    assert err_raw >= 5.0 * err_corr


def test_operator_metadata(sphere_ops):
    _, k_op, s_op = sphere_ops
    assert k_op.basis == "nystrom"
    assert s_op.basis == "nystrom"
    assert k_op.kernel == "double_layer"
    assert s_op.kernel == "single_layer"


def test_wrappers_match_joint_assembly(sphere_grid_small, sphere_ops):
    _, k_op, s_op = sphere_ops
    assert np.array_equal(assemble_double_layer(sphere_grid_small).matrix,
                          k_op.matrix)
    assert np.array_equal(assemble_single_layer(sphere_grid_small).matrix,
                          s_op.matrix)


def test_flat_disk_diagonal_formula(sphere_grid_small):
    _, s_op = assemble_operators(sphere_grid_small, diagonal="flat_disk")
    idx = np.arange(sphere_grid_small.n_nodes)
    expected = -0.5 * np.sqrt(sphere_grid_small.weights / np.pi)
    assert np.abs(s_op.matrix[idx, idx] - expected).max() == 0.0


def test_unknown_diagonal_rule_rejected(sphere_grid_small):
    with pytest.raises(ConfigError):
        assemble_operators(sphere_grid_small, diagonal="exact")


def test_weighted_single_layer_symmetric(sphere_sym):
    _, _, sw, _ = sphere_sym
    assert np.abs(sw.matrix - sw.matrix.T).max() <= 1e-14


def test_weighted_form_is_similarity(sphere_ops):
    _, k_op, _ = sphere_ops
    kw = to_weighted_l2(k_op)
    assert kw.basis == "weighted_l2"
    raw = np.sort(np.linalg.eigvals(k_op.matrix).real)[::-1]
    wtd = np.sort(np.linalg.eigvals(kw.matrix).real)[::-1]
    assert np.abs(raw[:20] - wtd[:20]).max() <= 1e-10


def test_to_weighted_l2_twice_rejected(sphere_ops):
    _, k_op, _ = sphere_ops
    with pytest.raises(ConfigError):
        to_weighted_l2(to_weighted_l2(k_op))


def test_negative_single_layer_positive_definite(sphere_sym):
    _, _, sw, sym = sphere_sym
    assert sla.eigvalsh(-sw.matrix)[0] > 1e-3
    assert sym.diagnostics["min_eig_negS"] > 1e-3


def test_symmetrized_diagnostics(sphere_sym):
    _, _, _, sym = sphere_sym
    assert np.abs(sym.matrix - sym.matrix.T).max() == 0.0
    assert sym.diagnostics["asymmetry_norm"] <= 2e-3
    assert sym.diagnostics["plemelj_residual"] <= 5e-4


def test_symmetrization_near_no_op_on_sphere(sphere_sym):
    # continuum K and S commute on the sphere, so symmetrization should
    # move the eigenvalues only at the level of the near-field correction
    # asymmetry, not more
    _, kw, _, sym = sphere_sym
    raw = np.sort(np.linalg.eigvals(kw.matrix).real)
    symmetric = np.sort(sla.eigvalsh(sym.matrix))
    assert np.abs(raw - symmetric).max() <= 1e-4


def test_spectrum_structure_small_sphere(sphere_sym):
    _, _, _, sym = sphere_sym
    eigs = np.sort(sla.eigvalsh(sym.matrix))[::-1]
    assert abs(eigs[0] - 0.5) <= 1e-5
    assert np.abs(eigs[1:4] - 1.0 / 6.0).max() <= 1e-3
    assert np.abs(eigs[4:9] - 0.1).max() <= 1e-3
    assert eigs.min() > -1e-3
    assert eigs.max() <= 0.5 + 1e-6
    assert eigs.min() > -0.5 - 5e-2


def test_moduli_match_singular_values(sphere_sym):
    _, _, _, sym = sphere_sym
    moduli = np.sort(np.abs(sla.eigvalsh(sym.matrix)))[::-1]
    mu = sla.svdvals(sym.matrix)
    assert np.abs(moduli - mu).max() <= 1e-10


def test_plemelj_residual_levels_and_decrease(sphere_sym):
    _, kw, sw, _ = sphere_sym
    coarse = plemelj_residual(kw, sw)
    assert coarse <= 5e-4
    fine_grid = build_grid(sphere(), 32, 64)
    k2, s2 = assemble_operators(fine_grid)
    fine = plemelj_residual(to_weighted_l2(k2), to_weighted_l2(s2))
    assert fine <= 0.7 * coarse


def test_plemelj_requires_weighted_basis(sphere_ops):
    _, k_op, s_op = sphere_ops
    with pytest.raises(ConfigError):
        plemelj_residual(k_op, s_op)


def test_plemelj_requires_same_grid(sphere_sym, torus_grid_small):
    _, kw, _, _ = sphere_sym
    k2, s2 = assemble_operators(torus_grid_small)
    with pytest.raises(ConfigError):
        plemelj_residual(kw, to_weighted_l2(s2))


def test_symmetrize_requires_weighted_basis(sphere_ops):
    _, k_op, s_op = sphere_ops
    with pytest.raises(ConfigError):
        symmetrize(k_op, s_op)


def test_symmetrize_rejects_indefinite_single_layer(sphere_sym):
    grid, kw, sw, _ = sphere_sym
    flipped = DiscreteOperator(-sw.matrix, basis="weighted_l2",
                               kernel="single_layer", grid=grid)
    with pytest.raises(NotPositiveDefinite):
        symmetrize(kw, flipped)


def test_uncorrected_sphere_scheme_is_symmetric_but_indefinite():
    grid = build_grid(sphere(), 16, 32)
    k_op, s_op = assemble_operators(grid, near_correction=False)
    kw, sw = to_weighted_l2(k_op), to_weighted_l2(s_op)
    # the raw punctured kernel is symmetric on the sphere
    assert np.abs(kw.matrix - kw.matrix.T).max() <= 1e-14
    # but -S loses positivity, which is why the correction is the default
    with pytest.raises(NotPositiveDefinite):
        symmetrize(kw, sw)


def test_two_disjoint_spheres():
    far = rigid_transform(sphere(), None, (6.0, 0.0, 0.0))
    union = concatenate_grids([build_grid(sphere(), 12, 24),
                               build_grid(far, 12, 24)])
    assert abs(euler_characteristic(union) - 4.0) <= 1e-8
    k_op, s_op = assemble_operators(union)
    n1 = union.components[0].stop
    ones = np.ones(union.n_nodes)
    assert np.abs(k_op.matrix @ ones - 0.5).max() <= 1e-13
    # cross-component kernel blocks are smooth and bounded by the
    # separation: |K_ij| <= w_max / (4 pi d^2) with d >= 4
    cross = np.abs(k_op.matrix[:n1, n1:])
    bound = union.weights.max() / (4.0 * np.pi * 4.0 ** 2)
    assert cross.max() <= bound
    sym = symmetrize(to_weighted_l2(k_op), to_weighted_l2(s_op))
    eigs = np.sort(sla.eigvalsh(sym.matrix))[::-1]
    # constants on each component: a double eigenvalue at 1/2
    assert np.abs(eigs[:2] - 0.5).max() <= 1e-6
    # the k = 1 sphere clusters split by the dipole coupling (r/d)^3
    assert np.abs(eigs[2:8] - 1.0 / 6.0).max() <= 5e-3


def test_close_components_rejected():
    near = rigid_transform(sphere(), None, (2.02, 0.0, 0.0))
    union = concatenate_grids([build_grid(sphere(), 12, 24),
                               build_grid(near, 12, 24)])
    with pytest.raises(GridError):
        assemble_operators(union)


def test_dump_round_trip(tmp_path, sphere_sym):
    _, kw, _, sym = sphere_sym
    for op, basis in ((kw, "weighted_l2"), (sym, "symmetrized")):
        path = tmp_path / f"{basis}.bin"
        dump_operator(op, path)
        blob = path.read_bytes()
        assert blob[:4] == b"NPOP"
        assert len(blob) == 32 + 8 * op.matrix.size
        matrix, tag = read_matrix_dump(path)
        assert tag == basis
        assert np.array_equal(matrix, op.matrix)


def test_dump_rejects_corrupt_header(tmp_path, sphere_sym):
    _, kw, _, _ = sphere_sym
    path = tmp_path / "op.bin"
    dump_operator(kw, path)
    blob = bytearray(path.read_bytes())
    blob[:4] = b"XXXX"
    bad = tmp_path / "bad.bin"
    bad.write_bytes(bytes(blob))
    with pytest.raises(ConfigError):
        read_matrix_dump(bad)
    truncated = tmp_path / "short.bin"
    truncated.write_bytes(path.read_bytes()[:-16])
    with pytest.raises(ConfigError):
        read_matrix_dump(truncated)
