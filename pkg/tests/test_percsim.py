import numpy as np
import pytest

from critperc.percsim import LatticeRun, evaluate, run, run_outcomes, sample, trial_rng
from critperc.percsim import kernels, lattice, oracle
from critperc.percsim.runner import _prepare


def _open(cfg, mask=None, value=True):
    lay = _prepare(cfg).layout
    site_open = np.full(lay.n_sites, value, np.bool_)
    if mask is not None:
        site_open[:] = mask
    return lay, site_open


def test_config_validation():
    with pytest.raises(ValueError):
        LatticeRun("rectangle", 4, 10, 0)
    with pytest.raises(ValueError):
        LatticeRun("triangle", 16, 10, 0, t=1.0)
    with pytest.raises(ValueError):
        LatticeRun("rectangle", 16, 10, 0, p=1.0)
    with pytest.raises(ValueError):
        LatticeRun("schramm", 16, 10, 0, square_bond=True)
    with pytest.raises(ValueError):
        LatticeRun("hexagon", 16, 10, 0)


def test_lattice_shapes():
    rect = lattice.rectangle(16, 1.0)
    phys = rect.physical()
    width = phys[:, 0].max() - phys[:, 0].min()
    height = phys[:, 1].max() - phys[:, 1].min()
    assert abs(width / height - 1.0) < 0.1
    tri = lattice.equilateral(16, 0.5)
    assert tri.n_sites == 16 * 17 // 2
    # interior sites have six neighbours
    deg = np.bincount(tri.edges.ravel(), minlength=tri.n_sites)
    assert deg.max() == 6
    iso = lattice.isosceles(64, 0.5)
    m = lattice.schramm_size(64)
    assert len(iso.glue) == 2 * m - 1
    assert tuple(iso.coords[iso.apex]) == (2 * m, 2 * m)


def test_all_open_and_all_closed():
    cfg = LatticeRun("rectangle", 16, 1, 0)
    lay, so = _open(cfg)
    assert evaluate(cfg, so) == (1, 1, 1)
    assert evaluate(cfg, ~so) == (0, 0, 0)
    tcfg = LatticeRun("triangle", 16, 1, 0, t=0.3)
    lay, so = _open(tcfg)
    assert evaluate(tcfg, so) == (1, 1, 1)


def test_surrounding_extremes():
    cfg = LatticeRun("schramm", 64, 1, 0, t=0.5)
    lay, so = _open(cfg)
    assert evaluate(cfg, so) == (1,)
    so[:] = False
    so[lay.segments[0]] = True
    assert evaluate(cfg, so) == (0,)


def test_surrounding_by_a_wall():
    # a full open row tied to the wired base cuts the apex off from the free base
    cfg = LatticeRun("schramm", 64, 1, 0, t=0.5)
    lay = _prepare(cfg).layout
    i, j = lay.coords[:, 0], lay.coords[:, 1]
    k = lattice.schramm_size(64)
    so = np.zeros(lay.n_sites, np.bool_)
    so[lay.segments[0]] = True
    so |= (j == k) | ((i == 2 * k) & (j <= k))
    assert evaluate(cfg, so) == (1,)
    # one closed site in the row opens a route from the apex to the free base
    so[(j == k) & (i == 3 * k)] = False
    assert evaluate(cfg, so) == (0,)


def test_single_spanning_path_small():
    # one straight open row crosses left to right but touches neither top nor bottom
    cfg = LatticeRun("rectangle", 8, 1, 0)
    lay = _prepare(cfg).layout
    so = lay.coords[:, 1] == 4
    assert evaluate(cfg, so) == (1, 0, 1)


def test_two_lanes_give_two_clusters():
    cfg = LatticeRun("rectangle", 8, 1, 0)
    lay = _prepare(cfg).layout
    so = (lay.coords[:, 1] == 2) | (lay.coords[:, 1] == 5)
    labels = oracle.flood_labels(lay.n_sites, lay.edges, so)
    assert oracle.four_arc_oracle(labels, lay.segments) == (True, False, 2)
    assert evaluate(cfg, so) == (1, 0, 2)


def test_three_sided_cluster_is_not_four_sided():
    cfg = LatticeRun("rectangle", 8, 1, 0)
    lay = _prepare(cfg).layout
    so = (lay.coords[:, 1] == 4) | (lay.coords[:, 1] == 0)
    so &= ~((lay.coords[:, 1] == 0) & (lay.coords[:, 0] > 3))
    # bottom stub connects to the row via a column
    so |= (lay.coords[:, 0] == 1) & (lay.coords[:, 1] <= 4)
    assert evaluate(cfg, so) == (1, 0, 1)


def test_union_find_matches_flood_fill():
    for geom in ("rectangle", "triangle", "schramm"):
        cfg = LatticeRun(geom, 16, 1, 11, t=0.4)
        lay = _prepare(cfg).layout
        for trial in range(40):
            so, eo = sample(cfg, trial)
            roots = kernels.label(so, lay.edges, eo)
            assert oracle.same_partition(roots, oracle.flood_labels(lay.n_sites, lay.edges, so, eo))


def test_square_bond_matches_flood_fill():
    cfg = LatticeRun("rectangle", 12, 1, 3, square_bond=True)
    lay = _prepare(cfg).layout
    for trial in range(20):
        so, eo = sample(cfg, trial)
        roots = kernels.label(so, lay.edges, eo)
        labels = oracle.flood_labels(lay.n_sites, lay.edges, so, eo)
        assert oracle.same_partition(roots, labels)
        assert evaluate(cfg, so, eo) == tuple(int(x) for x in oracle.four_arc_oracle(labels, lay.segments))


def test_logical_consistency():
    out = run_outcomes(LatticeRun("rectangle", 16, 3000, 5), workers=1)
    ph, phv, nh = out.T
    assert not np.any(phv & ~ph)
    assert np.array_equal(nh >= 1, ph == 1)


def test_rng_streams():
    a = trial_rng(1, 0).random(5)
    assert np.array_equal(a, trial_rng(1, 0).random(5))
    assert not np.array_equal(a, trial_rng(1, 1).random(5))
    assert not np.array_equal(a, trial_rng(2, 0).random(5))


def test_determinism_across_workers():
    cfg = LatticeRun("triangle", 20, 60, 99, t=0.25)
    ref = run_outcomes(cfg, workers=1)
    for w in (2, 8):
        assert np.array_equal(ref, run_outcomes(cfg, workers=w))
    assert run(cfg, workers=1) == run(cfg, workers=2)


def test_glued_sites_share_state():
    cfg = LatticeRun("schramm", 64, 1, 4)
    lay = _prepare(cfg).layout
    for trial in range(5):
        so, _ = sample(cfg, trial)
        assert np.array_equal(so[lay.glue[:, 0]], so[lay.glue[:, 1]])
        assert so[lay.segments[0]].all()


def test_estimate_stderr():
    est = run(LatticeRun("rectangle", 16, 400, 8), workers=1)
    e = est["P_h"]
    assert e.stderr == pytest.approx(np.sqrt(e.mean * (1 - e.mean) / (e.trials - 1)), rel=1e-12)


def test_monotone_in_p():
    means = [run(LatticeRun("rectangle", 64, 20_000, 17, p=p), workers=1)["P_h"].mean for p in (0.45, 0.5, 0.55)]
    assert means[0] < means[1] < means[2]


def test_square_bond_self_dual_square():
    est = run(LatticeRun("rectangle", 32, 4000, 21, square_bond=True), workers=1)["P_h"]
    assert abs(est.mean - 0.5) < 3 * est.stderr + 0.03
