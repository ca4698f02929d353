import math

import numpy as np
import pytest
from scipy import integrate, stats as sps

from rmt_lab.analytic import spacing_law
from rmt_lab.ensembles import (
    GAUSS_SIGMA,
    EnsembleSpec,
    GaussianProposal,
    draw,
    rejection_sample_density,
    sample_batch,
    spacings,
    stream,
    worker_seed_sequences,
)
from rmt_lab.matrix_core import eigenpair, pauli_decompose
from rmt_lab.stats import ks_statistic

PI = math.pi


# ------------------------------------------------------------ spec validation


def test_spec_validation():
    EnsembleSpec("gue")
    EnsembleSpec("cone", {"beta": 1.0, "y0": -2.0})
    with pytest.raises(ValueError):
        EnsembleSpec("wigner")
    with pytest.raises(ValueError):
        EnsembleSpec("planar")  # missing y0
    with pytest.raises(ValueError):
        EnsembleSpec("gue", {"y0": 1.0})  # extra param
    with pytest.raises(ValueError):
        EnsembleSpec("cylinder", {"rho0": -0.1})
    with pytest.raises(ValueError):
        EnsembleSpec("paraboloid", {"alpha": 0.0})
    with pytest.raises(ValueError):
        EnsembleSpec("pt_nu_slice", {"nu0": math.nan})


# ------------------------------------------------------------ determinism


def test_stream_is_deterministic_and_matches_spacings():
    spec = EnsembleSpec("gue")
    a = [s.spacing for s in stream(spec, 10, seed=42)]
    b = [s.spacing for s in stream(spec, 10, seed=42)]
    assert a == b
    assert np.array_equal(np.array(a), spacings(spec, 10, seed=42))


def test_stream_zero_length_is_empty():
    assert list(stream(EnsembleSpec("goe"), 0, seed=1)) == []
    with pytest.raises(ValueError):
        sample_batch(EnsembleSpec("goe"), -1, np.random.default_rng(0))


def test_draw_returns_consistent_sample():
    rng = np.random.default_rng(5)
    for kind, params in [("gue", {}), ("pt_nu_slice", {"nu0": 0.7})]:
        s = draw(EnsembleSpec(kind, params), rng)
        assert s.matrix.shape == (2, 2)
        assert eigenpair(s.matrix).spacing == pytest.approx(s.spacing, abs=1e-10)


# ------------------------------------------------------------ support bounds


def test_planar_support_bound():
    s = spacings(EnsembleSpec("planar", {"y0": 1.0}), 10_000, seed=3)
    assert np.min(s) >= 2.0


def test_cylinder_support_bound():
    s = spacings(EnsembleSpec("cylinder", {"rho0": 1.0}), 10_000, seed=7)
    assert np.min(s) >= 2.0


def test_cone_support_bound():
    beta, y0 = 1.0, 1.0
    gap = 2.0 * math.sqrt(beta / (1.0 + beta)) * abs(y0)
    s = spacings(EnsembleSpec("cone", {"beta": beta, "y0": y0}), 100_000, seed=11)
    assert np.min(s) >= gap


def test_gamma_slice_support_and_eigensolve_consistency():
    spec = EnsembleSpec("pt_gamma_slice", {"gamma0": 1.0})
    batch = sample_batch(spec, 20_000, np.random.default_rng(13))
    assert np.max(batch.spacing) <= 2.0
    ev = batch.eigvals()
    err = np.abs(np.abs(ev[:, 1] - ev[:, 0]) - batch.spacing)
    assert np.max(err) <= 1e-10


def test_nu_zero_draws_have_exactly_zero_r():
    for sample in stream(EnsembleSpec("pt_nu_zero"), 200, seed=17):
        g = pauli_decompose(sample.matrix)
        assert g.p == 0.0 and g.q == 0.0 and g.r == 0.0


def test_pt_samples_use_canonical_angle_ranges():
    for kind, params in [("pt_nu_zero", {}), ("pt_nu_slice", {"nu0": 0.7}),
                         ("pt_gamma_slice", {"gamma0": 1.0})]:
        batch = sample_batch(EnsembleSpec(kind, params), 5_000, np.random.default_rng(19))
        theta, phi, eta = batch.column("theta"), batch.column("phi"), batch.column("eta")
        assert np.all((theta >= 0.0) & (theta <= math.pi))
        assert np.all((phi >= 0.0) & (phi < 2.0 * math.pi))
        assert np.all((eta >= 0.0) & (eta < 2.0 * math.pi))
        assert np.all(batch.column("gamma") >= batch.column("nu"))


def test_spec_params_detached_from_caller_dict():
    raw = {"y0": 1.0}
    spec = EnsembleSpec("planar", raw)
    raw["y0"] = -99.0
    assert spec.param("y0") == 1.0


# ------------------------------------------------------------ sample statistics


def test_gue_sample_mean():
    s = spacings(EnsembleSpec("gue"), 100_000, seed=101)
    assert abs(s.mean() - 4.0 / PI) < 0.02


def test_goe_sample_mean():
    s = spacings(EnsembleSpec("goe"), 100_000, seed=1)
    assert abs(s.mean() - 1.0) < 0.01


def test_every_kind_passes_ks_at_golden_seed():
    from rmt_lab.verify import GOLDEN_SEEDS

    cases = [
        ("gue", {}), ("goe", {}), ("planar", {"y0": 1.0}), ("cylinder", {"rho0": 1.0}),
        ("paraboloid", {"alpha": 1.0}), ("quartic", {"q_curv": 1.0}),
        ("cone", {"beta": 1.0, "y0": 1.0}), ("gue_goe_interp", {"eps_interp": 0.3}),
        ("pt_nu_zero", {}), ("pt_nu_slice", {"nu0": 0.7}), ("pt_gamma_slice", {"gamma0": 1.0}),
    ]
    n = 100_000
    for kind, params in cases:
        spec = EnsembleSpec(kind, params)
        law = spacing_law(spec)
        s = np.sort(spacings(spec, n, seed=GOLDEN_SEEDS[kind]))
        d = ks_statistic(s, law.cdf)
        assert d * math.sqrt(n) < 1.95, (kind, d * math.sqrt(n))


def test_interp_unit_eps_matches_gue_law():
    spec = EnsembleSpec("gue_goe_interp", {"eps_interp": 1.0})
    s = np.sort(spacings(spec, 50_000, seed=23))
    d = ks_statistic(s, spacing_law("gue").cdf)
    assert d * math.sqrt(len(s)) < 1.95


def test_spacing_consistency_through_stream_objects():
    cases = [
        ("gue", {}), ("goe", {}), ("planar", {"y0": 1.0}), ("cylinder", {"rho0": 1.0}),
        ("paraboloid", {"alpha": 1.0}), ("quartic", {"q_curv": 1.0}),
        ("cone", {"beta": 1.0, "y0": 1.0}), ("gue_goe_interp", {"eps_interp": 0.3}),
        ("pt_nu_zero", {}), ("pt_nu_slice", {"nu0": 0.7}), ("pt_gamma_slice", {"gamma0": 1.0}),
    ]
    for kind, params in cases:
        for sample in stream(EnsembleSpec(kind, params), 200, seed=29):
            assert eigenpair(sample.matrix).spacing == pytest.approx(sample.spacing, abs=1e-10)


# ------------------------------------------------------------ rejection sampler


def test_rejection_identical_target_accepts_first_proposal():
    prop = GaussianProposal(mean=0.5, sigma=1.2)

    def log_kernel(t):
        return -((t - prop.mean) ** 2) / (2 * prop.sigma**2)

    rng = np.random.default_rng(31)
    got = [rejection_sample_density(log_kernel, prop, rng) for _ in range(50)]
    # replay: each draw must consume exactly one proposal and one uniform
    replay = np.random.default_rng(31)
    for value in got:
        assert value == replay.normal(prop.mean, prop.sigma)
        replay.random()


def test_rejection_diagnoses_bad_envelope():
    prop = GaussianProposal(mean=0.0, sigma=1.0)
    with pytest.raises(RuntimeError):
        rejection_sample_density(lambda t: -1e9, prop, np.random.default_rng(1), window=5_000)
    with pytest.raises(ValueError):
        GaussianProposal(mean=0.0, sigma=0.0)
    with pytest.raises(ValueError):
        rejection_sample_density(lambda t: 0.0, prop, np.random.default_rng(1), log_bound=math.inf)


def test_rejection_paraboloid_marginal_chi_square():
    # two-sided marginal density of y on the paraboloid surface at alpha=1,
    # normalized by quadrature; envelope is the bare Gaussian kernel
    alpha = 1.0
    prop = GaussianProposal(mean=0.0, sigma=GAUSS_SIGMA)

    def log_density(t):
        return -PI * (t * t + 2.0 * alpha * abs(t))

    rng = np.random.default_rng(37)
    n = 100_000
    vals = np.fromiter(
        (rejection_sample_density(log_density, prop, rng) for _ in range(n)),
        dtype=float, count=n,
    )
    norm, _ = integrate.quad(lambda t: math.exp(log_density(t)), -6, 6)
    edges = np.linspace(-0.9, 0.9, 19)
    counts, _ = np.histogram(vals, bins=edges)
    probs = np.array([
        integrate.quad(lambda t: math.exp(log_density(t)) / norm, a, b)[0]
        for a, b in zip(edges[:-1], edges[1:])
    ])
    # tail mass outside the grid folded into the edge bins
    probs[0] += integrate.quad(lambda t: math.exp(log_density(t)) / norm, -6, edges[0])[0]
    probs[-1] += integrate.quad(lambda t: math.exp(log_density(t)) / norm, edges[-1], 6)[0]
    counts[0] += np.count_nonzero(vals < edges[0])
    counts[-1] += np.count_nonzero(vals > edges[-1])
    expected = n * probs
    assert np.min(expected) > 5
    stat = float(np.sum((counts - expected) ** 2 / expected))
    p = sps.chi2.sf(stat, df=len(probs) - 1)
    assert p > 0.01, (stat, p)


def test_rejection_quartic_marginal_mean_abs():
    q = 1.0
    prop = GaussianProposal(mean=0.0, sigma=GAUSS_SIGMA)

    def log_density(t):
        return -PI * (t**4 / q + t * t)

    rng = np.random.default_rng(41)
    n = 50_000
    vals = np.fromiter(
        (rejection_sample_density(log_density, prop, rng) for _ in range(n)),
        dtype=float, count=n,
    )
    norm, _ = integrate.quad(lambda t: math.exp(log_density(t)), -6, 6)
    target_mean, _ = integrate.quad(lambda t: abs(t) * math.exp(log_density(t)) / norm, -6, 6)
    sample = np.abs(vals)
    se = sample.std(ddof=1) / math.sqrt(n)
    assert abs(sample.mean() - target_mean) < 3 * se


# ------------------------------------------------------------ worker splitting


def test_worker_seed_sequences():
    seqs = worker_seed_sequences(99, 4)
    assert len(seqs) == 4
    streams = [np.random.default_rng(s).random(4).tolist() for s in seqs]
    assert len({tuple(s) for s in streams}) == 4
    with pytest.raises(ValueError):
        worker_seed_sequences(99, 0)
