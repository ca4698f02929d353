import math

import numpy as np
import pytest
from scipy import integrate, special

from rmt_lab.analytic import (
    cdf,
    law_description,
    mean_spacing,
    normalization_constant,
    pdf,
    spacing_law,
    spacing_moment,
    support,
)

PI = math.pi

# a representative parameter point per kind (matches the sampler test matrix)
LAW_GRID = [
    ("gue", {}),
    ("goe", {}),
    ("planar", {"y0": 0.5}),
    ("planar", {"y0": 1.0}),
    ("cylinder", {"rho0": 0.0}),
    ("cylinder", {"rho0": 1.0}),
    ("paraboloid", {"alpha": 0.1}),
    ("paraboloid", {"alpha": 1.0}),
    ("paraboloid", {"alpha": 10.0}),
    ("quartic", {"q_curv": 0.5}),
    ("quartic", {"q_curv": 1.0}),
    ("cone", {"beta": 1.0, "y0": 1.0}),
    ("cone", {"beta": 2.0, "y0": 0.5}),
    ("gue_goe_interp", {"eps_interp": 0.3}),
    ("gue_goe_interp", {"eps_interp": 1.0}),
    ("gue_goe_interp", {"eps_interp": 3.0}),
    ("pt_nu_zero", {}),
    ("pt_nu_slice", {"nu0": 0.7}),
    ("pt_gamma_slice", {"gamma0": 1.0}),
]


def quad_pdf_mass(law, lo, hi):
    """Quadrature of law.pdf with the edge singularity substituted away."""
    if law.kind in ("cylinder", "cone") and law.s_min > 0.0:
        m = law.s_min
        u_lo = math.sqrt(max(lo * lo - m * m, 0.0))
        u_hi = math.sqrt(hi * hi - m * m)
        val, _ = integrate.quad(lambda u: math.exp(-0.25 * PI * u * u), u_lo, u_hi,
                                epsabs=0.0, epsrel=1e-12)
        return val
    val, _ = integrate.quad(lambda s: law.pdf(s), lo, hi, epsabs=0.0, epsrel=1e-11, limit=200)
    return val


# ------------------------------------------------------------ point values


def test_gue_point_values():
    law = spacing_law("gue")
    # (pi/2)*4*e^-pi and erf(sqrt(pi)) - 2 e^-pi, frozen from 40-digit evaluation
    assert law.pdf(2.0) == pytest.approx(0.27152105630059339, rel=1e-14)
    assert law.cdf(2.0) == pytest.approx(0.90138328128765261, rel=1e-14)


def test_interp_point_values_against_brute_force_integral():
    # frozen from direct high-precision evaluation of the weighted integral
    law03 = spacing_law("gue_goe_interp", {"eps_interp": 0.3})
    assert law03.pdf(0.5) == pytest.approx(0.10289564947972, rel=1e-11)
    assert law03.pdf(1.7) == pytest.approx(0.34460240545706, rel=1e-11)
    law3 = spacing_law("gue_goe_interp", {"eps_interp": 3.0})
    assert law3.pdf(0.5) == pytest.approx(0.63228737974256, rel=1e-11)
    assert law3.pdf(1.7) == pytest.approx(0.29267332616734, rel=1e-11)


def test_gapped_law_zero_below_gap():
    law = spacing_law("planar", {"y0": 0.5})
    assert law.pdf(0.9) == 0.0
    assert law.cdf(1.0) == 0.0  # support edge


def test_half_gaussian_limit_is_exact_at_rho0_zero():
    law = spacing_law("cylinder", {"rho0": 0.0})
    s = np.linspace(0, 4, 200)
    assert np.allclose(law.pdf(s), np.exp(-0.25 * PI * s * s), atol=0)
    assert law.pdf(0.0) == 1.0


def test_quartic_small_s_limit_positive():
    law = spacing_law("quartic", {"q_curv": 1.0})
    # sqrt(2) * normalization at q=1, frozen from quadrature oracle
    assert law.pdf(0.0) == pytest.approx(1.1419111611, rel=1e-9)
    assert law.pdf(1e-12) == pytest.approx(law.pdf(0.0), rel=1e-9)


def test_pdf_rejects_negative_argument():
    law = spacing_law("gue")
    with pytest.raises(ValueError):
        law.pdf(-0.1)
    with pytest.raises(ValueError):
        law.cdf(np.array([0.5, -1.0]))


# ------------------------------------------------------------ normalization


@pytest.mark.parametrize("kind,params", LAW_GRID)
def test_pdf_integrates_to_one(kind, params):
    law = spacing_law(kind, params)
    mass = quad_pdf_mass(law, law.s_min, law.tail_cutoff)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_normalization_constants():
    assert normalization_constant("gue") == pytest.approx(PI / 2, rel=1e-15)
    assert normalization_constant("goe") == pytest.approx(PI / 2, rel=1e-15)
    # the singular family's printed form needs no extra constant
    assert normalization_constant("cylinder", {"rho0": 0.0}) == 1.0
    assert normalization_constant("cylinder", {"rho0": 1.0}) == 1.0
    assert normalization_constant("cone", {"beta": 1.0, "y0": 1.0}) == 1.0
    # truncation window widens to the full law: constant tends to pi/2
    assert normalization_constant("pt_gamma_slice", {"gamma0": 20.0}) == pytest.approx(PI / 2, rel=1e-12)
    assert normalization_constant("pt_gamma_slice", {"gamma0": 1.0}) == pytest.approx(
        1.7426508338949528, rel=1e-13
    )
    # paraboloid constant in overflow-safe form
    assert normalization_constant("paraboloid", {"alpha": 10.0}) == pytest.approx(
        1.0 / special.erfcx(math.sqrt(PI) * 10.0), rel=1e-15
    )
    # quartic constant cached from quadrature (frozen oracle: 1/1.2384619842105648)
    assert normalization_constant("quartic", {"q_curv": 1.0}) == pytest.approx(
        1.0 / 1.2384619842105648, rel=1e-10
    )
    # the interpolation mixture is analytically normalized, so its cached
    # quadrature constant must come back as pi/2 for every eps
    for eps in (0.3, 1.0, 3.0):
        assert normalization_constant("gue_goe_interp", {"eps_interp": eps}) == pytest.approx(
            PI / 2, rel=1e-8
        )


# ------------------------------------------------------------ CDF checks


@pytest.mark.parametrize("kind,params", LAW_GRID)
def test_cdf_reaches_one_and_is_monotone(kind, params):
    law = spacing_law(kind, params)
    assert law.cdf(law.tail_cutoff) == pytest.approx(1.0, abs=1e-8)
    s = np.linspace(law.s_min, min(law.tail_cutoff, law.s_min + 8.0), 400)
    f = law.cdf(s)
    assert np.all(np.diff(f) >= -1e-12)
    assert f[0] <= 1e-12


@pytest.mark.parametrize("kind,params", LAW_GRID)
def test_cdf_matches_pdf_by_finite_difference(kind, params):
    law = spacing_law(kind, params)
    margin = 0.05 if kind in ("cylinder", "cone") and law.s_min > 0 else 1e-3
    lo = law.s_min + margin
    hi = min(law.s_min + 4.0, law.s_max - 1e-3 if math.isfinite(law.s_max) else math.inf)
    s = np.linspace(lo, hi, 100)
    h = 1e-5
    fd = (law.cdf(s + h) - law.cdf(s - h)) / (2 * h)
    assert np.max(np.abs(fd - law.pdf(s))) < 1e-6


@pytest.mark.parametrize(
    "kind,params",
    [
        ("gue", {}),
        ("goe", {}),
        ("planar", {"y0": 1.0}),
        ("cylinder", {"rho0": 1.0}),
        ("cone", {"beta": 1.0, "y0": 1.0}),
        ("paraboloid", {"alpha": 1.0}),
        ("pt_gamma_slice", {"gamma0": 1.0}),
    ],
)
def test_closed_form_cdf_agrees_with_quadrature(kind, params):
    law = spacing_law(kind, params)
    for s in np.linspace(law.s_min + 0.2, law.s_min + 3.0, 8):
        s = min(s, law.s_max)
        assert law.cdf(s) == pytest.approx(quad_pdf_mass(law, law.s_min, s), abs=1e-8)


def test_truncated_law_is_zero_above_cut():
    law = spacing_law("pt_gamma_slice", {"gamma0": 1.0})
    assert law.pdf(2.5) == 0.0
    assert law.cdf(2.0) == 1.0
    assert law.cdf(3.0) == 1.0
    # below the cut it is exactly the rescaled unitary-class law
    gue = spacing_law("gue")
    s = np.linspace(0, 2, 50)
    assert np.allclose(law.pdf(s), gue.pdf(s) / gue.cdf(2.0), rtol=1e-14)


# ------------------------------------------------------------ limits


def test_cylinder_tends_to_half_gaussian():
    law = spacing_law("cylinder", {"rho0": 1e-8})
    s = np.linspace(0.001, 4, 500)
    assert np.max(np.abs(law.pdf(s) - np.exp(-0.25 * PI * s * s))) < 1e-8


def test_paraboloid_large_alpha_tends_to_goe():
    law = spacing_law("paraboloid", {"alpha": 50.0})
    goe = spacing_law("goe")
    s = np.linspace(0, 4, 500)
    assert np.max(np.abs(law.pdf(s) - goe.pdf(s))) < 1e-4


def test_interp_at_unit_eps_equals_gue():
    law = spacing_law("gue_goe_interp", {"eps_interp": 1.0})
    gue = spacing_law("gue")
    s = np.linspace(0, 4, 500)
    assert np.max(np.abs(law.pdf(s) - gue.pdf(s))) < 1e-10
    assert np.max(np.abs(law.cdf(s) - gue.cdf(s))) < 1e-10


def test_cone_at_zero_offset_equals_half_gaussian():
    cone = spacing_law("cone", {"beta": 1.0, "y0": 0.0})
    s = np.linspace(0, 4, 200)
    assert np.allclose(cone.pdf(s), np.exp(-0.25 * PI * s * s), atol=0)


def test_interp_near_unity_continuous():
    # the evaluation branch changes character across eps = 1
    below = spacing_law("gue_goe_interp", {"eps_interp": 1.0 - 1e-7})
    above = spacing_law("gue_goe_interp", {"eps_interp": 1.0 + 1e-7})
    at = spacing_law("gue_goe_interp", {"eps_interp": 1.0})
    s = np.linspace(0.1, 4, 50)
    assert np.max(np.abs(below.pdf(s) - at.pdf(s))) < 1e-5
    assert np.max(np.abs(above.pdf(s) - at.pdf(s))) < 1e-5


# ------------------------------------------------------------ singular laws


@pytest.mark.parametrize(
    "kind,params",
    [("cylinder", {"rho0": 1.0}), ("cone", {"beta": 1.0, "y0": 1.0})],
)
def test_singular_edge_divergence_and_continuous_cdf(kind, params):
    law = spacing_law(kind, params)
    m = law.s_min
    assert law.pdf(m + 1e-6) > 100.0 * law.pdf(m + 1e-2)
    assert math.isinf(law.pdf(m))
    # the CDF stays continuous through the singular edge
    assert law.cdf(m) == 0.0
    assert law.cdf(m + 1e-6) < 1e-2
    assert law.cdf(m + 1e-6) > 0.0


def test_paraboloid_level_repulsion():
    for alpha in (0.1, 0.5, 1.0, 2.0, 10.0):
        assert spacing_law("paraboloid", {"alpha": alpha}).pdf(0.0) == 0.0


def test_quartic_level_clustering():
    for q in (0.1, 0.5, 1.0, 2.0):
        assert spacing_law("quartic", {"q_curv": q}).pdf(0.0) > 0.0


# ------------------------------------------------------------ support / moments


def test_support_examples():
    assert support(spacing_law("gue")) == (0.0, math.inf)
    assert support(spacing_law("cone", {"beta": 1.0, "y0": 1.0}))[0] == pytest.approx(math.sqrt(2.0))
    assert support(spacing_law("pt_gamma_slice", {"gamma0": 1.0})) == (0.0, 2.0)
    assert support(spacing_law("planar", {"y0": -0.75}))[0] == 1.5
    assert support(spacing_law("cylinder", {"rho0": 0.25}))[0] == 0.5


def test_mean_spacing_closed_forms():
    assert mean_spacing(spacing_law("goe")) == 1.0
    assert mean_spacing(spacing_law("gue")) == pytest.approx(4.0 / PI, rel=1e-15)
    assert mean_spacing(spacing_law("cylinder", {"rho0": 0.0})) == pytest.approx(2.0 / PI, rel=1e-15)
    assert mean_spacing(spacing_law("pt_nu_slice", {"nu0": 0.7})) == pytest.approx(4.0 / PI, rel=1e-15)


def test_mean_spacing_quadrature_against_inline_formulas():
    # independent inline encodings of two laws, integrated with scipy
    y0 = 1.0
    val, _ = integrate.quad(
        lambda s: s * 0.5 * PI * s * math.exp(-0.25 * PI * (s * s - 4 * y0 * y0)),
        2 * y0, 2 * y0 + 12,
    )
    assert mean_spacing(spacing_law("planar", {"y0": y0})) == pytest.approx(val, rel=1e-9)

    a = 1.0
    k = math.exp(-PI * a * a) / special.erfc(a * math.sqrt(PI))
    val, _ = integrate.quad(
        lambda s: s * k * s / math.sqrt(s * s + 4 * a * a) * math.exp(-0.25 * PI * s * s),
        0, 12,
    )
    assert mean_spacing(spacing_law("paraboloid", {"alpha": a})) == pytest.approx(val, rel=1e-9)


def test_spacing_moment_validates_order():
    with pytest.raises(ValueError):
        spacing_moment(spacing_law("gue"), -1)


def test_descriptions_exist_for_all_kinds():
    from rmt_lab.ensembles import ENSEMBLE_KINDS

    for kind in ENSEMBLE_KINDS:
        assert law_description(kind)
    with pytest.raises(ValueError):
        law_description("nope")


def test_pdf_cdf_module_functions_delegate():
    law = spacing_law("gue")
    s = np.array([0.3, 1.1])
    assert np.array_equal(pdf(law, s), law.pdf(s))
    assert np.array_equal(cdf(law, s), law.cdf(s))
