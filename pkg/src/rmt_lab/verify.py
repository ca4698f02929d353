"""End-to-end verification: samplers against laws, invariances, divergence.

``verify_ensemble`` runs one ensemble at scale and reports four statistical
checks (Kolmogorov-Smirnov, Pearson chi-square, mean, support) plus an exact
cross-check that the closed-form spacing of every draw matches a numerical
eigensolve of its composed matrix.  Thresholds are embedded in the report so
it is self-describing.

Each ensemble ships a golden seed under which the full suite passes; the
thresholds hold for almost all seeds, pinning one merely removes statistical
flake from fixed test runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, special

from . import stats as _stats
from .analytic import SpacingLaw, spacing_law
from .ensembles import GAUSS_SIGMA, EnsembleSpec, sample_batch
from .matrix_core import (
    GeneralComplexParams,
    invariants,
    pauli_compose,
    pauli_decompose,
    random_group_element,
    transform,
)

__all__ = [
    "GOLDEN_SEEDS",
    "VerificationReport",
    "InvarianceReport",
    "ProbeRow",
    "verify_ensemble",
    "invariance_suite",
    "divergence_probe",
]

GOLDEN_SEEDS = {
    "gue": 101,
    "goe": 102,
    "planar": 103,
    "cylinder": 104,
    "paraboloid": 105,
    "quartic": 106,
    "cone": 107,
    "gue_goe_interp": 108,
    "pt_nu_zero": 109,
    "pt_nu_slice": 110,
    "pt_gamma_slice": 111,
}

EIGENSOLVE_TOL = 1e-10
MEAN_SIGMAS = 6.0
CHI2_SIGMAS = 4.0


@dataclass(frozen=True)
class VerificationReport:
    """Self-describing outcome of one ensemble verification run."""

    kind: str
    params: dict
    n: int
    seed: int
    ks_d: float
    ks_threshold: float
    chi2_statistic: float
    chi2_dof: int
    chi2_low: float
    chi2_high: float
    empirical_mean: float
    analytic_mean: float
    mean_tolerance: float
    support_violations: int
    max_eigensolve_error: float
    eigensolve_tolerance: float
    checks: dict
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, payload: dict) -> "VerificationReport":
        return cls(**payload)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))


def verify_ensemble(
    spec: EnsembleSpec,
    n: int,
    seed: int,
    law: SpacingLaw | None = None,
    ks_threshold: float = _stats.KS_DEFAULT_THRESHOLD,
) -> VerificationReport:
    """Sample n spacings and test them against the (or a supplied) law.

    Checks: D*sqrt(n) below ``ks_threshold``; chi-square within
    dof +- 4*sqrt(2*dof); sample mean within 6 law-standard-errors of the
    analytic mean; zero draws outside the support; and every draw's
    closed-form spacing within 1e-10 of the eigensolve of its matrix.
    Passing a mismatched ``law`` is supported (it should fail).
    """
    if n < 1000:
        raise ValueError(f"n must be at least 1000, got {n}")
    if law is None:
        law = spacing_law(spec)
    batch = sample_batch(spec, n, np.random.default_rng(seed))
    s = batch.spacing

    ks_d = _stats.ks_statistic(np.sort(s), law.cdf)
    ks_ok = ks_d * math.sqrt(n) < ks_threshold

    chi2 = _stats.chi_square(_stats.histogram(s, _stats.default_edges(law)), law)
    chi2_half_width = CHI2_SIGMAS * math.sqrt(2.0 * chi2.dof)
    chi2_low, chi2_high = chi2.dof - chi2_half_width, chi2.dof + chi2_half_width
    chi2_ok = chi2_low <= chi2.statistic <= chi2_high

    mean, _ = _stats.moments(s)
    analytic_mean = law.mean_spacing()
    law_var = max(law.moment(2) - analytic_mean ** 2, 0.0)
    mean_tol = MEAN_SIGMAS * math.sqrt(law_var / n)
    mean_ok = abs(mean - analytic_mean) <= mean_tol

    violations = int(np.count_nonzero(s < law.s_min))
    if math.isfinite(law.s_max):
        violations += int(np.count_nonzero(s > law.s_max))
    support_ok = violations == 0

    ev = batch.eigvals()
    eig_err = float(np.max(np.abs(np.abs(ev[:, 1] - ev[:, 0]) - s))) if n else 0.0
    eig_ok = eig_err <= EIGENSOLVE_TOL

    checks = {
        "ks": bool(ks_ok),
        "chi_square": bool(chi2_ok),
        "mean": bool(mean_ok),
        "support": bool(support_ok),
        "spacing_consistency": bool(eig_ok),
    }
    return VerificationReport(
        kind=spec.kind,
        params={k: float(v) for k, v in spec.params.items()},
        n=n,
        seed=seed,
        ks_d=float(ks_d),
        ks_threshold=float(ks_threshold),
        chi2_statistic=float(chi2.statistic),
        chi2_dof=int(chi2.dof),
        chi2_low=float(chi2_low),
        chi2_high=float(chi2_high),
        empirical_mean=float(mean),
        analytic_mean=float(analytic_mean),
        mean_tolerance=float(mean_tol),
        support_violations=violations,
        max_eigensolve_error=eig_err,
        eigensolve_tolerance=EIGENSOLVE_TOL,
        checks=checks,
        passed=all(checks.values()),
    )


@dataclass(frozen=True)
class InvarianceReport:
    """Max observed drift of each invariant under random transformations."""

    trials: int
    seed: int
    relative_tolerance: float
    y_absolute_tolerance: float
    max_drift: dict
    checks: dict
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, payload: dict) -> "InvarianceReport":
        return cls(**payload)


def _complex_drift(before: complex, after: complex) -> float:
    return abs(after - before) / max(1.0, abs(before))


def _real_drift(before: float, after: float) -> float:
    return abs(after - before) / max(1.0, abs(before))


def invariance_suite(
    trials: int,
    seed: int,
    relative_tolerance: float = 1e-10,
    y_absolute_tolerance: float = 1e-12,
) -> InvarianceReport:
    """Random matrices under random group actions; invariants must not move.

    Per trial one random 8-coordinate matrix is drawn and pushed through a
    Haar unitary conjugation (c1..c4 preserved), an embedded planar rotation
    (additionally preserves the y coordinate), and a well-conditioned
    invertible similarity (preserves complex c1, c2).  Drift is reported
    relative to max(1, |value|); y drift is absolute.
    """
    if trials < 100:
        raise ValueError(f"trials must be at least 100, got {trials}")
    rng = np.random.default_rng(seed)
    keys = (
        "unitary2_c1", "unitary2_c2", "unitary2_c3", "unitary2_c4",
        "so2_y",
        "gl2c_c1", "gl2c_c2",
    )
    drift = dict.fromkeys(keys, 0.0)

    for _ in range(trials):
        coords = rng.normal(0.0, GAUSS_SIGMA, 8)
        params = GeneralComplexParams(*coords)
        m = pauli_compose(params)
        base = invariants(params)

        u = random_group_element("unitary2", rng)
        after = invariants(pauli_decompose(transform(m, u, "conjugation")))
        drift["unitary2_c1"] = max(drift["unitary2_c1"], _complex_drift(base.c1, after.c1))
        drift["unitary2_c2"] = max(drift["unitary2_c2"], _complex_drift(base.c2, after.c2))
        drift["unitary2_c3"] = max(drift["unitary2_c3"], _real_drift(base.c3, after.c3))
        drift["unitary2_c4"] = max(drift["unitary2_c4"], _real_drift(base.c4, after.c4))

        o = random_group_element("special_orthogonal2_embedded", rng)
        after = invariants(pauli_decompose(transform(m, o, "conjugation")))
        drift["so2_y"] = max(drift["so2_y"], abs(after.c3_hermitian - base.c3_hermitian))

        g = random_group_element("gl2c", rng)
        after = invariants(pauli_decompose(transform(m, g, "similarity")))
        drift["gl2c_c1"] = max(drift["gl2c_c1"], _complex_drift(base.c1, after.c1))
        drift["gl2c_c2"] = max(drift["gl2c_c2"], _complex_drift(base.c2, after.c2))

    checks = {k: drift[k] < (y_absolute_tolerance if k == "so2_y" else relative_tolerance)
              for k in keys}
    return InvarianceReport(
        trials=trials,
        seed=seed,
        relative_tolerance=relative_tolerance,
        y_absolute_tolerance=y_absolute_tolerance,
        max_drift=drift,
        checks={k: bool(v) for k, v in checks.items()},
        passed=all(checks.values()),
    )


@dataclass(frozen=True)
class ProbeRow:
    """Truncated mass of the PT measure (and of its Hermitian slice)."""

    cutoff: float
    pt_mass: float
    hermitian_slice_mass: float


def divergence_probe(cutoffs) -> list[ProbeRow]:
    """Truncated normalization integrals of the real-spectrum PT measure.

    The measure density gamma*nu*sin(theta)*sqrt(gamma^2-nu^2) *
    exp(-pi*(e^2+gamma^2-nu^2)) on gamma >= nu is integrated exactly over e
    (unit Gaussian mass) and the angles (8*pi^2); substituting u = gamma^2,
    v = nu^2 reduces the remaining block to

        I(L) = pi * integral_0^{L^2} P(3/2, pi*w) dw,

    with P the regularized lower incomplete gamma.  I(L) grows like pi*L^2,
    demonstrating that the measure is not normalizable, while the nu = 0
    slice mass P(3/2, pi*L^2) converges to 1.
    """
    cuts = [float(c) for c in cutoffs]
    if len(cuts) < 2:
        raise ValueError("need at least two cutoffs")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cutoffs must be strictly increasing")

    rows = []
    for lam in cuts:
        val, _ = integrate.quad(
            lambda w: special.gammainc(1.5, math.pi * w), 0.0, lam * lam,
            epsabs=0.0, epsrel=1e-11, limit=200,
        )
        rows.append(
            ProbeRow(
                cutoff=lam,
                pt_mass=math.pi * val,
                hermitian_slice_mass=float(special.gammainc(1.5, math.pi * lam * lam)),
            )
        )
    return rows
