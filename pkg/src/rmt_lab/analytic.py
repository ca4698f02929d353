"""Analytic level-spacing laws for the eleven ensembles.

Each law is the exact spacing distribution induced by the corresponding
constrained sampler, at the fixed base-measure scale where Hermitian
coordinates have density exp(-pi t^2).  Laws are immutable after
construction (quadrature-derived constants are computed eagerly), and all
evaluations are pure and thread-safe.

Closed forms, with m = s_min and F_gue the unitary-class CDF:

    gue / pt_nu_zero / pt_nu_slice   (pi/2) s^2 exp(-pi s^2/4)
    goe                              (pi/2) s   exp(-pi s^2/4)
    planar (gapped)                  (pi/2) s   exp(-pi (s^2-m^2)/4),  s > m
    cylinder, cone (singular)        s/sqrt(s^2-m^2) exp(-pi (s^2-m^2)/4)
    paraboloid                       s/(erfcx(a*sqrt(pi)) sqrt(s^2+4a^2)) e^{-pi s^2/4}
    quartic                          N sqrt(sqrt(s^2+q)+sqrt(q))/sqrt(s^2+q) e^{-pi s^2/4}
    gue_goe_interp                   (pi/2) eps s e^{-pi s^2/4} I(s; eps), I via dawsn/erf
    pt_gamma_slice (truncated)       (pi/2) s^2 exp(-pi s^2/4) / F_gue(2 g0),  s < 2 g0

The quartic shape is the rationalized form of s / (sqrt(s^2+q) *
sqrt(sqrt(s^2+q)-sqrt(q))); the two are identical and the rationalized one
is stable as s -> 0.  Quartic and interpolation (eps != 1) normalizations
and CDFs are quadrature-backed and cached in the law object.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .ensembles import ENSEMBLE_KINDS, EnsembleSpec

__all__ = [
    "SpacingLaw",
    "spacing_law",
    "pdf",
    "cdf",
    "support",
    "mean_spacing",
    "spacing_moment",
    "normalization_constant",
    "law_description",
]

_SQRT_PI = math.sqrt(math.pi)
# integration horizon: Gaussian tail exp(-pi u^2/4) drops below 1e-16 within
# a span of 10 above the support edge; slower-decaying laws stretch the span
# by their decay scale (interpolation with eps < 1 decays at rate eps^2).
_TAIL_SPAN = 10.0
_PANELS = 384
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _gue_pdf(s):
    return 0.5 * math.pi * s * s * np.exp(-0.25 * math.pi * s * s)


def _gue_cdf(s):
    return special.erf(0.5 * _SQRT_PI * s) - s * np.exp(-0.25 * math.pi * s * s)


class _PanelCDF:
    """Cumulative Gauss-Legendre integrator for smooth unnormalized shapes."""

    def __init__(self, shape_fn, lo: float, hi: float, panels: int = _PANELS):
        self.shape_fn = shape_fn
        self.edges = np.linspace(lo, hi, panels + 1)
        mid = 0.5 * (self.edges[1:] + self.edges[:-1])
        half = 0.5 * (self.edges[1] - self.edges[0])
        pts = mid[:, None] + half * _GL_NODES[None, :]
        vals = shape_fn(pts.ravel()).reshape(panels, -1)
        self.cum = np.concatenate(([0.0], np.cumsum(half * vals @ _GL_WEIGHTS)))

    def partial(self, s: np.ndarray) -> np.ndarray:
        """Integral of the shape from edges[0] to each s (s clipped to range)."""
        s = np.minimum(s, self.edges[-1])
        idx = np.clip(np.searchsorted(self.edges, s, side="right") - 1, 0, len(self.edges) - 2)
        lo = self.edges[idx]
        mid = 0.5 * (lo + s)
        half = 0.5 * (s - lo)
        pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = self.shape_fn(pts.ravel()).reshape(len(s), -1)
        return self.cum[idx] + half * (vals @ _GL_WEIGHTS)


class SpacingLaw:
    """Spacing distribution of one ensemble: pdf, cdf, support, moments.

    Construct via ``spacing_law``.  ``normalization`` is the constant that
    multiplies the law's documented unnormalized shape (see module
    docstring); for the singular cylinder/cone family the printed shape is
    already normalized and the constant is 1.
    """

    def __init__(self, kind: str, params: dict):
        spec = EnsembleSpec(kind, dict(params))  # validates kind and domains
        self.kind = kind
        self.params = {k: float(v) for k, v in spec.params.items()}
        p = self.params
        self.s_min = 0.0
        self.s_max = math.inf
        self._table = None

        if kind in ("gue", "pt_nu_zero", "pt_nu_slice"):
            self.normalization = 0.5 * math.pi
        elif kind == "goe":
            self.normalization = 0.5 * math.pi
        elif kind == "planar":
            self.s_min = 2.0 * abs(p["y0"])
            self.normalization = 0.5 * math.pi
        elif kind in ("cylinder", "cone"):
            if kind == "cylinder":
                self.s_min = 2.0 * p["rho0"]
            else:
                g = math.sqrt(p["beta"] / (1.0 + p["beta"]))
                self.s_min = 2.0 * g * abs(p["y0"])
            self.normalization = 1.0
        elif kind == "paraboloid":
            self.normalization = 1.0 / special.erfcx(_SQRT_PI * p["alpha"])
        elif kind == "quartic":
            q = p["q_curv"]

            def shape(s, q=q):
                root = np.sqrt(s * s + q)
                return np.sqrt(root + math.sqrt(q)) / root * np.exp(-0.25 * math.pi * s * s)

            z, _ = integrate.quad(shape, 0.0, _TAIL_SPAN, epsabs=0.0, epsrel=1e-12)
            self.normalization = 1.0 / z
            self._table = _PanelCDF(shape, 0.0, _TAIL_SPAN)
            self._z = z
        elif kind == "gue_goe_interp":
            eps = p["eps_interp"]
            self._tail_span = _TAIL_SPAN / min(1.0, eps)
            if eps == 1.0:
                self.normalization = 0.5 * math.pi
            else:
                shape = self._interp_shape
                z, _ = integrate.quad(
                    shape, 0.0, self._tail_span, epsabs=0.0, epsrel=1e-12, limit=200
                )
                self.normalization = 0.5 * math.pi / z
                self._table = _PanelCDF(shape, 0.0, self._tail_span)
                self._z = z
        elif kind == "pt_gamma_slice":
            self.s_max = 2.0 * p["gamma0"]
            self._trunc_total = float(_gue_cdf(self.s_max))
            self.normalization = 0.5 * math.pi / self._trunc_total
        else:  # pragma: no cover - EnsembleSpec already rejects unknown kinds
            raise ValueError(f"unknown ensemble kind {kind!r}")

        self._mean = None

    # -- shapes ----------------------------------------------------------

    def _interp_shape(self, s):
        """(pi/2) eps s exp(-pi s^2/4) * integral_{-s/2}^{s/2} exp(pi(1-eps^2) t^2) dt.

        This is the full weighted-mixture density (unit mass analytically;
        the cached quadrature constant re-verifies that).  Evaluated in
        overflow-safe form: Dawson's function for eps < 1, where the inner
        integrand grows, and the error function for eps > 1.
        """
        eps = self.params["eps_interp"]
        s = np.asarray(s, dtype=float)
        if eps < 1.0:
            b = math.pi * (1.0 - eps * eps)
            arg = 0.5 * math.sqrt(b) * s
            return (math.pi * eps / math.sqrt(b)) * s * np.exp(
                -0.25 * math.pi * eps * eps * s * s
            ) * special.dawsn(arg)
        b = math.pi * (eps * eps - 1.0)
        arg = 0.5 * math.sqrt(b) * s
        return 0.5 * math.pi * eps * math.sqrt(math.pi / b) * s * np.exp(
            -0.25 * math.pi * s * s
        ) * special.erf(arg)

    def _pdf_array(self, s: np.ndarray) -> np.ndarray:
        kind, p = self.kind, self.params
        if kind in ("gue", "pt_nu_zero", "pt_nu_slice"):
            return _gue_pdf(s)
        if kind == "goe":
            return 0.5 * math.pi * s * np.exp(-0.25 * math.pi * s * s)
        if kind == "planar":
            m = self.s_min
            out = np.zeros_like(s)
            on = s >= m
            gap2 = (s[on] - m) * (s[on] + m)
            out[on] = 0.5 * math.pi * s[on] * np.exp(-0.25 * math.pi * gap2)
            return out
        if kind in ("cylinder", "cone"):
            m = self.s_min
            if m == 0.0:  # half-Gaussian limit: s/sqrt(s^2) == 1, also at s=0
                return np.exp(-0.25 * math.pi * s * s)
            out = np.zeros_like(s)
            on = s >= m
            gap2 = (s[on] - m) * (s[on] + m)
            with np.errstate(divide="ignore"):
                out[on] = s[on] / np.sqrt(gap2) * np.exp(-0.25 * math.pi * gap2)
            return out
        if kind == "paraboloid":
            a = p["alpha"]
            return self.normalization * s / np.sqrt(s * s + 4.0 * a * a) * np.exp(
                -0.25 * math.pi * s * s
            )
        if kind == "quartic":
            q = p["q_curv"]
            root = np.sqrt(s * s + q)
            return self.normalization * np.sqrt(root + math.sqrt(q)) / root * np.exp(
                -0.25 * math.pi * s * s
            )
        if kind == "gue_goe_interp":
            if p["eps_interp"] == 1.0:
                return _gue_pdf(s)
            return self._interp_shape(s) / self._z
        if kind == "pt_gamma_slice":
            out = np.where(s <= self.s_max, _gue_pdf(s) / self._trunc_total, 0.0)
            return out
        raise AssertionError(kind)

    def _cdf_array(self, s: np.ndarray) -> np.ndarray:
        kind, p = self.kind, self.params
        if kind in ("gue", "pt_nu_zero", "pt_nu_slice"):
            return _gue_cdf(s)
        if kind == "goe":
            return -np.expm1(-0.25 * math.pi * s * s)
        if kind == "planar":
            m = self.s_min
            out = np.zeros_like(s)
            on = s >= m
            out[on] = -np.expm1(-0.25 * math.pi * (s[on] - m) * (s[on] + m))
            return out
        if kind in ("cylinder", "cone"):
            m = self.s_min
            out = np.zeros_like(s)
            on = s >= m
            u = np.sqrt((s[on] - m) * (s[on] + m))
            out[on] = special.erf(0.5 * _SQRT_PI * u)
            return out
        if kind == "paraboloid":
            a = p["alpha"]
            w = np.sqrt(0.25 * s * s + a * a)
            ratio = special.erfcx(_SQRT_PI * w) / special.erfcx(_SQRT_PI * a)
            return 1.0 - ratio * np.exp(-0.25 * math.pi * s * s)
        if kind in ("quartic", "gue_goe_interp"):
            if kind == "gue_goe_interp" and p["eps_interp"] == 1.0:
                return _gue_cdf(s)
            return np.clip(self._table.partial(s) / self._z, 0.0, 1.0)
        if kind == "pt_gamma_slice":
            return np.minimum(_gue_cdf(np.minimum(s, self.s_max)) / self._trunc_total, 1.0)
        raise AssertionError(kind)

    # -- public evaluation -------------------------------------------------

    def pdf(self, s):
        """Density at s (scalar or array); 0 outside the support.

        Singular laws (cylinder/cone with s_min > 0) return ``inf`` exactly
        at the support edge; their CDF stays continuous there.
        """
        arr, scalar = _validated(s)
        if arr.size == 0:
            return np.empty(0)
        out = self._pdf_array(arr)
        return float(out[0]) if scalar else out

    def cdf(self, s):
        """Distribution function at s (scalar or array)."""
        arr, scalar = _validated(s)
        if arr.size == 0:
            return np.empty(0)
        out = self._cdf_array(arr)
        return float(out[0]) if scalar else out

    @property
    def support(self) -> tuple[float, float]:
        return (self.s_min, self.s_max)

    @property
    def tail_cutoff(self) -> float:
        """Upper integration horizon: mass beyond it is below 1e-16."""
        if self.kind == "gue_goe_interp":
            return self._tail_span
        if math.isfinite(self.s_max):
            return self.s_max
        return self.s_min + _TAIL_SPAN

    def moment(self, order: int) -> float:
        """integral of s^order * pdf over the support, by adaptive quadrature.

        The singular cylinder/cone integrand is regularized exactly with the
        substitution u = sqrt(s^2 - s_min^2), under which pdf ds becomes the
        plain Gaussian exp(-pi u^2/4) du.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        if self.kind in ("cylinder", "cone"):
            m = self.s_min

            def integrand(u):
                return (u * u + m * m) ** (0.5 * order) * math.exp(-0.25 * math.pi * u * u)

            val, _ = integrate.quad(integrand, 0.0, _TAIL_SPAN, epsabs=0.0, epsrel=1e-11)
            return val

        def integrand(s):
            return s ** order * float(self._pdf_array(np.array([s]))[0])

        val, _ = integrate.quad(
            integrand, self.s_min, self.tail_cutoff, epsabs=0.0, epsrel=1e-11, limit=200
        )
        return val

    def mean_spacing(self) -> float:
        """First moment; closed forms where they exist, else quadrature."""
        if self._mean is None:
            if self.kind in ("gue", "pt_nu_zero", "pt_nu_slice"):
                mean = 4.0 / math.pi
            elif self.kind == "goe":
                mean = 1.0
            elif self.kind in ("cylinder", "cone") and self.s_min == 0.0:
                mean = 2.0 / math.pi  # half-Gaussian
            elif self.kind == "gue_goe_interp" and self.params["eps_interp"] == 1.0:
                mean = 4.0 / math.pi
            else:
                mean = self.moment(1)
            self._mean = mean
        return self._mean


def _validated(s) -> tuple[np.ndarray, bool]:
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    scalar = np.ndim(s) == 0
    if arr.size and np.min(arr) < 0.0:
        raise ValueError("spacing arguments must be nonnegative")
    return arr, scalar


def spacing_law(spec_or_kind, params: dict | None = None) -> SpacingLaw:
    """Build the analytic spacing law for an ensemble spec or (kind, params)."""
    if isinstance(spec_or_kind, EnsembleSpec):
        return SpacingLaw(spec_or_kind.kind, spec_or_kind.params)
    return SpacingLaw(spec_or_kind, params or {})


def pdf(law: SpacingLaw, s):
    return law.pdf(s)


def cdf(law: SpacingLaw, s):
    return law.cdf(s)


def support(law: SpacingLaw) -> tuple[float, float]:
    return law.support


def mean_spacing(law: SpacingLaw) -> float:
    return law.mean_spacing()


def spacing_moment(law: SpacingLaw, order: int) -> float:
    return law.moment(order)


def normalization_constant(kind: str, params: dict | None = None) -> float:
    """Constant multiplying the law's documented unnormalized shape."""
    return spacing_law(kind, params or {}).normalization


_DESCRIPTIONS = {
    "gue": "independent Gaussian coordinates; quadratic level repulsion",
    "goe": "y frozen at 0; linear level repulsion",
    "planar": "y frozen at y0; GOE-shaped law gapped below 2|y0|",
    "cylinder": "x^2+z^2 frozen at rho0^2; gapped below 2*rho0 and singular at the edge",
    "paraboloid": "x^2+z^2 = 2*alpha*|y|; interpolates GOE (alpha large) to half-Gaussian",
    "quartic": "x^2+z^2 = y^4/q_curv; level clustering with pdf(0+) > 0",
    "cone": "x^2+z^2 = beta*(y+y0)^2; gapped below 2*g*|y0|, g=sqrt(beta/(1+beta)), singular edge",
    "gue_goe_interp": "Gaussian-weighted planar mixture; GUE at eps_interp=1",
    "pt_nu_zero": "PT family with nu forced to 0 (Hermitian slice); GUE spacing law",
    "pt_nu_slice": "PT family on the slice nu=nu0; GUE spacing law",
    "pt_gamma_slice": "PT family on the slice gamma=gamma0; GUE law truncated above 2*gamma0",
}


def law_description(kind: str) -> str:
    """One-line description of the spacing law for the given kind."""
    if kind not in _DESCRIPTIONS:
        raise ValueError(f"unknown ensemble kind {kind!r}; choose one of {ENSEMBLE_KINDS}")
    return _DESCRIPTIONS[kind]
