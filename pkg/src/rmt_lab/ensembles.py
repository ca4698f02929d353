"""Constrained Monte Carlo samplers for the eleven 2x2 ensembles.

Every ensemble lives on the Gaussian base measure exp(-pi*(e^2 + |X|^2)) for
Hermitian kinds, or its PT-symmetric extension, restricted to a geometric
constraint surface.  Each delta constraint has been integrated analytically
into an explicit marginal recipe, so the samplers below draw exactly from the
constrained measure; no delta is ever discretized.

All randomness flows through a caller-owned ``numpy.random.Generator``
(``stream`` seeds its own from an integer), and draws are vectorized, so a
sample stream is fully determined by (spec, n, seed) regardless of the kernel
backend.  The per-kind generator consumption order is fixed and documented on
each ``_batch_*`` sampler; changing it is a compatibility break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import _kernels
from .matrix_core import HermitianParams, PTParams, compose_hermitian, compose_pt

__all__ = [
    "GAUSS_SIGMA",
    "ENSEMBLE_KINDS",
    "HERMITIAN_KINDS",
    "PT_KINDS",
    "EnsembleSpec",
    "MatrixSample",
    "SampleBatch",
    "GaussianProposal",
    "rejection_sample_density",
    "draw",
    "stream",
    "sample_batch",
    "spacings",
    "worker_seed_sequences",
]

# Standard deviation of the base Gaussian: density prop. to exp(-pi t^2).
GAUSS_SIGMA = 1.0 / math.sqrt(2.0 * math.pi)

HERMITIAN_FIELDS = ("e", "x", "y", "z")
PT_FIELDS = ("e", "gamma", "nu", "theta", "phi", "eta")

HERMITIAN_KINDS = frozenset(
    {"gue", "goe", "planar", "cylinder", "paraboloid", "quartic", "cone", "gue_goe_interp"}
)
PT_KINDS = frozenset({"pt_nu_zero", "pt_nu_slice", "pt_gamma_slice"})
ENSEMBLE_KINDS = tuple(sorted(HERMITIAN_KINDS | PT_KINDS))

# kind -> {param name: (domain check, domain description)}
_PARAM_DOMAINS: dict[str, dict[str, tuple[Callable[[float], bool], str]]] = {
    "gue": {},
    "goe": {},
    "planar": {"y0": (math.isfinite, "any real")},
    "cylinder": {"rho0": (lambda v: v >= 0.0, ">= 0")},
    "paraboloid": {"alpha": (lambda v: v > 0.0, "> 0")},
    "quartic": {"q_curv": (lambda v: v > 0.0, "> 0")},
    "cone": {"beta": (lambda v: v > 0.0, "> 0"), "y0": (math.isfinite, "any real")},
    "gue_goe_interp": {"eps_interp": (lambda v: v > 0.0, "> 0")},
    "pt_nu_zero": {},
    "pt_nu_slice": {"nu0": (lambda v: v > 0.0, "> 0")},
    "pt_gamma_slice": {"gamma0": (lambda v: v > 0.0, "> 0")},
}


def param_domains(kind: str) -> dict[str, str]:
    """Human-readable parameter domains for one ensemble kind."""
    if kind not in _PARAM_DOMAINS:
        raise ValueError(f"unknown ensemble kind {kind!r}; choose one of {ENSEMBLE_KINDS}")
    return {name: desc for name, (_, desc) in _PARAM_DOMAINS[kind].items()}


@dataclass(frozen=True)
class EnsembleSpec:
    """One ensemble kind plus its constraint parameters (validated)."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _PARAM_DOMAINS:
            raise ValueError(
                f"unknown ensemble kind {self.kind!r}; choose one of {ENSEMBLE_KINDS}"
            )
        domains = _PARAM_DOMAINS[self.kind]
        missing = sorted(set(domains) - set(self.params))
        extra = sorted(set(self.params) - set(domains))
        if missing:
            raise ValueError(f"{self.kind}: missing parameter(s) {missing}")
        if extra:
            raise ValueError(f"{self.kind}: unexpected parameter(s) {extra}")
        for name, (check, desc) in domains.items():
            v = self.params[name]
            if not (isinstance(v, (int, float)) and math.isfinite(v) and check(float(v))):
                raise ValueError(f"{self.kind}: parameter {name}={v!r} outside domain {desc}")
        # detach from the caller's dict so later mutation cannot skip validation
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})

    @property
    def is_pt(self) -> bool:
        return self.kind in PT_KINDS

    def param(self, name: str) -> float:
        return float(self.params[name])


@dataclass(frozen=True)
class MatrixSample:
    """One draw: parameter point, composed matrix, and closed-form spacing."""

    params: HermitianParams | PTParams
    matrix: np.ndarray
    spacing: float


@dataclass(frozen=True)
class SampleBatch:
    """Vectorized draws: one row of parameter values per sample.

    ``values`` columns follow HERMITIAN_FIELDS (e, x, y, z) for Hermitian
    kinds and PT_FIELDS (e, gamma, nu, theta, phi, eta) for PT kinds;
    ``spacing`` is the closed-form spacing of each row.
    """

    kind: str
    fields: tuple
    values: np.ndarray
    spacing: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]

    def matrices(self) -> np.ndarray:
        """Compose all rows into a (n, 2, 2) complex stack."""
        if self.fields == PT_FIELDS:
            return _kernels.compose_pt_batch(self.values)
        return _kernels.compose_hermitian_batch(self.values)

    def eigvals(self) -> np.ndarray:
        """Closed-form eigenvalues of the composed matrices, shape (n, 2)."""
        return _kernels.eigvals2x2_batch(self.matrices())

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.fields.index(name)]


@dataclass(frozen=True)
class GaussianProposal:
    """Envelope for rejection sampling: kernel exp(-(t-mean)^2 / (2 sigma^2))."""

    mean: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"invalid Gaussian proposal ({self.mean}, {self.sigma})")


def rejection_sample_density(
    log_density: Callable[[float], float],
    proposal: GaussianProposal,
    rng: np.random.Generator,
    log_bound: float = 0.0,
    window: int = 1_000_000,
) -> float:
    """Draw one value exactly from the density exp(log_density).

    Requires log_density(t) <= log_bound + log-kernel of ``proposal`` for all
    t (the caller supplies the bound).  Raises RuntimeError if ``window``
    consecutive proposals are rejected, which signals a mis-specified
    envelope (acceptance rate below 1/window).
    """
    if not math.isfinite(log_bound):
        raise ValueError("log_bound must be finite")
    inv_two_sigma2 = 0.5 / (proposal.sigma * proposal.sigma)
    for _ in range(window):
        t = rng.normal(proposal.mean, proposal.sigma)
        log_kernel = -(t - proposal.mean) ** 2 * inv_two_sigma2
        # log1p(-u) maps the uniform into (-inf, 0] without ever taking log(0)
        if math.log1p(-rng.random()) <= log_density(t) - log_bound - log_kernel:
            return t
    raise RuntimeError(
        f"rejection sampler accepted nothing in {window} proposals; "
        "the envelope does not dominate the target"
    )


def _rejection_batch(
    n: int,
    rng: np.random.Generator,
    propose: Callable[[int, np.random.Generator], np.ndarray],
    log_accept: Callable[[np.ndarray], np.ndarray],
    max_chunk: int = 4_000_000,
) -> np.ndarray:
    """Vectorized rejection: fill n accepted values from batched proposals.

    The chunk size adapts to the observed acceptance rate, so the generator
    consumption is still a deterministic function of (n, generator state).
    """
    out = np.empty(n)
    filled = 0
    attempts = 0
    accepted = 0
    while filled < n:
        rate = accepted / attempts if attempts else 1.0
        k = min(max_chunk, int((n - filled) / max(rate, 1e-3)) + 16)
        cand = propose(k, rng)
        keep = np.log1p(-rng.random(k)) <= log_accept(cand)
        attempts += k
        accepted += int(keep.sum())
        got = cand[keep]
        take = min(got.shape[0], n - filled)
        out[filled:filled + take] = got[:take]
        filled += take
        if attempts >= 1_000_000 and accepted / attempts < 1e-6:
            raise RuntimeError(
                "batched rejection acceptance rate collapsed below 1e-6; "
                "envelope does not dominate the target"
            )
    return out


def _hermitian_spacing(values: np.ndarray) -> np.ndarray:
    x, y, z = values[:, 1], values[:, 2], values[:, 3]
    return 2.0 * np.sqrt(x * x + y * y + z * z)


def _pt_spacing(values: np.ndarray) -> np.ndarray:
    gamma, nu = values[:, 1], values[:, 2]
    return 2.0 * np.sqrt(np.maximum(gamma * gamma - nu * nu, 0.0))


def _gue_spacing_draws(n: int, rng: np.random.Generator) -> np.ndarray:
    """n exact draws from the unitary-class spacing law (pi/2) s^2 e^{-pi s^2/4}.

    The law is the distribution of twice the norm of three independent
    Gaussians with density exp(-pi t^2), so we draw exactly that.
    """
    g = rng.normal(0.0, GAUSS_SIGMA, (n, 3))
    return 2.0 * np.sqrt(np.sum(g * g, axis=1))


def _pt_angles(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """theta with density sin(theta)/2 via arccos(1 - 2u); phi, eta uniform."""
    theta = np.arccos(1.0 - 2.0 * rng.random(n))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    eta = rng.uniform(0.0, 2.0 * math.pi, n)
    return theta, phi, eta


def _batch_gue(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    return rng.normal(0.0, GAUSS_SIGMA, (n, 4))


def _batch_goe(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    exz = rng.normal(0.0, GAUSS_SIGMA, (n, 3))
    vals = np.zeros((n, 4))
    vals[:, 0], vals[:, 1], vals[:, 3] = exz[:, 0], exz[:, 1], exz[:, 2]
    return vals


def _batch_planar(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    vals = _batch_goe(n, rng, params)
    vals[:, 2] = params["y0"]
    return vals


def _batch_cylinder(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # consumption order: (e, y) normals, then theta
    rho0 = params["rho0"]
    ey = rng.normal(0.0, GAUSS_SIGMA, (n, 2))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    vals = np.empty((n, 4))
    vals[:, 0] = ey[:, 0]
    vals[:, 1] = rho0 * np.cos(theta)
    vals[:, 2] = ey[:, 1]
    vals[:, 3] = rho0 * np.sin(theta)
    return vals


def _batch_paraboloid(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # |y| has density prop. to exp(-pi*(t^2 + 2*alpha*t)) on t >= 0: propose
    # half-normal exp(-pi t^2), accept with exp(-2 pi alpha t) (envelope
    # constant 0); the paraboloid branch is a fair coin on the sign of y.
    # consumption order: e, rejection stream for |y|, sign coin, theta
    alpha = params["alpha"]
    e = rng.normal(0.0, GAUSS_SIGMA, n)
    t = _rejection_batch(
        n,
        rng,
        propose=lambda k, r: np.abs(r.normal(0.0, GAUSS_SIGMA, k)),
        log_accept=lambda c: -2.0 * math.pi * alpha * c,
    )
    sign = np.where(rng.integers(0, 2, n) == 1, 1.0, -1.0)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    rho = np.sqrt(2.0 * alpha * t)
    vals = np.empty((n, 4))
    vals[:, 0] = e
    vals[:, 1] = rho * np.cos(theta)
    vals[:, 2] = sign * t
    vals[:, 3] = rho * np.sin(theta)
    return vals


def _batch_quartic(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # y has density prop. to exp(-pi*(y^4/q + y^2)): propose exp(-pi y^2),
    # accept with exp(-pi y^4 / q).  consumption order: e, rejection, theta
    q = params["q_curv"]
    e = rng.normal(0.0, GAUSS_SIGMA, n)
    y = _rejection_batch(
        n,
        rng,
        propose=lambda k, r: r.normal(0.0, GAUSS_SIGMA, k),
        log_accept=lambda c: -math.pi * c ** 4 / q,
    )
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    rho = y * y / math.sqrt(q)
    vals = np.empty((n, 4))
    vals[:, 0] = e
    vals[:, 1] = rho * np.cos(theta)
    vals[:, 2] = y
    vals[:, 3] = rho * np.sin(theta)
    return vals


def _batch_cone(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # y is Gaussian with density prop. to exp(-pi*((1+beta) y^2 + 2 beta y0 y)),
    # i.e. mean -beta*y0/(1+beta) and variance 1/(2 pi (1+beta)).
    # consumption order: (e, y) normals, then theta
    beta, y0 = params["beta"], params["y0"]
    ey = rng.normal(0.0, 1.0, (n, 2))
    e = ey[:, 0] * GAUSS_SIGMA
    y = -beta * y0 / (1.0 + beta) + ey[:, 1] * GAUSS_SIGMA / math.sqrt(1.0 + beta)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    rho = math.sqrt(beta) * np.abs(y + y0)
    vals = np.empty((n, 4))
    vals[:, 0] = e
    vals[:, 1] = rho * np.cos(theta)
    vals[:, 2] = y
    vals[:, 3] = rho * np.sin(theta)
    return vals


def _batch_interp(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # mixture of planar slices: y0 per-draw Gaussian with density
    # prop. to exp(-pi eps^2 y0^2).  consumption order: y0, then (e, x, z)
    eps = params["eps_interp"]
    y0 = rng.normal(0.0, GAUSS_SIGMA / eps, n)
    exz = rng.normal(0.0, GAUSS_SIGMA, (n, 3))
    vals = np.empty((n, 4))
    vals[:, 0], vals[:, 1], vals[:, 3] = exz[:, 0], exz[:, 1], exz[:, 2]
    vals[:, 2] = y0
    return vals


def _batch_pt_nu_zero(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # a gue draw re-expressed in spherical PT coordinates with nu = 0;
    # eta is irrelevant at nu = 0 and drawn uniform to keep it well-defined.
    # consumption order: (e, x, y, z) normals, then eta
    exyz = rng.normal(0.0, GAUSS_SIGMA, (n, 4))
    eta = rng.uniform(0.0, 2.0 * math.pi, n)
    x, y, z = exyz[:, 1], exyz[:, 2], exyz[:, 3]
    gamma = np.sqrt(x * x + y * y + z * z)
    safe = np.where(gamma > 0.0, gamma, 1.0)
    theta = np.arccos(np.clip(z / safe, -1.0, 1.0))
    phi = np.mod(np.arctan2(y, x), 2.0 * math.pi)
    vals = np.empty((n, 6))
    vals[:, 0] = exyz[:, 0]
    vals[:, 1] = gamma
    vals[:, 2] = 0.0
    vals[:, 3] = np.where(gamma > 0.0, theta, 0.0)
    vals[:, 4] = np.where(gamma > 0.0, phi, 0.0)
    vals[:, 5] = eta
    return vals


def _batch_pt_nu_slice(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # spacing follows the unitary-class law exactly; gamma reconstructs it
    # on the nu = nu0 slice.  consumption order: e, s-draws, theta, phi, eta
    nu0 = params["nu0"]
    e = rng.normal(0.0, GAUSS_SIGMA, n)
    s = _gue_spacing_draws(n, rng)
    theta, phi, eta = _pt_angles(n, rng)
    vals = np.empty((n, 6))
    vals[:, 0] = e
    vals[:, 1] = np.sqrt(0.25 * s * s + nu0 * nu0)
    vals[:, 2] = nu0
    vals[:, 3] = theta
    vals[:, 4] = phi
    vals[:, 5] = eta
    return vals


def _batch_pt_gamma_slice(n: int, rng: np.random.Generator, params: dict) -> np.ndarray:
    # spacing is a unitary-class draw conditioned on s < 2*gamma0 (batched
    # rejection); nu closes the slice.  consumption order: e, s-rejection
    # stream, theta, phi, eta
    gamma0 = params["gamma0"]
    e = rng.normal(0.0, GAUSS_SIGMA, n)

    def propose(k: int, r: np.random.Generator) -> np.ndarray:
        return _gue_spacing_draws(k, r)

    def log_accept(c: np.ndarray) -> np.ndarray:
        return np.where(c < 2.0 * gamma0, 0.0, -np.inf)

    s = _rejection_batch(n, rng, propose, log_accept)
    theta, phi, eta = _pt_angles(n, rng)
    vals = np.empty((n, 6))
    vals[:, 0] = e
    vals[:, 1] = gamma0
    vals[:, 2] = np.sqrt(np.maximum(gamma0 * gamma0 - 0.25 * s * s, 0.0))
    vals[:, 3] = theta
    vals[:, 4] = phi
    vals[:, 5] = eta
    return vals


_BATCHERS = {
    "gue": _batch_gue,
    "goe": _batch_goe,
    "planar": _batch_planar,
    "cylinder": _batch_cylinder,
    "paraboloid": _batch_paraboloid,
    "quartic": _batch_quartic,
    "cone": _batch_cone,
    "gue_goe_interp": _batch_interp,
    "pt_nu_zero": _batch_pt_nu_zero,
    "pt_nu_slice": _batch_pt_nu_slice,
    "pt_gamma_slice": _batch_pt_gamma_slice,
}


def sample_batch(spec: EnsembleSpec, n: int, rng: np.random.Generator) -> SampleBatch:
    """Draw n samples from the constrained measure as parameter arrays."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    params = {k: float(v) for k, v in spec.params.items()}
    values = _BATCHERS[spec.kind](n, rng, params)
    if spec.is_pt:
        return SampleBatch(spec.kind, PT_FIELDS, values, _pt_spacing(values))
    return SampleBatch(spec.kind, HERMITIAN_FIELDS, values, _hermitian_spacing(values))


def _sample_from_row(batch: SampleBatch, i: int) -> MatrixSample:
    row = batch.values[i]
    if batch.fields == PT_FIELDS:
        params = PTParams(*map(float, row))
        matrix = compose_pt(params)
    else:
        params = HermitianParams(*map(float, row))
        matrix = compose_hermitian(params)
    return MatrixSample(params=params, matrix=matrix, spacing=float(batch.spacing[i]))


def draw(spec: EnsembleSpec, rng: np.random.Generator) -> MatrixSample:
    """One draw from the constrained measure."""
    return _sample_from_row(sample_batch(spec, 1, rng), 0)


def stream(spec: EnsembleSpec, n: int, seed: int) -> Iterator[MatrixSample]:
    """Lazily yield n independent draws; identical (spec, n, seed) replays."""
    batch = sample_batch(spec, n, np.random.default_rng(seed))
    for i in range(n):
        yield _sample_from_row(batch, i)


def spacings(spec: EnsembleSpec, n: int, seed: int) -> np.ndarray:
    """Spacing sequence of ``stream(spec, n, seed)`` without object overhead."""
    return sample_batch(spec, n, np.random.default_rng(seed)).spacing


def worker_seed_sequences(seed: int, workers: int) -> list[np.random.SeedSequence]:
    """Split one stream seed into independent per-worker seed sequences.

    Splitting rule: ``numpy.random.SeedSequence(seed).spawn(workers)``, with
    worker i owning child i.  A single worker is the reproducibility
    reference and uses ``default_rng(seed)`` directly, not a spawned child.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return np.random.SeedSequence(seed).spawn(workers)
