"""Exact 2x2 matrix construction, Pauli coordinates, spectra, and invariants.

Matrices are plain ``numpy`` arrays of shape (2, 2) and dtype complex128.
A general 2x2 complex matrix is coordinatized as

    M = (e + i*eps) * I + (X + i*R) . sigma,

with real 3-vectors X = (x, y, z) and R = (p, q, r); Hermitian matrices are
the slice eps = 0, R = 0, and PT-symmetric ones the slice eps = 0, X.R = 0.
All functions are pure; random generation takes a caller-owned generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianParams",
    "PTParams",
    "GeneralComplexParams",
    "Spectrum",
    "InvariantSet",
    "compose_hermitian",
    "compose_pt",
    "pauli_compose",
    "pauli_decompose",
    "eigenpair",
    "invariants",
    "pt_classify",
    "random_group_element",
    "transform",
    "PT_REAL",
    "PT_BROKEN",
    "NOT_PT",
    "GROUP_KINDS",
    "TRANSFORM_MODES",
]

DEFAULT_TOL = 1e-10

PT_REAL = "pt_real"
PT_BROKEN = "pt_broken"
NOT_PT = "not_pt"

GROUP_KINDS = ("unitary2", "special_orthogonal2_embedded", "gl2c")
TRANSFORM_MODES = ("conjugation", "similarity")


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class HermitianParams:
    """Coordinates of a Hermitian matrix e*I + (x, y, z).sigma."""

    e: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("HermitianParams", self.e, self.x, self.y, self.z)

    @property
    def spacing(self) -> float:
        """Eigenvalue spacing 2*sqrt(x^2 + y^2 + z^2)."""
        return 2.0 * math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class PTParams:
    """Coordinates of a PT-symmetric matrix.

    gamma scales the real Bloch direction, nu the imaginary in-plane part;
    (theta, phi) orient the spherical frame and eta rotates the imaginary
    part within it.  Canonical angle ranges are theta in [0, pi] and
    phi, eta in [0, 2*pi); values outside wrap through the trigonometry.
    """

    e: float
    gamma: float
    nu: float
    theta: float
    phi: float
    eta: float

    def __post_init__(self):
        _require_finite(
            "PTParams", self.e, self.gamma, self.nu, self.theta, self.phi, self.eta
        )
        if self.gamma < 0.0 or self.nu < 0.0:
            raise ValueError(
                f"gamma and nu must be nonnegative, got gamma={self.gamma}, nu={self.nu}"
            )

    @property
    def spacing(self) -> float:
        """|lambda2 - lambda1| = 2*sqrt(|gamma^2 - nu^2|) (0 at gamma == nu)."""
        return 2.0 * math.sqrt(abs(self.gamma * self.gamma - self.nu * self.nu))


@dataclass(frozen=True)
class GeneralComplexParams:
    """The eight real Pauli coordinates of a general 2x2 complex matrix."""

    e: float
    eps: float
    x: float
    y: float
    z: float
    p: float
    q: float
    r: float

    def __post_init__(self):
        _require_finite(
            "GeneralComplexParams",
            self.e, self.eps, self.x, self.y, self.z, self.p, self.q, self.r,
        )

    @property
    def x_vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def r_vec(self) -> np.ndarray:
        return np.array([self.p, self.q, self.r])


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue pair ordered by real part (ties by imaginary part)."""

    lambda1: complex
    lambda2: complex
    is_real: bool
    spacing: float


@dataclass(frozen=True)
class InvariantSet:
    """Similarity/conjugation invariants of the Pauli coordinates.

    c1 and c2 are invariant under all invertible similarity transformations;
    c3 = |X|^2 and c4 = |R|^2 only under unitary conjugation; c3_hermitian is
    the y coordinate, additionally preserved by real rotations embedded in
    U(2) (meaningful for Hermitian input).
    """

    c1: complex
    c2: complex
    c3: float
    c4: float
    c3_hermitian: float


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def compose_hermitian(p: HermitianParams) -> np.ndarray:
    """Build the Hermitian matrix e*I + x*sx + y*sy + z*sz."""
    return np.array(
        [
            [p.e + p.z, p.x - 1j * p.y],
            [p.x + 1j * p.y, p.e - p.z],
        ],
        dtype=np.complex128,
    )


def compose_pt(p: PTParams) -> np.ndarray:
    """Build the PT-symmetric matrix for the given spherical-frame coordinates.

    The Bloch vector is gamma*n_r + i*nu*sin(eta)*n_t + i*nu*cos(eta)*n_p
    with the orthonormal frame

        n_r = (sin t cos f, sin t sin f, cos t)
        n_t = (cos t cos f, cos t sin f, -sin t)
        n_p = (-sin f, cos f, 0).
    """
    st, ct = math.sin(p.theta), math.cos(p.theta)
    sp, cp = math.sin(p.phi), math.cos(p.phi)
    se, ce = math.sin(p.eta), math.cos(p.eta)
    wx = complex(p.gamma * st * cp, p.nu * (se * ct * cp - ce * sp))
    wy = complex(p.gamma * st * sp, p.nu * (se * ct * sp + ce * cp))
    wz = complex(p.gamma * ct, -p.nu * se * st)
    return np.array(
        [
            [p.e + wz, wx - 1j * wy],
            [wx + 1j * wy, p.e - wz],
        ],
        dtype=np.complex128,
    )


def pauli_compose(g: GeneralComplexParams) -> np.ndarray:
    """Build the general matrix (e + i*eps)*I + (X + i*R).sigma."""
    c = complex(g.e, g.eps)
    wx = complex(g.x, g.p)
    wy = complex(g.y, g.q)
    wz = complex(g.z, g.r)
    return np.array(
        [
            [c + wz, wx - 1j * wy],
            [wx + 1j * wy, c - wz],
        ],
        dtype=np.complex128,
    )


def pauli_decompose(m) -> GeneralComplexParams:
    """Read the unique Pauli coordinates off a 2x2 complex matrix."""
    a = _as_matrix(m)
    c = 0.5 * (a[0, 0] + a[1, 1])
    wz = 0.5 * (a[0, 0] - a[1, 1])
    wx = 0.5 * (a[0, 1] + a[1, 0])
    wy = 0.5j * (a[0, 1] - a[1, 0])
    return GeneralComplexParams(
        e=c.real, eps=c.imag,
        x=wx.real, y=wy.real, z=wz.real,
        p=wx.imag, q=wy.imag, r=wz.imag,
    )


def eigenpair(m, tol: float = DEFAULT_TOL) -> Spectrum:
    """Closed-form spectrum of a 2x2 matrix.

    lambda1 is the root with the smaller real part (ties by smaller imaginary
    part); a degenerate pair is legal and reports spacing 0.  The pair is
    flagged real when both imaginary parts are below ``tol`` in magnitude.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    a = _as_matrix(m)
    center = 0.5 * (a[0, 0] + a[1, 1])
    disc = 0.25 * (a[0, 0] - a[1, 1]) ** 2 + a[0, 1] * a[1, 0]
    root = complex(np.sqrt(disc))
    if root.real == 0.0 and root.imag < 0.0:
        root = -root
    lam1, lam2 = center - root, center + root
    is_real = abs(lam1.imag) < tol and abs(lam2.imag) < tol
    return Spectrum(
        lambda1=complex(lam1),
        lambda2=complex(lam2),
        is_real=bool(is_real),
        spacing=float(abs(lam2 - lam1)),
    )


def invariants(g: GeneralComplexParams) -> InvariantSet:
    """Evaluate (c1, c2, c3, c4, c3_hermitian) at the given coordinates."""
    x2 = g.x * g.x + g.y * g.y + g.z * g.z
    r2 = g.p * g.p + g.q * g.q + g.r * g.r
    xr = g.x * g.p + g.y * g.q + g.z * g.r
    return InvariantSet(
        c1=complex(g.e, g.eps),
        c2=complex(x2 - r2, 2.0 * xr),
        c3=x2,
        c4=r2,
        c3_hermitian=g.y,
    )


def pt_classify(g: GeneralComplexParams, tol: float = DEFAULT_TOL) -> str:
    """Classify coordinates as not_pt, pt_real, or pt_broken.

    PT symmetry requires eps = 0 and X.R = 0 (both tested against ``tol``,
    the dot product relative to |X||R|); within the PT slice the spectrum is
    real iff |X|^2 >= |R|^2.  The boundary |X| = |R| (exceptional point,
    spacing 0) counts as real, inclusive up to ``tol`` so that round-off at
    the coalescence cannot flip the verdict.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    inv = invariants(g)
    scale = max(1.0, math.sqrt(inv.c3) * math.sqrt(inv.c4))
    if abs(g.eps) > tol or abs(0.5 * inv.c2.imag) > tol * scale:
        return NOT_PT
    return PT_REAL if inv.c3 - inv.c4 >= -tol * max(1.0, inv.c3, inv.c4) else PT_BROKEN


def random_group_element(kind: str, rng: np.random.Generator) -> np.ndarray:
    """Draw a random transformation matrix of the requested kind.

    * ``unitary2``: Haar-distributed 2x2 unitary (QR of a complex Ginibre
      matrix with the phase correction that makes the factorization unique).
    * ``special_orthogonal2_embedded``: real rotation by a uniform angle,
      viewed as a complex matrix; acts by congruence.
    * ``gl2c``: complex Gaussian matrix, redrawn until its 2-norm condition
      number is at most 100 (keeps similarity transforms well-conditioned).
    """
    if kind == "unitary2":
        z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
        qmat, rmat = np.linalg.qr(z)
        d = np.diagonal(rmat)
        return qmat * (d / np.abs(d))
    if kind == "special_orthogonal2_embedded":
        ang = rng.uniform(0.0, 2.0 * math.pi)
        c, s = math.cos(ang), math.sin(ang)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if kind == "gl2c":
        while True:
            g = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
            if np.linalg.cond(g) <= 100.0:
                return g
    raise ValueError(f"unknown group kind {kind!r}; choose one of {GROUP_KINDS}")


def transform(m, g, mode: str) -> np.ndarray:
    """Apply G M G^dagger (conjugation) or G M G^-1 (similarity).

    G must be invertible in either mode; |det G| is tested against the
    squared Frobenius norm so the check is scale-free.
    """
    a = _as_matrix(m)
    t = _as_matrix(g)
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(det) <= 1e-14 * max(1.0, float(np.sum(np.abs(t) ** 2))):
        raise ValueError("transformation matrix is singular")
    if mode == "conjugation":
        return t @ a @ t.conj().T
    if mode == "similarity":
        inv = np.array([[t[1, 1], -t[0, 1]], [-t[1, 0], t[0, 0]]], dtype=np.complex128) / det
        return t @ a @ inv
    raise ValueError(f"unknown transform mode {mode!r}; choose one of {TRANSFORM_MODES}")
