"""Batched 2x2 matrix kernels with a numba fast path and a pure-numpy fallback.

The hot loops of this package are element-wise over large sample batches:
composing 2x2 complex matrices from parameter rows and solving their spectra
in closed form.  Both operations are implemented twice, as numba ``@njit``
loops and as vectorized numpy, and the active implementation is chosen once
at import time from the environment variable ``RMT_LAB_BACKEND``:

* ``auto`` (default) - numba when importable, numpy otherwise
* ``numba``          - require numba, fail loudly if it is missing
* ``numpy``          - force the pure-numpy fallback

Random number generation never happens inside a kernel, so sample streams are
identical regardless of backend; only last-ulp rounding of the deterministic
transforms may differ.  ``python -m rmt_lab.benchmark`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

ENV_BACKEND = "RMT_LAB_BACKEND"
_VALID_BACKENDS = ("auto", "numba", "numpy")


def _compose_hermitian_batch_numpy(vals: np.ndarray) -> np.ndarray:
    """Rows (e, x, y, z) -> stack of e*I + x*sx + y*sy + z*sz."""
    e, x, y, z = vals[:, 0], vals[:, 1], vals[:, 2], vals[:, 3]
    out = np.empty((vals.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = e + z
    out[:, 0, 1] = x - 1j * y
    out[:, 1, 0] = x + 1j * y
    out[:, 1, 1] = e - z
    return out


def _compose_pt_batch_numpy(vals: np.ndarray) -> np.ndarray:
    """Rows (e, gamma, nu, theta, phi, eta) -> PT-symmetric matrix stack.

    The Bloch vector is gamma*n_r + i*nu*(sin(eta)*n_t + cos(eta)*n_p) in the
    orthonormal spherical frame (n_r, n_t, n_p) attached to (theta, phi).
    """
    e = vals[:, 0]
    gamma, nu = vals[:, 1], vals[:, 2]
    theta, phi, eta = vals[:, 3], vals[:, 4], vals[:, 5]
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    se, ce = np.sin(eta), np.cos(eta)
    wx = gamma * st * cp + 1j * nu * (se * ct * cp - ce * sp)
    wy = gamma * st * sp + 1j * nu * (se * ct * sp + ce * cp)
    wz = gamma * ct + 1j * nu * (-se * st)
    out = np.empty((vals.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = e + wz
    out[:, 0, 1] = wx - 1j * wy
    out[:, 1, 0] = wx + 1j * wy
    out[:, 1, 1] = e - wz
    return out


def _eigvals2x2_batch_numpy(mats: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a stack of 2x2 complex matrices.

    Column 0 holds the root with the smaller real part (ties broken by the
    smaller imaginary part); the discriminant is formed from the entry
    differences rather than trace^2 - 4 det to avoid cancellation when the
    diagonal dominates the gap.
    """
    a, b = mats[:, 0, 0], mats[:, 0, 1]
    c, d = mats[:, 1, 0], mats[:, 1, 1]
    center = 0.5 * (a + d)
    disc = 0.25 * (a - d) * (a - d) + b * c
    root = np.sqrt(disc)
    # principal sqrt gives Re >= 0, but -0.0 imaginary parts land on the
    # wrong side of the branch cut; fold those back so ordering is stable
    flip = (root.real == 0.0) & (root.imag < 0.0)
    root = np.where(flip, -root, root)
    out = np.empty((mats.shape[0], 2), dtype=np.complex128)
    out[:, 0] = center - root
    out[:, 1] = center + root
    return out


_NUMPY_IMPL = {
    "compose_hermitian_batch": _compose_hermitian_batch_numpy,
    "compose_pt_batch": _compose_pt_batch_numpy,
    "eigvals2x2_batch": _eigvals2x2_batch_numpy,
}


def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def compose_hermitian_batch(vals):
        n = vals.shape[0]
        out = np.empty((n, 2, 2), dtype=np.complex128)
        for i in range(n):
            e, x, y, z = vals[i, 0], vals[i, 1], vals[i, 2], vals[i, 3]
            out[i, 0, 0] = complex(e + z, 0.0)
            out[i, 0, 1] = complex(x, -y)
            out[i, 1, 0] = complex(x, y)
            out[i, 1, 1] = complex(e - z, 0.0)
        return out

    @njit(cache=True)
    def compose_pt_batch(vals):
        n = vals.shape[0]
        out = np.empty((n, 2, 2), dtype=np.complex128)
        for i in range(n):
            e = vals[i, 0]
            gamma, nu = vals[i, 1], vals[i, 2]
            theta, phi, eta = vals[i, 3], vals[i, 4], vals[i, 5]
            st, ct = np.sin(theta), np.cos(theta)
            sp, cp = np.sin(phi), np.cos(phi)
            se, ce = np.sin(eta), np.cos(eta)
            wx = complex(gamma * st * cp, nu * (se * ct * cp - ce * sp))
            wy = complex(gamma * st * sp, nu * (se * ct * sp + ce * cp))
            wz = complex(gamma * ct, -nu * se * st)
            out[i, 0, 0] = e + wz
            out[i, 0, 1] = wx - 1j * wy
            out[i, 1, 0] = wx + 1j * wy
            out[i, 1, 1] = e - wz
        return out

    @njit(cache=True)
    def eigvals2x2_batch(mats):
        n = mats.shape[0]
        out = np.empty((n, 2), dtype=np.complex128)
        for i in range(n):
            a, b = mats[i, 0, 0], mats[i, 0, 1]
            c, d = mats[i, 1, 0], mats[i, 1, 1]
            center = 0.5 * (a + d)
            disc = 0.25 * (a - d) * (a - d) + b * c
            root = np.sqrt(disc)
            if root.real == 0.0 and root.imag < 0.0:
                root = -root
            out[i, 0] = center - root
            out[i, 1] = center + root
        return out

    return {
        "compose_hermitian_batch": compose_hermitian_batch,
        "compose_pt_batch": compose_pt_batch,
        "eigvals2x2_batch": eigvals2x2_batch,
    }


def _resolve_backend() -> tuple[str, dict]:
    requested = os.environ.get(ENV_BACKEND, "auto").strip().lower()
    if requested not in _VALID_BACKENDS:
        raise RuntimeError(
            f"{ENV_BACKEND}={requested!r} is not valid; choose one of {_VALID_BACKENDS}"
        )
    if requested == "numpy":
        return "numpy", _NUMPY_IMPL
    try:
        impl = _build_numba_impl()
        return "numba", impl
    except ImportError:
        if requested == "numba":
            raise RuntimeError(
                f"{ENV_BACKEND}=numba but numba is not importable"
            ) from None
        return "numpy", _NUMPY_IMPL


_ACTIVE_NAME, _ACTIVE = _resolve_backend()

compose_hermitian_batch = _ACTIVE["compose_hermitian_batch"]
compose_pt_batch = _ACTIVE["compose_pt_batch"]
eigvals2x2_batch = _ACTIVE["eigvals2x2_batch"]


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _ACTIVE_NAME


def implementations() -> dict[str, dict]:
    """All buildable backends, keyed by name (for tests and benchmarks)."""
    impls = {"numpy": _NUMPY_IMPL}
    try:
        impls["numba"] = _build_numba_impl()
    except ImportError:
        pass
    return impls
