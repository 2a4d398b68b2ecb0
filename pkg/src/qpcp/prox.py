"""Proximity operators for the entrywise l1 and trace-norm regularizers.

Both operators minimize 0.5*||z - x||**2 + f(x) in closed form, over any
of the three scalar fields.  The l1 operator shrinks every entry's
magnitude by the threshold while keeping its direction (phase), which for
real entries reduces to classical soft thresholding.  The trace-norm
operator applies the same shrinkage to the singular values.
"""

from __future__ import annotations

import numpy as np

from .linalg import MatrixLike, QMatrix, adjoint, svd_truncated, zeros_like

__all__ = ["soft_threshold", "prox_l1", "prox_trace"]


def soft_threshold(x, threshold: float):
    """Real soft thresholding: x -> sign(x) * max(|x| - threshold, 0).

    Accepts scalars or real arrays; the dead zone [-threshold, threshold]
    maps to exactly 0.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    x = np.asarray(x, dtype=np.float64)
    out = np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)
    return out if out.ndim else float(out)


def _shrink_factors(mags: np.ndarray, threshold: float) -> np.ndarray:
    # (1 - threshold/|z|)_+ with the 0/0 case resolved to 0, the unique
    # minimizer in the limit.
    return np.maximum(mags - threshold, 0.0) / np.where(mags > 0.0, mags, 1.0)


def prox_l1(Z: MatrixLike, threshold: float) -> MatrixLike:
    """Entrywise magnitude shrinkage z -> (1 - threshold/|z|)_+ * z.

    Every surviving entry keeps its direction z/|z| (its complex phase, or
    unit-quaternion direction) and loses exactly ``threshold`` magnitude;
    entries with |z| <= threshold vanish.  On real input this is
    :func:`soft_threshold` applied entrywise.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if isinstance(Z, QMatrix):
        return Z * _shrink_factors(abs(Z), threshold)
    Z = np.asarray(Z)
    if not np.iscomplexobj(Z):
        return np.sign(Z) * np.maximum(np.abs(Z) - threshold, 0.0)
    return Z * _shrink_factors(np.abs(Z), threshold)


def prox_trace(Z: MatrixLike, threshold: float) -> MatrixLike:
    """Singular value shrinkage: U (Sigma - threshold)_+ V*.

    Singular values at or below the threshold are zeroed (reducing rank),
    the rest are lowered by it; singular vectors are untouched.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    res = svd_truncated(Z, threshold)
    if res.sigma.size == 0:
        return zeros_like(Z)
    return (res.U * (res.sigma - threshold)) @ adjoint(res.V)
