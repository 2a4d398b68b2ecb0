"""Dense matrices over the reals, complexes and quaternions.

Real and complex matrices are plain numpy arrays.  Quaternion matrices
are held in a :class:`QMatrix`, which stores the unique complex pair
representation A = X + Y*j as two complex arrays.  That choice makes the
two classical embeddings cheap:

* ``complex_adjoint`` maps an m-by-n quaternion matrix to the 2m-by-2n
  complex block matrix [[X, Y], [-conj(Y), conj(X)]].  It is a ring
  isomorphism (products and adjoints are preserved) and the singular
  values of the image are those of the original, each repeated twice.
* ``real_embedding`` lays the four real components side by side into an
  m-by-4n real matrix whose vectorization realizes the Euclidean inner
  product Re tr(A B*).

The quaternion SVD is computed through the complex adjoint: one complex
SVD, then one representative singular vector per duplicated pair is
pulled back to a quaternion vector.  Degenerate (repeated) singular
values can tangle the pairs, so the fast path is verified against the
reconstruction and orthonormality contracts and a clustered, re-picked
extraction is used whenever the check fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .quaternion import Quaternion

__all__ = [
    "QMatrix",
    "SvdResult",
    "MatrixLike",
    "adjoint",
    "complex_adjoint",
    "real_embedding",
    "inner",
    "frobenius_norm",
    "max_abs",
    "spectral_norm",
    "svd",
    "svd_truncated",
    "zeros_like",
]

_TINY = np.finfo(np.float64).tiny


class QMatrix:
    """Dense quaternion matrix stored as the complex pair A = X + Y*j.

    The arrays ``x`` and ``y`` are complex128 with identical 2-D shapes;
    entry (i, l) of the matrix is ``x[i, l] + y[i, l]*j``.  Instances are
    treated as immutable values: every operation returns a new matrix.

    Supported arithmetic mirrors the subset of ndarray behaviour that the
    solvers need: ``+``/``-`` between quaternion matrices, ``*`` and ``/``
    by real scalars or broadcastable real arrays (entrywise real scaling),
    ``@`` for the quaternion matrix product, and ``abs()`` for the
    entrywise quaternion magnitude.
    """

    __slots__ = ("x", "y")
    __array_ufunc__ = None  # keep numpy from broadcasting into us

    def __init__(self, x, y=None):
        x = np.asarray(x, dtype=np.complex128)
        if y is None:
            y = np.zeros_like(x)
        else:
            y = np.asarray(y, dtype=np.complex128)
        if x.shape != y.shape:
            raise ValueError(f"component shapes differ: {x.shape} vs {y.shape}")
        if x.ndim != 2:
            raise ValueError("QMatrix is 2-D; got ndim=%d" % x.ndim)
        self.x = x
        self.y = y

    # -- construction -------------------------------------------------

    @classmethod
    def from_parts(cls, a0, a1, a2, a3) -> "QMatrix":
        """Build from the four real component arrays of a0+a1*i+a2*j+a3*k."""
        a0, a1, a2, a3 = (np.asarray(a, dtype=np.float64) for a in (a0, a1, a2, a3))
        return cls(a0 + 1j * a1, a2 + 1j * a3)

    @classmethod
    def from_complex(cls, z) -> "QMatrix":
        """Embed a real or complex matrix (j and k parts zero)."""
        return cls(np.asarray(z, dtype=np.complex128))

    @classmethod
    def zeros(cls, shape) -> "QMatrix":
        return cls(np.zeros(shape, dtype=np.complex128))

    @classmethod
    def eye(cls, n: int) -> "QMatrix":
        return cls(np.eye(n, dtype=np.complex128))

    # -- structure ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.x.shape

    @property
    def size(self) -> int:
        return self.x.size

    def parts(self):
        """The four real component arrays (a0, a1, a2, a3)."""
        return self.x.real, self.x.imag, self.y.real, self.y.imag

    def entry(self, i: int, l: int) -> Quaternion:
        return Quaternion.from_complex_pair(self.x[i, l], self.y[i, l])

    def conj(self) -> "QMatrix":
        # conj(x + y*j) = conj(x) - y*j
        return QMatrix(self.x.conj(), -self.y)

    @property
    def H(self) -> "QMatrix":
        """Conjugate transpose."""
        return QMatrix(self.x.conj().T, -self.y.T)

    def trace(self) -> Quaternion:
        return Quaternion.from_complex_pair(
            complex(np.trace(self.x)), complex(np.trace(self.y)))

    def copy(self) -> "QMatrix":
        return QMatrix(self.x.copy(), self.y.copy())

    def isfinite(self) -> bool:
        return bool(np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y)))

    def __getitem__(self, key) -> "QMatrix":
        return QMatrix(self.x[key], self.y[key])

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.x, -self.y)

    def __mul__(self, scale) -> "QMatrix":
        scale = _real_factor(scale)
        if scale is None:
            return NotImplemented
        return QMatrix(self.x * scale, self.y * scale)

    __rmul__ = __mul__

    def __truediv__(self, scale) -> "QMatrix":
        scale = _real_factor(scale)
        if scale is None:
            return NotImplemented
        return QMatrix(self.x / scale, self.y / scale)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        # (x1 + y1 j)(x2 + y2 j) = (x1 x2 - y1 conj(y2)) + (x1 y2 + y1 conj(x2)) j
        return QMatrix(
            self.x @ other.x - self.y @ other.y.conj(),
            self.x @ other.y + self.y @ other.x.conj(),
        )

    def __abs__(self) -> np.ndarray:
        """Entrywise quaternion magnitude, as a real array."""
        return np.hypot(np.abs(self.x), np.abs(self.y))

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape})"


MatrixLike = Union[np.ndarray, QMatrix]


def _real_factor(value):
    """Validate a real scalar/array scale factor; None if unusable."""
    if isinstance(value, (int, float)):
        return float(value)
    arr = np.asarray(value)
    if arr.dtype.kind not in "fiu":
        return None
    return arr


def as_qmatrix(A) -> QMatrix:
    """Coerce to a quaternion matrix; real/complex inputs embed with y = 0."""
    if isinstance(A, QMatrix):
        return A
    return QMatrix.from_complex(np.asarray(A))


# ---------------------------------------------------------------------------
# embeddings and scalar-valued reductions
# ---------------------------------------------------------------------------

def complex_adjoint(A) -> np.ndarray:
    """The 2m-by-2n complex adjoint [[X, Y], [-conj(Y), conj(X)]] of A = X + Y*j.

    Products, adjoints and (doubled) traces are preserved, and each
    singular value of A shows up exactly twice in the image.
    """
    A = as_qmatrix(A)
    return np.block([[A.x, A.y], [-A.y.conj(), A.x.conj()]])


def real_embedding(A) -> np.ndarray:
    """The m-by-4n real matrix [a0, a1, a2, a3] of quaternion components.

    Vectorizing this embedding turns the quaternion inner product
    Re tr(A B*) into the ordinary Euclidean dot product.
    """
    A = as_qmatrix(A)
    a0, a1, a2, a3 = A.parts()
    return np.concatenate([a0, a1, a2, a3], axis=1)


def adjoint(A: MatrixLike) -> MatrixLike:
    """Conjugate transpose over any of the three fields."""
    if isinstance(A, QMatrix):
        return A.H
    return np.asarray(A).conj().T


def inner(A: MatrixLike, B: MatrixLike) -> float:
    """Real inner product Re tr(A B*); Frobenius inner product over the field."""
    if isinstance(A, QMatrix) or isinstance(B, QMatrix):
        A, B = as_qmatrix(A), as_qmatrix(B)
        if A.shape != B.shape:
            raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
        return float(np.real(np.vdot(B.x, A.x) + np.vdot(B.y, A.y)))
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return float(np.real(np.vdot(B, A)))


def frobenius_norm(A: MatrixLike) -> float:
    if isinstance(A, QMatrix):
        return math.hypot(np.linalg.norm(A.x), np.linalg.norm(A.y))
    return float(np.linalg.norm(np.asarray(A)))


def max_abs(A: MatrixLike) -> float:
    """Largest entrywise magnitude (quaternion modulus over the quaternions)."""
    mags = abs(A) if isinstance(A, QMatrix) else np.abs(np.asarray(A))
    if mags.size == 0:
        return 0.0
    return float(mags.max())


def spectral_norm(A: MatrixLike) -> float:
    """Largest singular value.

    Dense SVD up to min(m, n) = 512; beyond that a deterministic power
    iteration (tol 1e-8, at most 1000 sweeps) on the Gram chain is used.
    """
    small = min(_shape_of(A)) <= 512
    C = complex_adjoint(A) if isinstance(A, QMatrix) else np.asarray(A)
    if C.size == 0:
        raise ValueError("matrix must be nonempty")
    if small:
        return float(np.linalg.svd(C, compute_uv=False)[0])
    return _power_norm(C)


def _shape_of(A: MatrixLike) -> tuple[int, int]:
    return A.shape if isinstance(A, QMatrix) else np.asarray(A).shape


def _power_norm(C: np.ndarray, tol: float = 1e-8, max_iters: int = 1000) -> float:
    n = C.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n), dtype=C.dtype)
    sigma = 0.0
    for _ in range(max_iters):
        u = C @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        v = C.conj().T @ (u / nu)
        new_sigma = np.linalg.norm(v)
        v = v / new_sigma
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1.0):
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def zeros_like(A: MatrixLike) -> MatrixLike:
    if isinstance(A, QMatrix):
        return QMatrix.zeros(A.shape)
    return np.zeros_like(np.asarray(A))


# ---------------------------------------------------------------------------
# singular value decomposition
# ---------------------------------------------------------------------------

@dataclass
class SvdResult:
    """Thin SVD A = U diag(sigma) V* with sigma real, nonnegative, nonincreasing.

    U is m-by-r and V is n-by-r over the input's field, r = min(m, n);
    both have orthonormal columns under the conjugate-transpose product.
    """

    U: MatrixLike
    sigma: np.ndarray
    V: MatrixLike

    def reconstruct(self) -> MatrixLike:
        return (self.U * self.sigma) @ adjoint(self.V)


def svd(A: MatrixLike) -> SvdResult:
    """Thin SVD over the input's field.

    Real and complex inputs go straight to LAPACK.  Quaternion inputs are
    decomposed through the complex adjoint: its singular values come in
    pairs, one representative per pair is kept (pair mean, which cancels
    rounding asymmetry), and the paired complex singular vectors are
    pulled back to quaternion vectors.
    """
    if isinstance(A, QMatrix):
        return _qsvd(A)
    A = np.asarray(A)
    if A.size == 0:
        raise ValueError("matrix must be nonempty")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return SvdResult(U, s, Vh.conj().T)


def svd_truncated(A: MatrixLike, cutoff: float) -> SvdResult:
    """Thin SVD keeping only the singular values strictly above ``cutoff``.

    Same triple as :func:`svd` with the trailing components dropped.  For
    quaternion matrices this skips validating (and, when tiny singular
    values cluster, re-extracting) the discarded tail, which is what the
    trace-norm prox wants: it zeroes that tail regardless.
    """
    if isinstance(A, QMatrix):
        return _qsvd(A, cutoff=cutoff)
    full = svd(A)
    k = int(np.count_nonzero(full.sigma > cutoff))
    return SvdResult(full.U[:, :k], full.sigma[:k], full.V[:, :k])


def _extract_cols(W: np.ndarray, m: int) -> QMatrix:
    """Pull complex 2m-vectors [w1; w2] back to quaternion vectors w1 - conj(w2)*j.

    If w is a singular vector of the complex adjoint, the pulled-back
    vector is the matching quaternion singular vector up to a unit
    quaternion factor on the right, with its norm preserved.
    """
    return QMatrix(W[:m], -W[m:].conj())


def _hcat(A: QMatrix, B: QMatrix) -> QMatrix:
    return QMatrix(np.concatenate([A.x, B.x], axis=1),
                   np.concatenate([A.y, B.y], axis=1))


def _col_norms(W: QMatrix) -> np.ndarray:
    return np.sqrt((np.abs(W.x) ** 2 + np.abs(W.y) ** 2).sum(axis=0))


def _orth_residual(B: QMatrix, W: QMatrix) -> QMatrix:
    """Components of the columns of W orthogonal to the orthonormal block B."""
    if B.shape[1] == 0:
        return W
    return W - B @ (B.H @ W)


def _pick_orthonormal(basis: QMatrix, candidates: QMatrix, count: int) -> QMatrix:
    """Greedy pivoted Gram-Schmidt: ``count`` new columns orthonormal to ``basis``.

    At every step the candidate column with the largest residual norm is
    orthonormalized in (with one re-orthogonalization pass), which is
    robust when candidates are nearly parallel, as the duplicated
    singular-subspace vectors of the complex adjoint are.  Falls back to
    canonical basis vectors if the pool runs dry.
    """
    dim = candidates.shape[0]
    pool = _orth_residual(basis, candidates)
    added = QMatrix.zeros((dim, 0))
    refreshed = False
    while added.shape[1] < count:
        norms = _col_norms(pool)
        best = int(np.argmax(norms)) if norms.size else -1
        if best < 0 or norms[best] < 1e-6:
            if refreshed:
                raise np.linalg.LinAlgError("orthonormal completion failed")
            refreshed = True
            pool = _orth_residual(_hcat(basis, added), QMatrix.eye(dim))
            continue
        keep = np.arange(pool.shape[1]) != best
        w = pool[:, best:best + 1]
        pool = pool[:, keep]
        block = _hcat(basis, added)
        w = _orth_residual(block, _orth_residual(block, w))
        nrm = float(_col_norms(w)[0])
        if nrm < 1e-9:
            continue
        w = w / nrm
        added = _hcat(added, w)
        refreshed = False
        pool = _orth_residual(w, pool)
    return added


def _orthonormality_defect(Q: QMatrix) -> float:
    G = Q.H @ Q
    r = Q.shape[1]
    return math.hypot(np.linalg.norm(G.x - np.eye(r)), np.linalg.norm(G.y))


def _qsvd(A: QMatrix, cutoff: float | None = None) -> SvdResult:
    if A.size == 0:
        raise ValueError("matrix must be nonempty")
    if not A.isfinite():
        raise ValueError("matrix has non-finite entries")
    m, n = A.shape
    C = complex_adjoint(A)
    Uc, s, Vch = np.linalg.svd(C, full_matrices=False)
    Vc = Vch.conj().T
    sigma = 0.5 * (s[0::2] + s[1::2])
    k = len(sigma) if cutoff is None else int(np.count_nonzero(sigma > cutoff))
    if k == 0:
        return SvdResult(QMatrix.zeros((m, 0)), sigma[:0], QMatrix.zeros((n, 0)))

    # Fast path: one representative per pair.  With distinct singular
    # values the pulled-back vectors are already orthonormal and matched;
    # orthonormality plus the pairing relation A V = U Sigma certify the
    # retained block, so degenerate tangles are caught and re-extracted.
    U = _extract_cols(Uc[:, 0:2 * k:2], m)
    V = _extract_cols(Vc[:, 0:2 * k:2], n)
    norm_a = frobenius_norm(A)
    gate = 1e-10 * max(1.0, math.sqrt(k))
    if (_orthonormality_defect(U) <= gate and
            _orthonormality_defect(V) <= gate and
            frobenius_norm(A @ V - U * sigma[:k]) <= gate * max(norm_a, _TINY)):
        result = SvdResult(U, sigma[:k], V)
        if cutoff is not None:
            return result
        if frobenius_norm(A - result.reconstruct()) <= 1e-10 * max(norm_a, _TINY):
            return result

    full = _qsvd_clustered(A, Uc, Vc, sigma)
    if cutoff is None:
        return full
    return SvdResult(full.U[:, :k], full.sigma[:k], full.V[:, :k])


def _qsvd_clustered(A: QMatrix, Uc, Vc, sigma) -> SvdResult:
    """Robust extraction for repeated singular values.

    Clusters of (numerically) equal singular values are handled as whole
    subspaces: all complex singular vectors of the cluster are pulled
    back and a pivoted Gram-Schmidt selects an orthonormal quaternion
    basis.  Left vectors are then re-derived as A v / sigma so the pairs
    stay consistent; vectors for vanishing singular values are filled in
    to orthonormal completion.
    """
    m, n = A.shape
    r = len(sigma)
    smax = float(sigma[0]) if r else 0.0
    ctol = max(smax, _TINY) * 1e-8

    clusters = []
    start = 0
    for i in range(1, r):
        if sigma[i - 1] - sigma[i] > ctol:
            clusters.append((start, i))
            start = i
    clusters.append((start, r))

    V = QMatrix.zeros((n, 0))
    for i0, i1 in clusters:
        cands = _extract_cols(Vc[:, 2 * i0:2 * i1], n)
        V = _hcat(V, _pick_orthonormal(V, cands, i1 - i0))

    lift_tol = smax * 1e-10
    AV = A @ V
    u_candidates = _extract_cols(Uc, m)
    U = QMatrix.zeros((m, 0))
    for i in range(r):
        if sigma[i] > lift_tol:
            u = AV[:, i:i + 1] / sigma[i]
            u = _orth_residual(U, u)  # polish float-level defects
            nrm = float(_col_norms(u)[0])
            if nrm > 0.5:
                U = _hcat(U, u / nrm)
                continue
        U = _hcat(U, _pick_orthonormal(U, u_candidates, 1))
    return SvdResult(U, sigma, V)
