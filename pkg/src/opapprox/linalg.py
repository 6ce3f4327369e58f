"""Dense complex linear algebra backbone.

Everything downstream reduces to the primitives here: SVD-based rank
decisions, pseudoinverses, orthonormal subspace bases, range-inclusion
tests, and Hermitian PSD square roots.  All scalars are complex double
precision; real input is embedded.  "Closed range" is automatic in finite
dimensions, so every range/nullspace statement becomes a rank decision
governed by ``rank_rtol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentDims, NotPsd


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared by all operations.

    rank_rtol
        Relative singular-value cutoff: sigma <= rank_rtol * sigma_max is
        treated as zero.  A matrix of all zeros has rank 0.
    residual_rtol
        Relative residual acceptance for equation-solvability tests.
    """

    rank_rtol: float = 1e-10
    residual_rtol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "residual_rtol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce input to a 2-d complex128 array with finite entries.

    Scalars become 1x1 matrices, 1-d arrays become rows (numpy convention).
    """
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2:
        raise InconsistentDims(f"{name} must be at most 2-dimensional, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(x, name: str = "vector") -> np.ndarray:
    """Coerce input to a 1-d complex128 array with finite entries."""
    v = np.asarray(x, dtype=complex).ravel()
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace held as an orthonormal-column basis.

    ``basis`` has shape (ambient_dim, dim); zero columns encode the trivial
    subspace.  Orthonormality is checked on construction.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis, "subspace basis")
        object.__setattr__(self, "basis", b)
        n, k = b.shape
        if k > n:
            raise InconsistentDims(f"subspace basis has {k} columns in ambient dimension {n}")
        if k:
            gram = b.conj().T @ b
            if np.linalg.norm(gram - np.eye(k)) > 1e-8 * max(1.0, np.linalg.norm(gram)):
                raise ValueError("subspace basis columns are not orthonormal")

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the subspace."""
        return self.basis @ self.basis.conj().T

    def contains(self, x, tol: Tolerances = DEFAULT_TOL) -> bool:
        v = as_vector(x)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            return True
        return np.linalg.norm(self.projector() @ v - v) <= tol.residual_rtol * nrm


def trivial_subspace(ambient_dim: int) -> Subspace:
    return Subspace(np.zeros((ambient_dim, 0), dtype=complex))


def full_subspace(ambient_dim: int) -> Subspace:
    return Subspace(np.eye(ambient_dim, dtype=complex))


def svd_with_rank(M, tol: Tolerances = DEFAULT_TOL):
    """Full SVD plus the numerical rank under ``tol.rank_rtol``.

    Returns (U, s, Vh, rank) with U, Vh square (full_matrices=True).
    """
    M = as_matrix(M)
    U, s, Vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.count_nonzero(s > tol.rank_rtol * smax)) if smax > 0.0 else 0
    return U, s, Vh, rank


def matrix_rank(M, tol: Tolerances = DEFAULT_TOL) -> int:
    return svd_with_rank(M, tol)[3]


def pinv(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse, inverting only singular values above the cutoff."""
    U, s, Vh, rank = svd_with_rank(M, tol)
    inv = np.zeros_like(s)
    if rank:
        inv[:rank] = 1.0 / s[:rank]
    k = s.size
    return (Vh[:k, :].conj().T * inv) @ U[:, :k].conj().T


def range_basis(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the range (column space) of M."""
    U, _, _, rank = svd_with_rank(M, tol)
    return Subspace(U[:, :rank])


def null_basis(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the nullspace of M; dim range + dim null = cols."""
    M = as_matrix(M)
    if M.shape[0] == 0:
        return full_subspace(M.shape[1])
    _, _, Vh, rank = svd_with_rank(M, tol)
    return Subspace(Vh[rank:, :].conj().T)


def range_included(B, A, tol: Tolerances = DEFAULT_TOL):
    """Test R(B) subseteq R(A); when it holds, return the factor C with AC = B.

    The test accepts iff ||(I - A A^+) B||_F <= residual_rtol * max(||B||_F, 1).
    Equivalent to the solvability of AX = B (Douglas factorization at matrix
    scale); C = A^+ B is the minimal-Frobenius-norm factor.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise InconsistentDims(f"codomain mismatch: A has {A.shape[0]} rows, B has {B.shape[0]}")
    C = pinv(A, tol) @ B
    residual = np.linalg.norm(B - A @ C)
    if residual <= tol.residual_rtol * max(np.linalg.norm(B), 1.0):
        return True, C
    return False, None


def hermitize(M) -> np.ndarray:
    M = as_matrix(M)
    return (M + M.conj().T) / 2.0


def ensure_psd_weight(W, tol: Tolerances = DEFAULT_TOL, name: str = "W") -> np.ndarray:
    """Validate a Hermitian PSD weight and return its Hermitized copy.

    Raises NotPsd when W is visibly non-Hermitian or has an eigenvalue
    below -rank_rtol * lambda_max.
    """
    W = as_matrix(W, name)
    if W.shape[0] != W.shape[1]:
        raise InconsistentDims(f"{name} must be square, got shape {W.shape}")
    dev = np.linalg.norm(W - W.conj().T)
    if dev > tol.residual_rtol * max(np.linalg.norm(W), 1.0):
        raise NotPsd(f"{name} is not Hermitian (asymmetry {dev:.3e})")
    H = hermitize(W)
    eigvals = np.linalg.eigvalsh(H) if H.size else np.zeros(0)
    lam_max = max(float(eigvals.max()), 0.0) if eigvals.size else 0.0
    if eigvals.size and float(eigvals.min()) < -tol.rank_rtol * lam_max:
        raise NotPsd(
            f"{name} has eigenvalue {eigvals.min():.3e} below -rank_rtol*lambda_max "
            f"= {-tol.rank_rtol * lam_max:.3e}"
        )
    return H


def psd_sqrt(W, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues below -rank_rtol*lambda_max raise NotPsd; eigenvalues
    within the rank cutoff of zero (either sign) are clamped to zero before
    the root, so the root's rank matches the rank decision on W and the
    clamp is idempotent.
    """
    H = ensure_psd_weight(W, tol)
    if H.shape[0] == 0:
        return H.copy()
    w, Q = np.linalg.eigh(H)
    lam_max = max(float(w.max()), 0.0)
    w = np.where(w > tol.rank_rtol * lam_max, w, 0.0)
    return hermitize((Q * np.sqrt(w)) @ Q.conj().T)


def subspace_sum_rank(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> int:
    """dim(A + B) via the rank of the stacked bases."""
    if a.ambient_dim != b.ambient_dim:
        raise InconsistentDims("subspaces live in different ambient dimensions")
    return matrix_rank(np.hstack([a.basis, b.basis]), tol)


def intersection(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of A intersect B."""
    if a.ambient_dim != b.ambient_dim:
        raise InconsistentDims("subspaces live in different ambient dimensions")
    if a.dim == 0 or b.dim == 0:
        return trivial_subspace(a.ambient_dim)
    # v = A x = B y  <=>  (x, y) in null([A | -B]); read v off the A block.
    coeffs = null_basis(np.hstack([a.basis, -b.basis]), tol)
    if coeffs.dim == 0:
        return trivial_subspace(a.ambient_dim)
    return range_basis(a.basis @ coeffs.basis[: a.dim, :], tol)


def complement_within(outer: Subspace, inner: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthocomplement of ``inner`` inside ``outer`` (inner must sit in outer)."""
    if inner.dim == 0:
        return outer
    # coordinates of inner in the outer basis; orthonormal because inner <= outer
    C = outer.basis.conj().T @ inner.basis
    D = null_basis(C.conj().T, tol)
    return Subspace(outer.basis @ D.basis)


def orthogonal_complement(s: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthocomplement of a subspace in its ambient space."""
    if s.dim == 0:
        return full_subspace(s.ambient_dim)
    return null_basis(s.basis.conj().T, tol)
