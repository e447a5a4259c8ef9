"""Dense regression and eigen kernels used by every estimator.

All kernels operate on float64 row-major arrays, are dimension-capped at
MAX_DIM, and surface rank problems as typed errors instead of silently
pseudo-inverting. OLS runs through a QR factorization; the normal-equations
route via `cholesky_factor` is kept independent so tests can use it as an
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError, NumericalError, SingularMatrixError, ValidationError

MAX_DIM = 64
PIVOT_RTOL = 1e-10
SYMMETRY_RTOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert input to a finite 2-D float64 array."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.shape[0] > 10**6 or m.shape[1] > MAX_DIM:
        raise ValidationError(f"{name} exceeds the supported size (cols capped at {MAX_DIM})")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(m)


@dataclass(frozen=True)
class OlsFit:
    """Least-squares fit of Y on X.

    coefficients has shape (regressors, responses); residual_covariance is
    the dof-normalized cross-product eps'eps / dof with dof = rows - cols(X).
    """

    coefficients: np.ndarray
    residuals: np.ndarray
    residual_covariance: np.ndarray
    dof: int


def ols_fit(X, Y) -> OlsFit:
    """Multi-response OLS via QR, with explicit rank-deficiency detection.

    Raises SingularMatrixError naming the offending column when a diagonal
    of R falls below PIVOT_RTOL relative to the largest one.
    """
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    n, k = X.shape
    if Y.shape[0] != n:
        raise ValidationError(f"X has {n} rows but Y has {Y.shape[0]}")
    if n <= k:
        raise ValidationError(f"need more rows than regressors (rows={n}, cols={k})")

    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    scale = diag.max() if diag.size else 0.0
    if scale == 0.0:
        raise SingularMatrixError("all regressors are zero", column=0)
    bad = np.nonzero(diag < PIVOT_RTOL * scale)[0]
    if bad.size:
        j = int(bad[0])
        raise SingularMatrixError(
            f"regressor matrix is rank deficient at column {j} "
            f"(pivot {diag[j]:.3e} vs scale {scale:.3e})",
            column=j,
        )
    coef = np.linalg.solve(R, Q.T @ Y)
    resid = Y - X @ coef
    dof = n - k
    cov = (resid.T @ resid) / dof
    return OlsFit(coefficients=coef, residuals=resid, residual_covariance=cov, dof=dof)


def cholesky_factor(S) -> np.ndarray:
    """Lower-triangular L with L L' = S for symmetric positive-definite S.

    Hand-rolled so the failing pivot index is reported; used both for
    whitening the cointegration eigenproblem and as the independent
    normal-equations oracle for ols_fit.
    """
    S = as_matrix(S, "S")
    n, m = S.shape
    if n != m:
        raise ValidationError(f"S must be square, got {n}x{m}")
    scale = np.abs(S).max() if n else 0.0
    if n and np.abs(S - S.T).max() > SYMMETRY_RTOL * max(scale, 1.0):
        raise ValidationError("S is not symmetric within tolerance")

    L = np.zeros_like(S)
    for j in range(n):
        pivot = S[j, j] - L[j, :j] @ L[j, :j]
        # compare each pivot to its own diagonal entry so badly scaled but
        # well-conditioned matrices (ones column next to tiny moments) pass
        if S[j, j] <= 0.0 or pivot <= PIVOT_RTOL * S[j, j]:
            raise NotPositiveDefiniteError(
                f"non-positive-definite pivot {pivot:.3e} at index {j}"
            )
        L[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (S[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def symmetric_eigendecomposition(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of symmetric S."""
    S = as_matrix(S, "S")
    n, m = S.shape
    if n != m:
        raise ValidationError(f"S must be square, got {n}x{m}")
    scale = np.abs(S).max() if n else 0.0
    if n and np.abs(S - S.T).max() > SYMMETRY_RTOL * max(scale, 1.0):
        raise ValidationError("S is not symmetric within tolerance")
    try:
        w, V = np.linalg.eigh((S + S.T) / 2.0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"symmetric eigendecomposition failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def general_eigenvalues(A) -> np.ndarray:
    """Complex eigenvalues of a general square matrix, sorted by descending modulus."""
    A = as_matrix(A, "A")
    n, m = A.shape
    if n != m:
        raise ValidationError(f"A must be square, got {n}x{m}")
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigenvalue computation failed: {exc}") from exc
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    return w[order]


def solve_lower(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve L X = B for lower-triangular L."""
    return np.linalg.solve(L, B)


def solve_upper(U: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve U X = B for upper-triangular U."""
    return np.linalg.solve(U, B)


def pd_inverse(S: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via its Cholesky factor."""
    L = cholesky_factor(S)
    eye = np.eye(S.shape[0])
    return solve_upper(L.T, solve_lower(L, eye))
