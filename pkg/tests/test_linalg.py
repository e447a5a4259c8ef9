import numpy as np
import pytest

from velakit.errors import NotPositiveDefiniteError, SingularMatrixError, ValidationError
from velakit.linalg import (
    cholesky_factor,
    general_eigenvalues,
    ols_fit,
    symmetric_eigendecomposition,
)


class TestOls:
    def test_intercept_only_is_the_mean(self):
        fit = ols_fit(np.ones((3, 1)), np.array([1.0, 2.0, 3.0]))
        assert fit.coefficients[0, 0] == pytest.approx(2.0)
        assert fit.dof == 2

    def test_exact_fit_in_column_span(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]) / np.sqrt(2)
        b = np.array([[2.0], [-3.0]])
        Y = X @ b
        fit = ols_fit(X, Y)
        assert np.abs(fit.residuals).max() < 1e-12
        assert fit.coefficients == pytest.approx(b)

    def test_duplicated_column_raises(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(10)
        X = np.column_stack([x, x])
        with pytest.raises(SingularMatrixError) as err:
            ols_fit(X, rng.standard_normal(10))
        assert err.value.column == 1

    def test_residuals_orthogonal_to_regressors(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((40, 4))
        Y = rng.standard_normal((40, 2))
        fit = ols_fit(X, Y)
        scale = np.abs(X).max() * np.abs(Y).max()
        assert np.abs(X.T @ fit.residuals).max() <= 1e-8 * scale

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_normal_equations_via_cholesky(self, seed):
        # independent oracle: solve X'X b = X'Y through the Cholesky factor
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((60, 5))
        Y = rng.standard_normal((60, 3))
        fit = ols_fit(X, Y)
        L = cholesky_factor(X.T @ X)
        b = np.linalg.solve(L.T, np.linalg.solve(L, X.T @ Y))
        assert np.abs(fit.coefficients - b).max() < 1e-8

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            ols_fit(np.ones((5, 1)), np.ones((4, 1)))

    def test_nonfinite_rejected(self):
        X = np.ones((5, 1))
        X[2] = np.nan
        with pytest.raises(ValidationError):
            ols_fit(X, np.ones(5))


class TestCholesky:
    def test_identity(self):
        assert cholesky_factor(np.eye(3)) == pytest.approx(np.eye(3))

    def test_diagonal(self):
        L = cholesky_factor([[4.0, 0.0], [0.0, 9.0]])
        assert L == pytest.approx(np.diag([2.0, 3.0]))

    def test_indefinite_raises(self):
        with pytest.raises(NotPositiveDefiniteError):
            cholesky_factor([[1.0, 2.0], [2.0, 1.0]])

    def test_asymmetric_rejected(self):
        with pytest.raises(ValidationError):
            cholesky_factor([[1.0, 0.5], [0.0, 1.0]])

    @pytest.mark.parametrize("n", [2, 5, 12])
    def test_reconstruction(self, n):
        rng = np.random.default_rng(n)
        A = rng.standard_normal((n, n))
        S = A @ A.T + n * np.eye(n)
        L = cholesky_factor(S)
        assert np.tril(L) == pytest.approx(L)
        assert np.abs(L @ L.T - S).max() <= 1e-10 * np.abs(S).max()


class TestSymmetricEigen:
    def test_diagonal(self):
        w, V = symmetric_eigendecomposition(np.diag([3.0, 1.0]))
        assert w == pytest.approx([3.0, 1.0])
        assert np.abs(np.abs(V) - np.eye(2)).max() < 1e-12

    def test_exchange_matrix(self):
        w, _ = symmetric_eigendecomposition([[0.0, 1.0], [1.0, 0.0]])
        assert w == pytest.approx([1.0, -1.0])

    @pytest.mark.parametrize("n", [5, 8, 12])
    def test_reconstruction_oracle(self, n):
        rng = np.random.default_rng(100 + n)
        A = rng.standard_normal((n, n))
        S = (A + A.T) / 2
        w, V = symmetric_eigendecomposition(S)
        assert np.all(np.diff(w) <= 1e-12)
        assert np.abs(V @ np.diag(w) @ V.T - S).max() <= 1e-8 * np.abs(S).max()
        assert np.abs(V.T @ V - np.eye(n)).max() < 1e-8


class TestGeneralEigenvalues:
    def test_scaled_identity(self):
        w = general_eigenvalues(0.5 * np.eye(2))
        assert w == pytest.approx([0.5, 0.5])

    def test_rotation_has_unit_modulus(self):
        w = general_eigenvalues([[0.0, -1.0], [1.0, 0.0]])
        assert np.abs(w) == pytest.approx([1.0, 1.0])
        assert sorted(np.round(w.imag, 12)) == pytest.approx([-1.0, 1.0])

    def test_companion_of_known_ar2(self):
        # roots 0.9 and 0.3: y_t = 1.2 y_{t-1} - 0.27 y_{t-2}
        comp = np.array([[1.2, -0.27], [1.0, 0.0]])
        w = general_eigenvalues(comp)
        assert np.abs(w) == pytest.approx([0.9, 0.3])

    def test_sorted_by_modulus(self):
        w = general_eigenvalues(np.diag([0.1, -3.0, 1.5]))
        assert np.abs(w) == pytest.approx([3.0, 1.5, 0.1])
