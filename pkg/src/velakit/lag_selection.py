"""Level-VAR fitting and information-criteria lag selection.

All candidate lags are fit on a common sample (rows aligned to k_max) so
criteria are comparable; ties break toward the smaller lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import ols_fit
from .panel import MacroPanel, VARIABLES

TIE_EPS = 1e-12


def argmin_with_ties(values) -> int:
    """Index of the smallest value; ties within TIE_EPS go to the earliest."""
    best = 0
    for i, v in enumerate(values[1:], start=1):
        if v < values[best] - TIE_EPS:
            best = i
    return best


def max_feasible_lag(T: int, p: int, k_max: int = 8) -> int:
    """Largest k <= k_max whose VAR(k) fit satisfies the sample precondition."""
    best = 0
    for k in range(1, k_max + 1):
        if T - k > p * k + 1 + 2:
            best = k
    if best == 0:
        raise ValidationError(f"sample too short for any VAR fit (T={T}, p={p})")
    return best


def level_matrix(data, vars=None) -> tuple[np.ndarray, tuple[str, ...]]:
    """Accept a LogLevelPanel or a plain (T x p) array; return data + names."""
    if isinstance(data, MacroPanel):
        names = tuple(vars) if vars is not None else VARIABLES
        return data.matrix(names), names
    z = np.asarray(data, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    if vars is not None:
        names = tuple(vars)
        if len(names) != z.shape[1]:
            raise ValidationError(
                f"{len(names)} names given for {z.shape[1]} columns"
            )
    else:
        names = tuple(f"y{i}" for i in range(z.shape[1]))
    if not np.all(np.isfinite(z)):
        raise ValidationError("level data contains non-finite values")
    return z, names


@dataclass(frozen=True)
class VarFit:
    """Per-equation OLS of z_t on (1, z_{t-1}, ..., z_{t-k}), stacked.

    coefficients: ((1 + p*k) x p); sigma_ml uses the T^-1 normalization so
    criteria are comparable across lags.
    """

    vars: tuple[str, ...]
    k: int
    coefficients: np.ndarray
    residuals: np.ndarray
    sigma_ml: np.ndarray
    T_eff: int
    n_params: int

    @property
    def intercept(self) -> np.ndarray:
        return self.coefficients[0]

    def lag_matrix(self, i: int) -> np.ndarray:
        """Coefficient matrix A_i mapping z_{t-i} into z_t (p x p)."""
        p = len(self.vars)
        block = self.coefficients[1 + (i - 1) * p : 1 + i * p]
        return block.T


def fit_var(data, vars=None, k: int = 1, presample: int | None = None) -> VarFit:
    """Fit a VAR(k) in levels by per-equation OLS.

    presample reserves that many initial rows instead of k, letting
    select_lag align every candidate on a common sample.
    """
    z, names = level_matrix(data, vars)
    T, p = z.shape
    if k < 1:
        raise ValidationError(f"lag order must be >= 1, got {k}")
    skip = k if presample is None else presample
    if skip < k:
        raise ValidationError(f"presample {skip} smaller than lag order {k}")
    T_eff = T - skip
    n_regressors = 1 + p * k
    if T_eff <= n_regressors + 2:
        raise ValidationError(
            f"insufficient sample: T_eff={T_eff} for {n_regressors} regressors "
            f"(T={T}, p={p}, k={k})"
        )
    rows = np.arange(skip, T)
    X = np.ones((T_eff, n_regressors))
    for i in range(1, k + 1):
        X[:, 1 + (i - 1) * p : 1 + i * p] = z[rows - i]
    Y = z[rows]
    fit = ols_fit(X, Y)
    sigma_ml = (fit.residuals.T @ fit.residuals) / T_eff
    return VarFit(
        vars=names,
        k=k,
        coefficients=fit.coefficients,
        residuals=fit.residuals,
        sigma_ml=sigma_ml,
        T_eff=T_eff,
        n_params=p * n_regressors,
    )


def information_criteria(fit, T: int, n_params: int) -> tuple[float, float, float, float]:
    """(loglik, AIC, BIC, HQIC) from a fit's residuals.

    loglik = -(T/2) * (p ln 2pi + ln det Sigma_ml + p) with Sigma_ml =
    eps'eps / T; criteria are per-observation: (-2 loglik + penalty) / T.
    """
    resid = np.asarray(fit.residuals, dtype=float)
    if resid.ndim == 1:
        resid = resid[:, None]
    p = resid.shape[1]
    sigma = (resid.T @ resid) / T
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise ValidationError("residual covariance is singular")
    loglik = -(T / 2.0) * (p * math.log(2.0 * math.pi) + logdet + p)
    aic = (-2.0 * loglik + 2.0 * n_params) / T
    bic = (-2.0 * loglik + n_params * math.log(T)) / T
    hqic = (-2.0 * loglik + 2.0 * n_params * math.log(math.log(T))) / T
    return loglik, aic, bic, hqic


@dataclass(frozen=True)
class LagSelectionTable:
    vars: tuple[str, ...]
    sample_size: int
    rows: tuple[dict, ...]  # one per k: {k, loglik, aic, bic, hqic}
    chosen_lag: dict[str, int]  # per criterion


def select_lag(data, vars=None, k_max: int = 4) -> LagSelectionTable:
    """Score VAR(1..k_max) on the common sample and pick per-criterion argmins."""
    if k_max < 1:
        raise ValidationError(f"k_max must be >= 1, got {k_max}")
    z, names = level_matrix(data, vars)
    rows = []
    prev_ll = -math.inf
    for k in range(1, k_max + 1):
        try:
            fit = fit_var(z, names, k=k, presample=k_max)
        except ValidationError as exc:
            raise ValidationError(f"lag {k}: {exc}") from exc
        ll, aic, bic, hqic = information_criteria(fit, fit.T_eff, fit.n_params)
        if ll < prev_ll - 1e-8 * max(1.0, abs(prev_ll)):
            raise ValidationError(
                f"log-likelihood decreased from lag {k - 1} to {k}; "
                "common-sample alignment violated"
            )
        prev_ll = max(prev_ll, ll)
        rows.append({"k": k, "loglik": ll, "aic": aic, "bic": bic, "hqic": hqic})

    chosen = {
        crit: rows[argmin_with_ties([row[crit] for row in rows])]["k"]
        for crit in ("aic", "bic", "hqic")
    }
    return LagSelectionTable(
        vars=names,
        sample_size=z.shape[0] - k_max,
        rows=tuple(rows),
        chosen_lag=chosen,
    )
