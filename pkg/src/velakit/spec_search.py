"""Specification search over variable subsets and the sign/significance rollup.

Every subset containing the dependent budget variable is crossed with the
candidate lag lengths; a fit is admissible when the trace test selects
exactly one cointegrating relation. Admissible fits aggregate into a
per-variable correlation row where sign conflicts are adjudicated by the
coefficient with the larger |z|.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NoAdmissibleSpecError, ValidationError, VelakitError
from .johansen import RESTRICTED_CONSTANT, concentrate, rank_test
from .vecm import CointegratingEquation, VecmModel, Z_CRIT_5PCT, estimate_vecm, normalize_cointegrating_equation
from .panel import VARIABLES

DEPENDENT = "sb"
DEFAULT_MIN_SIZE = 4


def enumerate_specifications(vars=VARIABLES, min_size: int = DEFAULT_MIN_SIZE) -> list[tuple[str, ...]]:
    """All subsets containing the dependent, size >= min_size, ordered by
    descending size then lexicographically in canonical variable order."""
    vars = tuple(vars)
    if DEPENDENT not in vars:
        raise ValidationError(f"variable set must contain {DEPENDENT!r}")
    if min_size < 2:
        raise ValidationError(f"min_size must be >= 2, got {min_size}")
    others = [v for v in vars if v != DEPENDENT]
    order = {name: i for i, name in enumerate(vars)}
    out: list[tuple[str, ...]] = []
    for size in range(len(vars), min_size - 1, -1):
        group = []
        for combo in combinations(others, size - 1):
            subset = (DEPENDENT, *sorted(combo, key=order.get))
            group.append(subset)
        group.sort(key=lambda s: tuple(order[v] for v in s))
        out.extend(group)
    return out


@dataclass(frozen=True)
class FittedSpec:
    subset: tuple[str, ...]
    k: int
    model: VecmModel
    equation: CointegratingEquation
    criteria: dict[str, float]  # chi2, aic, bic, loglik


@dataclass(frozen=True)
class RejectedSpec:
    subset: tuple[str, ...]
    k: int
    reason: str


@dataclass(frozen=True)
class SpecificationReport:
    agency_id: str
    case: str
    specs: tuple[FittedSpec, ...]
    rejected: tuple[RejectedSpec, ...]
    correlation_row: dict[str, dict] | None = None


def fit_specifications(panel, subsets, k_candidates=(1, 2),
                       case: str = RESTRICTED_CONSTANT,
                       agency_id: str | None = None) -> SpecificationReport:
    """Fit every subset x lag candidate, keeping rank-1 fits.

    Failures (selected rank != 1, singular moment matrices, short samples)
    are recorded with their reason rather than dropped silently.
    """
    agency = agency_id or getattr(panel, "agency_id", "?")
    fitted: list[FittedSpec] = []
    rejected: list[RejectedSpec] = []
    for subset in subsets:
        for k in sorted(k_candidates):
            try:
                m = concentrate(panel, subset, k=k, case=case)
                rt = rank_test(m, case=case)
                if rt.selected_rank != 1:
                    rejected.append(RejectedSpec(subset, k, f"selected rank {rt.selected_rank}"))
                    continue
                model = estimate_vecm(panel, subset, k=k, r=1, case=case)
                equation = normalize_cointegrating_equation(model)
            except VelakitError as exc:
                rejected.append(RejectedSpec(subset, k, f"{type(exc).__name__}: {exc}"))
                continue
            fitted.append(
                FittedSpec(
                    subset=subset,
                    k=k,
                    model=model,
                    equation=equation,
                    criteria={
                        "chi2": model.wald_chi2,
                        "aic": model.aic,
                        "bic": model.bic,
                        "loglik": model.loglik,
                    },
                )
            )
    if not fitted:
        raise NoAdmissibleSpecError(
            f"no admissible specification for {agency}: every candidate was "
            f"rejected ({len(rejected)} attempts)"
        )
    return SpecificationReport(
        agency_id=agency, case=case, specs=tuple(fitted), rejected=tuple(rejected)
    )


def build_correlation_table(report: SpecificationReport) -> dict[str, dict]:
    """Per-variable sign/significance summary across admissible specs.

    When specs disagree in sign, the coefficient with the larger |z| wins
    and the row is flagged as conflicting. Variables absent from every
    admissible spec get sign 'none'.
    """
    if not report.specs:
        raise ValidationError("report has no admissible specifications")
    independents = tuple(v for v in VARIABLES if v != DEPENDENT)
    table: dict[str, dict] = {}
    for var in independents:
        entries = []  # (abs_z, coefficient, z, spec_index)
        signs = set()
        for i, spec in enumerate(report.specs):
            if var not in spec.subset:
                continue
            coef = spec.equation.coefficients[var]
            z = spec.equation.z_scores.get(var)
            if z is None or not np.isfinite(z):
                continue
            entries.append((abs(z), coef, z, i))
            if coef != 0.0:
                signs.add(coef > 0)
        if not entries:
            table[var] = {
                "sign": "none",
                "significant_at_5pct": False,
                "source_spec": None,
                "conflict": False,
            }
            continue
        entries.sort(key=lambda e: (-e[0], e[3]))
        abs_z, coef, _, idx = entries[0]
        table[var] = {
            "sign": "+" if coef > 0 else ("-" if coef < 0 else "none"),
            "significant_at_5pct": bool(abs_z >= Z_CRIT_5PCT),
            "source_spec": idx,
            "conflict": len(signs) > 1,
        }
    return table


def run_specification_search(panel, min_size: int = DEFAULT_MIN_SIZE,
                             k_candidates=(1, 2),
                             case: str = RESTRICTED_CONSTANT) -> SpecificationReport:
    """enumerate -> fit -> aggregate, returning a complete report."""
    subsets = enumerate_specifications(VARIABLES, min_size=min_size)
    report = fit_specifications(panel, subsets, k_candidates=k_candidates, case=case)
    row = build_correlation_table(report)
    return SpecificationReport(
        agency_id=report.agency_id,
        case=report.case,
        specs=report.specs,
        rejected=report.rejected,
        correlation_row=row,
    )
