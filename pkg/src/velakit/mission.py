"""Mars-station cost sharing: budget pooling, cost rollup, apportionment.

Launches go to the super-heavy providers and station modules to every
agency, both by largest-remainder apportionment (the simplest method whose
integer allocations sum exactly to the configured totals). Module weights
multiply the ESA budget by a configurable bias, reflecting its larger
post-launch headroom. Launch costs deliberately carry no reusability
discount.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import floor
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class AgencyBudget:
    agency_id: str
    annual_budget_busd: float
    contribution_fraction: float
    provides_super_heavy: bool = False

    def __post_init__(self):
        if self.annual_budget_busd <= 0:
            raise ValidationError(f"{self.agency_id}: annual budget must be positive")
        if not 0.0 < self.contribution_fraction <= 1.0:
            raise ValidationError(
                f"{self.agency_id}: contribution fraction must be in (0, 1]"
            )


@dataclass(frozen=True)
class MissionConfig:
    agencies: tuple[AgencyBudget, ...]
    horizon_years: int = 5
    module_unit_cost_busd: float = 0.3
    launch_unit_cost_busd: float = 2.8
    n_modules: int = 7
    n_payload_launches: int = 7
    n_crew_launches: int = 1
    crew_systems_cost_busd: float = 0.5
    esa_module_bias: float = 3.0

    def __post_init__(self):
        if not self.agencies:
            raise ValidationError("agency list is empty")
        seen = set()
        for a in self.agencies:
            if a.agency_id in seen:
                raise ValidationError(f"duplicate agency {a.agency_id}")
            seen.add(a.agency_id)
        if self.horizon_years < 1:
            raise ValidationError("horizon_years must be >= 1")
        if self.esa_module_bias < 1.0:
            raise ValidationError("esa_module_bias must be >= 1")
        if self.n_modules > self.n_payload_launches:
            raise ValidationError(
                f"{self.n_modules} modules exceed the {self.n_payload_launches} "
                "payload launches available to carry them"
            )
        for name in ("module_unit_cost_busd", "launch_unit_cost_busd",
                     "crew_systems_cost_busd"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")
        for name in ("n_modules", "n_payload_launches", "n_crew_launches"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")


def config_from_dict(doc: dict) -> MissionConfig:
    try:
        agencies = tuple(
            AgencyBudget(
                agency_id=a["agency_id"],
                annual_budget_busd=float(a["annual_budget_busd"]),
                contribution_fraction=float(a["contribution_fraction"]),
                provides_super_heavy=bool(a.get("provides_super_heavy", False)),
            )
            for a in doc["agencies"]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad mission config: {exc}") from exc
    kwargs = {}
    for name in ("horizon_years", "n_modules", "n_payload_launches", "n_crew_launches"):
        if name in doc:
            kwargs[name] = int(doc[name])
    for name in ("module_unit_cost_busd", "launch_unit_cost_busd",
                 "crew_systems_cost_busd", "esa_module_bias"):
        if name in doc:
            kwargs[name] = float(doc[name])
    extra = set(doc) - {"agencies"} - set(kwargs)
    if extra:
        raise ValidationError(f"unknown mission config key(s): {sorted(extra)}")
    return MissionConfig(agencies=agencies, **kwargs)


def load_config(path: str | Path) -> MissionConfig:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"no such config file: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return config_from_dict(doc)


def largest_remainder(weights: list[float], total: int,
                      tie_order: list[int] | None = None) -> list[int]:
    """Integer apportionment of `total` items proportional to weights.

    Each party receives the floor of its exact quota; the leftovers go to
    the largest fractional remainders. tie_order breaks remainder ties
    deterministically (lower value wins first).
    """
    if total < 0:
        raise ValidationError("cannot apportion a negative total")
    if any(w < 0 for w in weights):
        raise ValidationError("weights must be non-negative")
    s = sum(weights)
    if s <= 0:
        raise ValidationError("weights sum to zero")
    quotas = [total * w / s for w in weights]
    alloc = [floor(q) for q in quotas]
    leftovers = total - sum(alloc)
    order = tie_order or list(range(len(weights)))
    by_remainder = sorted(
        range(len(weights)), key=lambda i: (-(quotas[i] - alloc[i]), order[i])
    )
    for i in by_remainder[:leftovers]:
        alloc[i] += 1
    return alloc


def budget_pool(config: MissionConfig) -> float:
    """Total funds committed over the horizon."""
    return sum(
        a.annual_budget_busd * a.contribution_fraction * config.horizon_years
        for a in config.agencies
    )


def total_cost(config: MissionConfig) -> float:
    """Launches + modules + crew systems, in B$."""
    launches = config.n_payload_launches + config.n_crew_launches
    return (
        launches * config.launch_unit_cost_busd
        + config.n_modules * config.module_unit_cost_busd
        + config.crew_systems_cost_busd
    )


@dataclass(frozen=True)
class AgencyShare:
    agency_id: str
    annual_budget_busd: float
    launches: int
    modules: int
    contribution_busd: float


@dataclass(frozen=True)
class MissionPlan:
    agencies: tuple[AgencyShare, ...]
    total_launches: int
    total_modules: int
    cost_busd: float
    pool_busd: float
    margin_fraction: float
    feasible: bool
    config: MissionConfig = field(repr=False, default=None)


def allocate(config: MissionConfig) -> MissionPlan:
    """Apportion launches and modules and split the cost.

    Per-agency contribution = own launches and modules at unit cost plus a
    budget-proportional share of the crew-systems line. An infeasible plan
    (pool below cost) is still returned, flagged, with a negative margin.
    """
    agencies = sorted(config.agencies, key=lambda a: a.agency_id)
    providers = [a for a in agencies if a.provides_super_heavy]
    if not providers:
        raise ValidationError("no launch provider: every agency has provides_super_heavy=false")

    n_launches = config.n_payload_launches + config.n_crew_launches
    launch_alloc = largest_remainder(
        [a.annual_budget_busd for a in providers],
        n_launches,
        tie_order=list(range(len(providers))),
    )
    launches = {a.agency_id: n for a, n in zip(providers, launch_alloc)}

    module_weights = [
        a.annual_budget_busd * (config.esa_module_bias if a.agency_id == "ESA" else 1.0)
        for a in agencies
    ]
    module_alloc = largest_remainder(module_weights, config.n_modules,
                                     tie_order=list(range(len(agencies))))
    modules = {a.agency_id: n for a, n in zip(agencies, module_alloc)}

    budget_sum = sum(a.annual_budget_busd for a in agencies)
    shares = []
    for a in agencies:
        contribution = (
            launches.get(a.agency_id, 0) * config.launch_unit_cost_busd
            + modules[a.agency_id] * config.module_unit_cost_busd
            + config.crew_systems_cost_busd * a.annual_budget_busd / budget_sum
        )
        shares.append(
            AgencyShare(
                agency_id=a.agency_id,
                annual_budget_busd=a.annual_budget_busd,
                launches=launches.get(a.agency_id, 0),
                modules=modules[a.agency_id],
                contribution_busd=contribution,
            )
        )

    pool = budget_pool(config)
    cost = total_cost(config)
    margin = (pool - cost) / pool
    return MissionPlan(
        agencies=tuple(shares),
        total_launches=n_launches,
        total_modules=config.n_modules,
        cost_busd=cost,
        pool_busd=pool,
        margin_fraction=margin,
        feasible=bool(pool >= cost),
        config=config,
    )
