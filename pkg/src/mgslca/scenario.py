"""Scenario overrides, batch sweeps and cross-chemistry comparison."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence, Union

from .battery import ROLE_GROUPS, CellDesign, PackDesign, per_wh_bom
from .errors import LcaError
from .inventory import INPUT, Exchange, InventoryDatabase, Process
from .lcia import ContributionTable, ImpactMethod, ImpactResult, characterize, contributions
from .solver import compute_inventory


@dataclass(frozen=True)
class ReplaceProvider:
    """Send every input of ``flow`` to the reference product of ``process``."""

    flow: str
    process: str
    kind = "replace_provider"


@dataclass(frozen=True)
class ScaleExchange:
    process: str
    flow: str
    factor: float
    kind = "scale_exchange"


@dataclass(frozen=True)
class SetComponentMass:
    cell: str
    role: str
    mass: float  # mg
    kind = "set_component_mass"


Override = Union[ReplaceProvider, ScaleExchange, SetComponentMass]


@dataclass(frozen=True)
class Scenario:
    id: str
    overrides: tuple = ()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "overrides", tuple(self.overrides))


def _unresolved(what: str) -> LcaError:
    return LcaError("UNRESOLVED_OVERRIDE", what)


def _replace_provider(db: InventoryDatabase, ov: ReplaceProvider) -> InventoryDatabase:
    old = db.flow_index.get(ov.flow)
    if old is None or not old.is_product:
        raise _unresolved(ov.flow)
    proc = db.process_index.get(ov.process)
    if proc is None:
        raise _unresolved(ov.process)
    new_flow = db.flow(proc.reference_product.flow)
    if new_flow.unit.dimension != old.unit.dimension:
        raise LcaError("UNIT_MISMATCH", f"{new_flow.id} ({new_flow.unit.dimension}) cannot stand in for {old.id}")

    def rewire(ex: Exchange) -> Exchange:
        if ex.flow != old.id or ex.direction != INPUT:
            return ex
        unit = ex.unit
        if unit is None and old.unit != new_flow.unit:
            unit = old.unit
        return replace(ex, flow=new_flow.id, unit=unit)

    procs = []
    for p in db.processes:
        # the new provider never feeds on its own product through the swap
        if p.id == proc.id:
            procs.append(p)
        else:
            procs.append(replace(p, exchanges=tuple(rewire(ex) for ex in p.exchanges)))
    return replace(db, processes=tuple(procs))


def _scale_exchange(db: InventoryDatabase, ov: ScaleExchange) -> InventoryDatabase:
    if not (math.isfinite(ov.factor) and ov.factor >= 0):
        raise LcaError("BAD_OVERRIDE", f"factor {ov.factor!r} must be nonnegative")
    proc = db.process_index.get(ov.process)
    if proc is None:
        raise _unresolved(ov.process)
    if not any(ex.flow == ov.flow for ex in proc.exchanges):
        raise _unresolved(f"{ov.process}/{ov.flow}")
    exchanges = tuple(
        replace(ex, amount=ex.amount * ov.factor) if ex.flow == ov.flow else ex for ex in proc.exchanges
    )
    new_proc: Process = replace(proc, exchanges=exchanges)
    return replace(db, processes=tuple(new_proc if p.id == proc.id else p for p in db.processes))


def apply_scenario(
    db: InventoryDatabase, cells: Sequence[CellDesign], sc: Scenario
) -> tuple[InventoryDatabase, tuple[CellDesign, ...]]:
    """Apply ``sc``'s overrides in order to copies of ``db`` and ``cells``.

    Later overrides see the effect of earlier ones. Inputs are never
    modified.
    """
    cells = tuple(cells)
    for ov in sc.overrides:
        if isinstance(ov, ReplaceProvider):
            db = _replace_provider(db, ov)
        elif isinstance(ov, ScaleExchange):
            db = _scale_exchange(db, ov)
        elif isinstance(ov, SetComponentMass):
            names = [c.name for c in cells]
            if ov.cell not in names:
                raise _unresolved(ov.cell)
            i = names.index(ov.cell)
            if ov.role not in cells[i].roles:
                raise _unresolved(f"{ov.cell}/{ov.role}")
            cells = cells[:i] + (cells[i].with_mass(ov.role, ov.mass),) + cells[i + 1 :]
        else:
            raise LcaError("BAD_OVERRIDE", f"unknown override {ov!r}")
    return db, cells


def battery_impacts(db: InventoryDatabase, cell: CellDesign, pack: PackDesign, method: ImpactMethod) -> ImpactResult:
    """Impacts per Wh of pack capacity."""
    return characterize(compute_inventory(db, per_wh_bom(cell, pack)), method)


GROUP_ORDER = (
    "anode",
    "cathode",
    "separator",
    "electrolyte",
    "housing",
    "cell manufacture energy",
    "pack housing",
    "BMS",
)


def battery_grouping(db: InventoryDatabase, cell: CellDesign, pack: PackDesign) -> dict[str, list[str]]:
    """Foreground process groups for a cell in a pack, keyed by component label."""
    wanted: dict[str, list[str]] = {}
    flows = [(ROLE_GROUPS[c.role], c.material) for c in cell.components]
    flows += [
        ("cell manufacture energy", pack.cell_manufacture_flow),
        ("pack housing", pack.housing_material),
        ("BMS", pack.bms_material),
    ]
    for label, flow in flows:
        if not flow:
            continue
        proc = db.provider_of(flow)
        if proc is None:
            raise LcaError("UNKNOWN_DEMAND_FLOW", f"no provider for {flow!r}")
        members = wanted.setdefault(label, [])
        if proc not in members:
            members.append(proc)
    return {k: wanted[k] for k in GROUP_ORDER if k in wanted}


def battery_contributions(
    db: InventoryDatabase,
    cell: CellDesign,
    pack: PackDesign,
    method: ImpactMethod,
    grouping: Optional[Mapping[str, Sequence[str]]] = None,
) -> ContributionTable:
    if grouping is None:
        grouping = battery_grouping(db, cell, pack)
    return contributions(db, per_wh_bom(cell, pack), method, grouping)


@dataclass(frozen=True)
class SweepResult:
    scenario: str
    cell: str
    impacts: ImpactResult


def run_sweep(
    db: InventoryDatabase,
    cells: Sequence[CellDesign],
    cell_name: str,
    pack: PackDesign,
    method: ImpactMethod,
    scenarios: Sequence[Scenario],
    jobs: int = 1,
) -> list[SweepResult]:
    """Per-Wh impacts of one cell under each scenario, ordered by scenario id."""

    def one(sc: Scenario) -> SweepResult:
        sdb, scells = apply_scenario(db, cells, sc)
        cell = next((c for c in scells if c.name == cell_name), None)
        if cell is None:
            raise LcaError("UNKNOWN_CELL", cell_name)
        return SweepResult(sc.id, cell_name, battery_impacts(sdb, cell, pack, method))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, scenarios))
    else:
        results = [one(sc) for sc in scenarios]
    return sorted(results, key=lambda r: r.scenario)


@dataclass(frozen=True)
class ComparisonEntry:
    name: str
    original_density: float
    adjusted_density: float
    per_wh_impacts: Optional[ImpactResult] = None

    def __post_init__(self):
        for v in (self.original_density, self.adjusted_density):
            if not (math.isfinite(v) and v > 0):
                raise LcaError("BAD_DENSITY", f"{self.name}: densities must be positive")


@dataclass(frozen=True)
class ComparisonRow:
    system: str
    category: str
    value: float
    unit: str
    ratio_to_best: float
    rank: int
    tie: bool


def compare(entries: Sequence[ComparisonEntry], method: ImpactMethod) -> list[ComparisonRow]:
    """Rank systems per category by per-Wh impact (lowest is best).

    Equal values are flagged as ties and ranked by name.
    """
    for e in entries:
        if e.per_wh_impacts is not None and e.per_wh_impacts.method_id != method.id:
            raise LcaError(
                "METHOD_MISMATCH",
                f"{e.name} was computed with {e.per_wh_impacts.method_id!r}, not {method.id!r}",
            )
    rows: list[ComparisonRow] = []
    for cat in method.categories:
        vals = [
            (e.per_wh_impacts.values[cat.id], e.name)
            for e in entries
            if e.per_wh_impacts is not None and cat.id in e.per_wh_impacts.values
        ]
        if not vals:
            continue
        vals.sort()
        best = vals[0][0]
        counts: dict[float, int] = {}
        for v, _ in vals:
            counts[v] = counts.get(v, 0) + 1
        for rank, (v, name) in enumerate(vals, start=1):
            if best == 0.0:
                ratio = 1.0 if v == 0.0 else math.inf
            else:
                ratio = v / best
            rows.append(ComparisonRow(name, cat.id, v, cat.unit, ratio, rank, counts[v] > 1))
    return rows
