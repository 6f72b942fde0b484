"""Impact characterization and foreground contribution (hot-spot) analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import LcaError
from .inventory import InventoryDatabase
from .solver import (
    DemandVector,
    InventoryVector,
    assemble,
    demand_array,
    inventory,
    solve_array,
    solve_scaling,
)


@dataclass(frozen=True)
class ImpactCategory:
    id: str
    name: str
    unit: str
    factors: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "factors", dict(self.factors))
        bad = [k for k, v in self.factors.items() if not math.isfinite(v)]
        if bad:
            raise LcaError("BAD_FACTOR", f"{self.id}: non-finite factor for {bad[0]!r}")


@dataclass(frozen=True)
class ImpactMethod:
    id: str
    categories: tuple[ImpactCategory, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        ids = [c.id for c in self.categories]
        if len(set(ids)) != len(ids):
            raise LcaError("DUPLICATE_CATEGORY", f"method {self.id!r} repeats a category id")

    def category(self, category_id: str) -> ImpactCategory:
        for c in self.categories:
            if c.id == category_id:
                return c
        raise LcaError("UNKNOWN_CATEGORY", category_id)


@dataclass(frozen=True)
class ImpactResult:
    method_id: str
    values: Mapping[str, float]
    coverage: Mapping[str, float]
    units: Mapping[str, str] = field(default_factory=dict)

    def __getitem__(self, category_id: str) -> float:
        return self.values[category_id]


def category_value(g: InventoryVector, category: ImpactCategory) -> float:
    factors = category.factors
    return math.fsum(factors[k] * v for k, v in zip(g.flow_order, g.values.tolist()) if k in factors)


def category_coverage(g: InventoryVector, category: ImpactCategory) -> float:
    present = [k for k, v in zip(g.flow_order, g.values.tolist()) if v != 0.0]
    if not present:
        return 1.0
    return sum(1 for k in present if k in category.factors) / len(present)


def characterize(g: InventoryVector, method: ImpactMethod) -> ImpactResult:
    """Weight inventory amounts by each category's factors.

    Flows without a factor count as zero; ``coverage`` reports, per
    category, the fraction of nonzero inventory flows that had one.
    """
    return ImpactResult(
        method.id,
        {c.id: category_value(g, c) for c in method.categories},
        {c.id: category_coverage(g, c) for c in method.categories},
        {c.id: c.unit for c in method.categories},
    )


def ced(g: InventoryVector, energy_factors: ImpactCategory) -> float:
    """Cumulative energy demand: one energy-valued category."""
    return category_value(g, energy_factors)


@dataclass(frozen=True)
class ContributionRow:
    category: str
    group: str
    value: float
    share: float


@dataclass(frozen=True)
class ContributionTable:
    method_id: str
    groups: tuple[str, ...]
    categories: tuple[str, ...]
    rows: tuple[ContributionRow, ...]
    totals: Mapping[str, float]
    zero_total: Mapping[str, bool]
    units: Mapping[str, str] = field(default_factory=dict)

    def row(self, category: str, group: str) -> ContributionRow:
        for r in self.rows:
            if r.category == category and r.group == group:
                return r
        raise KeyError((category, group))

    def shares(self, category: str) -> dict[str, float]:
        return {r.group: r.share for r in self.rows if r.category == category}

    def hot_spot(self, category: str) -> str:
        ranked = sorted((r for r in self.rows if r.category == category), key=lambda r: (-r.value, r.group))
        return ranked[0].group


def contributions(
    db: InventoryDatabase,
    f: DemandVector,
    method: ImpactMethod,
    grouping: Mapping[str, Sequence[str]],
) -> ContributionTable:
    """Attribute each category total to groups of foreground processes.

    A group is charged with the direct emissions of its processes plus the
    background supply chain induced by their inputs. A background process
    serving several groups is split in proportion to what each group asks
    of it, so group values always add up to the category total.
    """
    sys = assemble(db)
    index = {pid: i for i, pid in enumerate(sys.process_order)}
    owner: dict[str, str] = {}
    for label, members in grouping.items():
        for pid in members:
            if pid not in index:
                raise LcaError("UNKNOWN_PROCESS", f"group {label!r} lists unknown process {pid!r}")
            if pid in owner and owner[pid] != label:
                raise LcaError("OVERLAPPING_GROUPS", f"{pid!r} is in {owner[pid]!r} and {label!r}")
            owner[pid] = label

    fvec = demand_array(sys, f)
    for i in np.nonzero(fvec)[0].tolist():
        if sys.process_order[i] not in owner:
            raise LcaError("UNGROUPED_FOREGROUND", f"demanded process {sys.process_order[i]!r} is in no group")

    s = solve_scaling(sys, f).values
    fg = np.array(sorted(index[p] for p in owner), dtype=int)
    bg = np.array([i for i in range(sys.n) if sys.process_order[i] not in owner], dtype=int)
    A = sys.A
    A_bg_bg = A[bg][:, bg].tocsr() if bg.size else None
    A_bg_fg = A[bg][:, fg].tocsr() if bg.size else None
    B_fg = sys.B[:, fg].tocsr()
    B_bg = sys.B[:, bg].tocsr() if bg.size else None
    fg_pos = {int(i): k for k, i in enumerate(fg.tolist())}

    group_inv: dict[str, InventoryVector] = {}
    for label, members in grouping.items():
        s_fg = np.zeros(fg.size)
        for pid in members:
            k = fg_pos[index[pid]]
            s_fg[k] = s[index[pid]]
        g_vals = B_fg @ s_fg
        if bg.size:
            induced = -(A_bg_fg @ s_fg)
            if np.any(induced != 0.0):
                x = solve_array(A_bg_bg, induced)
                g_vals = g_vals + B_bg @ x
        group_inv[label] = InventoryVector(sys.flow_order, g_vals)

    total = characterize(inventory(sys, solve_scaling(sys, f)), method)
    labels = tuple(grouping)
    rows = []
    zero_total = {}
    for cat in method.categories:
        tot = total.values[cat.id]
        zero_total[cat.id] = tot == 0.0
        for label in labels:
            val = category_value(group_inv[label], cat)
            share = 0.0 if tot == 0.0 else val / tot
            rows.append(ContributionRow(cat.id, label, val, share))
    return ContributionTable(
        method.id,
        labels,
        tuple(c.id for c in method.categories),
        tuple(rows),
        dict(total.values),
        zero_total,
        {c.id: c.unit for c in method.categories},
    )
