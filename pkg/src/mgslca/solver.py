"""Matrix life-cycle inventory: assemble A and B, solve A s = f, g = B s.

The solve walks the strongly connected components of the technosphere in
dependency order. Acyclic chains therefore reduce to exact back-substitution
(one division per process), and only genuine loops hit a dense block solve,
which is followed by residual refinement.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from graphlib import TopologicalSorter
from typing import Mapping

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .errors import LcaError
from .inventory import INPUT, InventoryDatabase, validate_database

RESIDUAL_TOL = 1e-9
SINGULAR_TOL = 1e-6
REFINE_STEPS = 3


@dataclass(frozen=True)
class DemandVector:
    """Final demand, keyed by product flow id, in the flow's base unit."""

    entries: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in self.entries.values()):
            raise LcaError("INVALID_DEMAND", "demand amounts must be finite")
        if not any(v != 0 for v in self.entries.values()):
            raise LcaError("INVALID_DEMAND", "demand needs at least one nonzero entry")

    def scaled(self, factor: float) -> "DemandVector":
        return DemandVector({k: v * factor for k, v in self.entries.items()})


@dataclass(frozen=True, eq=False)
class TechnosphereSystem:
    process_order: tuple[str, ...]
    product_order: tuple[str, ...]
    flow_order: tuple[str, ...]
    A: sparse.csr_matrix
    B: sparse.csr_matrix
    # base units per unit of each product row, to express demands row-wise
    product_scale: np.ndarray = None

    @property
    def n(self) -> int:
        return len(self.process_order)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        return self.A.toarray(), self.B.toarray()


@dataclass(frozen=True, eq=False)
class ScalingVector:
    process_order: tuple[str, ...]
    values: np.ndarray

    @property
    def entries(self) -> dict[str, float]:
        return dict(zip(self.process_order, self.values.tolist()))

    def __getitem__(self, process_id: str) -> float:
        return float(self.values[self.process_order.index(process_id)])


@dataclass(frozen=True, eq=False)
class InventoryVector:
    flow_order: tuple[str, ...]
    values: np.ndarray

    @property
    def entries(self) -> dict[str, float]:
        return dict(zip(self.flow_order, self.values.tolist()))

    def get(self, flow_id: str, default: float = 0.0) -> float:
        try:
            return float(self.values[self.flow_order.index(flow_id)])
        except ValueError:
            return default

    def __add__(self, other: "InventoryVector") -> "InventoryVector":
        if self.flow_order == other.flow_order:
            return InventoryVector(self.flow_order, self.values + other.values)
        merged = defaultdict(float)
        for k, v in self.entries.items():
            merged[k] += v
        for k, v in other.entries.items():
            merged[k] += v
        order = tuple(sorted(merged))
        return InventoryVector(order, np.array([merged[k] for k in order], dtype=float))

    def scaled(self, factor: float) -> "InventoryVector":
        return InventoryVector(self.flow_order, self.values * factor)


def inventory_from_dict(entries: Mapping[str, float]) -> InventoryVector:
    order = tuple(sorted(entries))
    return InventoryVector(order, np.array([float(entries[k]) for k in order], dtype=float))


def _base_amount(db: InventoryDatabase, ex) -> float:
    unit = ex.unit if ex.unit is not None else db.flow(ex.flow).unit
    return ex.amount * unit.to_base


def _flow_amount(db: InventoryDatabase, ex) -> float:
    """Exchange amount expressed in its flow's declared unit."""
    flow_unit = db.flow(ex.flow).unit
    if ex.unit is None or ex.unit.to_base == flow_unit.to_base:
        return ex.amount
    return ex.amount * ex.unit.to_base / flow_unit.to_base


def assemble(db: InventoryDatabase) -> TechnosphereSystem:
    """Build the technosphere (A) and biosphere (B) matrices of ``db``.

    Columns follow process ids in sorted order; row ``i`` of A is the
    reference product of process ``i``, counted in that product's own unit.
    Biosphere amounts are converted to base units. Repeated exchanges of one
    flow are summed into a single cell.
    """
    report = validate_database(db)
    if not report.ok:
        head = "; ".join(f"{f.code}({f.process_id or '-'}/{f.flow_id or '-'})" for f in report.findings[:5])
        raise LcaError("INVALID_DATABASE", f"{len(report.findings)} finding(s): {head}")

    procs = sorted(db.processes, key=lambda p: p.id)
    process_order = tuple(p.id for p in procs)
    product_order = tuple(p.reference_product.flow for p in procs)
    row_of = {flow_id: i for i, flow_id in enumerate(product_order)}
    flow_order = tuple(sorted(f.id for f in db.flows if not f.is_product))
    bio_row = {flow_id: i for i, flow_id in enumerate(flow_order)}

    a_cells: dict[tuple[int, int], float] = defaultdict(float)
    b_cells: dict[tuple[int, int], float] = defaultdict(float)
    for j, p in enumerate(procs):
        a_cells[(j, j)] += _flow_amount(db, p.reference_product)
        for ex in p.exchanges:
            if db.flow(ex.flow).is_product:
                # validation guarantees product exchanges are inputs
                a_cells[(row_of[ex.flow], j)] -= _flow_amount(db, ex)
            else:
                b_cells[(bio_row[ex.flow], j)] += _base_amount(db, ex)

    n, m = len(procs), len(flow_order)
    return TechnosphereSystem(
        process_order,
        product_order,
        flow_order,
        _csr(a_cells, (n, n)),
        _csr(b_cells, (m, n)),
        np.array([db.flow(fid).unit.to_base for fid in product_order], dtype=float),
    )


def _csr(cells: dict[tuple[int, int], float], shape: tuple[int, int]) -> sparse.csr_matrix:
    keys = sorted(cells)
    rows = np.array([k[0] for k in keys], dtype=np.int64)
    cols = np.array([k[1] for k in keys], dtype=np.int64)
    vals = np.array([cells[k] for k in keys], dtype=float)
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=shape)
    mat.sort_indices()
    return mat


def demand_array(sys: TechnosphereSystem, f: DemandVector) -> np.ndarray:
    row_of = {flow_id: i for i, flow_id in enumerate(sys.product_order)}
    out = np.zeros(sys.n)
    for flow_id, amount in f.entries.items():
        if flow_id not in row_of:
            raise LcaError("UNKNOWN_DEMAND_FLOW", f"{flow_id!r} is not a reference product")
        out[row_of[flow_id]] += amount
    if sys.product_scale is not None:
        out = out / sys.product_scale
    return out


def _components(A: sparse.csr_matrix) -> list[list[int]]:
    """Strongly connected components of A's dependency graph, dependencies first."""
    n = A.shape[0]
    if n == 0:
        return []
    _, labels = connected_components(A, directed=True, connection="strong")
    members: dict[int, list[int]] = defaultdict(list)
    for i, lab in enumerate(labels.tolist()):
        members[lab].append(i)
    deps: dict[int, set[int]] = {lab: set() for lab in members}
    coo = A.tocoo()
    for i, j in zip(coo.row.tolist(), coo.col.tolist()):
        if labels[i] != labels[j]:
            deps[int(labels[i])].add(int(labels[j]))
    sorter = TopologicalSorter()
    # insertion keyed by smallest member index keeps the order deterministic
    for lab in sorted(members, key=lambda k: members[k][0]):
        sorter.add(lab, *sorted(deps[lab], key=lambda k: members[k][0]))
    return [members[lab] for lab in sorter.static_order()]


def solve_array(A: sparse.csr_matrix, f: np.ndarray) -> np.ndarray:
    """Solve ``A s = f`` component by component; raise SINGULAR_SYSTEM on failure."""
    n = A.shape[0]
    s = np.zeros(n)
    solved = np.zeros(n, dtype=bool)
    indptr, indices, data = A.indptr, A.indices, A.data
    for comp in _components(A):
        if len(comp) == 1:
            i = comp[0]
            diag = 0.0
            acc = f[i]
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                if j == i:
                    diag = data[k]
                elif solved[j]:
                    acc -= data[k] * s[j]
            if diag == 0.0 or not math.isfinite(diag):
                raise LcaError("SINGULAR_SYSTEM", f"zero pivot at row {i}")
            s[i] = acc / diag
        else:
            idx = np.array(comp)
            block = A[idx][:, idx].toarray()
            rhs = f[idx] - A[idx] @ np.where(solved, s, 0.0)
            s[idx] = _dense_refined(block, rhs)
        solved[comp] = True
    if not np.all(np.isfinite(s)):
        raise LcaError("SINGULAR_SYSTEM", "non-finite scaling factors")
    residual = np.max(np.abs(A @ s - f)) if n else 0.0
    if residual > SINGULAR_TOL * max(float(np.max(np.abs(f))) if n else 0.0, 1e-300):
        raise LcaError("SINGULAR_SYSTEM", f"residual {residual:.3g} after refinement")
    return s


def _dense_refined(block: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.linalg.cond(block) > 1.0 / np.finfo(float).eps:
        raise LcaError("SINGULAR_SYSTEM", "technosphere loop is numerically singular")
    try:
        x = np.linalg.solve(block, rhs)
        for _ in range(REFINE_STEPS):
            r = rhs - block @ x
            if np.max(np.abs(r)) <= RESIDUAL_TOL * 1e-3 * max(1.0, float(np.max(np.abs(rhs)))):
                break
            x = x + np.linalg.solve(block, r)
    except np.linalg.LinAlgError as exc:
        raise LcaError("SINGULAR_SYSTEM", str(exc)) from None
    return x


def solve_scaling(sys: TechnosphereSystem, f: DemandVector) -> ScalingVector:
    """Scaling factors ``s`` with ``A s = f``."""
    return ScalingVector(sys.process_order, solve_array(sys.A, demand_array(sys, f)))


def inventory(sys: TechnosphereSystem, s: ScalingVector) -> InventoryVector:
    """Aggregated elementary flows ``g = B s``."""
    return InventoryVector(sys.flow_order, sys.B @ s.values)


def compute_inventory(db: InventoryDatabase, f: DemandVector) -> InventoryVector:
    sys = assemble(db)
    return inventory(sys, solve_scaling(sys, f))


def traverse_oracle(db: InventoryDatabase, f: DemandVector, max_depth: int) -> InventoryVector:
    """Inventory by breadth-first expansion of the supply chain.

    Level 0 holds the demanded processes; each further level supplies the
    product inputs requested by the previous one. Expansion stops after
    ``max_depth`` levels, so loops are truncated rather than solved. Works on
    the database directly and shares no code with the matrix path.
    """
    totals: dict[str, float] = defaultdict(float)
    frontier: dict[str, float] = defaultdict(float)
    for flow_id, amount in f.entries.items():
        frontier[flow_id] += amount
    depth = 0
    while frontier:
        nxt: dict[str, float] = defaultdict(float)
        for flow_id in sorted(frontier):
            need = frontier[flow_id]
            proc_id = db.provider_of(flow_id)
            if proc_id is None:
                raise LcaError("UNKNOWN_DEMAND_FLOW", f"no provider for {flow_id!r}")
            p = db.process(proc_id)
            scale = need / _base_amount(db, p.reference_product)
            for ex in p.exchanges:
                amount = scale * _base_amount(db, ex)
                if db.flow(ex.flow).is_product:
                    if ex.direction == INPUT and depth < max_depth:
                        nxt[ex.flow] += amount
                else:
                    totals[ex.flow] += amount
        frontier = {k: v for k, v in nxt.items() if v != 0.0}
        depth += 1
    order = tuple(sorted(fl.id for fl in db.flows if not fl.is_product))
    return InventoryVector(order, np.array([totals.get(k, 0.0) for k in order], dtype=float))
