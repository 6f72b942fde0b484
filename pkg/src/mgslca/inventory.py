"""Flows, processes and the inventory database, plus structural validation.

All types are frozen; scenario code builds modified copies with
``dataclasses.replace`` instead of mutating a loaded database.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .units import Unit

PRODUCT = "product"
ELEMENTARY = "elementary"
INPUT = "input"
OUTPUT = "output"


@dataclass(frozen=True)
class Flow:
    id: str
    name: str
    kind: str
    unit: Unit
    compartment: Optional[str] = None

    @property
    def is_product(self) -> bool:
        return self.kind == PRODUCT


@dataclass(frozen=True)
class Exchange:
    """An amount of a flow entering or leaving a process.

    ``amount`` is expressed in ``unit`` when one is given, otherwise in the
    flow's own unit. Conversion to base units happens at matrix assembly.
    """

    flow: str
    amount: float
    direction: str = INPUT
    unit: Optional[Unit] = None


@dataclass(frozen=True)
class Process:
    id: str
    name: str
    reference_product: Exchange
    exchanges: tuple[Exchange, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exchanges", tuple(self.exchanges))


@dataclass(frozen=True)
class InventoryDatabase:
    flows: tuple[Flow, ...] = ()
    processes: tuple[Process, ...] = ()
    name: str = ""
    version: str = ""

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        object.__setattr__(self, "processes", tuple(self.processes))

    @cached_property
    def flow_index(self) -> dict[str, Flow]:
        return {f.id: f for f in self.flows}

    @cached_property
    def process_index(self) -> dict[str, Process]:
        return {p.id: p for p in self.processes}

    @cached_property
    def providers(self) -> dict[str, str]:
        """Map product flow id -> id of the (first) process producing it."""
        out: dict[str, str] = {}
        for p in self.processes:
            out.setdefault(p.reference_product.flow, p.id)
        return out

    def flow(self, flow_id: str) -> Flow:
        return self.flow_index[flow_id]

    def process(self, process_id: str) -> Process:
        return self.process_index[process_id]

    def provider_of(self, flow_id: str) -> Optional[str]:
        return self.providers.get(flow_id)


@dataclass(frozen=True, order=True)
class Finding:
    code: str
    process_id: str = ""
    flow_id: str = ""
    message: str = field(default="", compare=False)


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def codes(self) -> list[str]:
        return [f.code for f in self.findings]


def _finite_nonneg(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x) and x >= 0


def validate_database(db: InventoryDatabase) -> ValidationReport:
    """Check every structural invariant of ``db`` and report violations.

    Problems are collected, never raised. Findings are sorted, so the report
    does not depend on the order processes are listed in.
    """
    findings: list[Finding] = []
    flows: dict[str, Flow] = {}
    for f in db.flows:
        if f.id in flows:
            findings.append(Finding("DUPLICATE_ID", flow_id=f.id, message=f"flow {f.id!r} defined twice"))
            continue
        flows[f.id] = f
        if f.kind == PRODUCT and f.compartment:
            findings.append(Finding("BAD_FLOW_KIND", flow_id=f.id, message="product flow with a compartment"))
        elif f.kind == ELEMENTARY and not f.compartment:
            findings.append(Finding("BAD_FLOW_KIND", flow_id=f.id, message="elementary flow without compartment"))
        elif f.kind not in (PRODUCT, ELEMENTARY):
            findings.append(Finding("BAD_FLOW_KIND", flow_id=f.id, message=f"unknown kind {f.kind!r}"))

    seen_proc: set[str] = set()
    producers: dict[str, list[str]] = {}
    for p in db.processes:
        if p.id in seen_proc:
            findings.append(Finding("DUPLICATE_ID", process_id=p.id, message=f"process {p.id!r} defined twice"))
            continue
        seen_proc.add(p.id)
        ref = p.reference_product
        ref_flow = flows.get(ref.flow)
        if ref_flow is None:
            findings.append(Finding("DANGLING_FLOW", p.id, ref.flow, "reference product flow not defined"))
        else:
            producers.setdefault(ref.flow, []).append(p.id)
            if not ref_flow.is_product:
                findings.append(Finding("BAD_FLOW_KIND", p.id, ref.flow, "reference product must be a product flow"))
            findings.extend(_unit_check(p.id, ref, ref_flow))
        if ref.direction != OUTPUT or not (_finite_nonneg(ref.amount) and ref.amount > 0):
            findings.append(
                Finding("NONPOSITIVE_REFERENCE", p.id, ref.flow, "reference product must be a positive output")
            )
        for ex in p.exchanges:
            flow = flows.get(ex.flow)
            if flow is None:
                findings.append(Finding("DANGLING_FLOW", p.id, ex.flow, "exchange references undefined flow"))
                continue
            if not _finite_nonneg(ex.amount):
                findings.append(Finding("NEGATIVE_AMOUNT", p.id, ex.flow, f"amount {ex.amount!r} not allowed"))
            if ex.direction not in (INPUT, OUTPUT):
                findings.append(Finding("BAD_DIRECTION", p.id, ex.flow, f"direction {ex.direction!r}"))
            elif flow.is_product and ex.direction == OUTPUT:
                findings.append(Finding("EXTRA_OUTPUT", p.id, ex.flow, "only the reference product may be output"))
            findings.extend(_unit_check(p.id, ex, flow))

    for flow_id, procs in producers.items():
        if len(procs) > 1:
            findings.append(
                Finding("DUPLICATE_PROVIDER", ",".join(sorted(procs)), flow_id, "flow has several providers")
            )
    for p in db.processes:
        for ex in p.exchanges:
            flow = flows.get(ex.flow)
            if flow is not None and flow.is_product and ex.direction == INPUT and ex.flow not in producers:
                findings.append(Finding("MISSING_PROVIDER", p.id, ex.flow, "no process produces this input"))

    return ValidationReport(tuple(sorted(set(findings))))


def _unit_check(process_id: str, ex: Exchange, flow: Flow) -> Iterable[Finding]:
    if ex.unit is not None and ex.unit.dimension != flow.unit.dimension:
        yield Finding(
            "UNIT_MISMATCH",
            process_id,
            flow.id,
            f"{ex.unit.symbol} is not a {flow.unit.dimension} unit",
        )
