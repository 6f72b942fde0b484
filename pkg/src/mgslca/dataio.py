"""Read and write ``.lca.json`` dataset documents.

A document is a JSON object with a ``format_version`` string and arrays of
flows, processes, methods, cells, packs, evolutions, scenarios and
comparisons. Quantities are written as ``{"amount": 427, "unit": "mg"}``.

``parse`` never raises: problems come back as diagnostics carrying a path
to the offending element. Unknown fields only produce warnings.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Union

from .battery import ROLES, CellComponent, CellDesign, EvolutionSpec, PackDesign
from .errors import LcaError
from .inventory import ELEMENTARY, INPUT, OUTPUT, PRODUCT, Exchange, Flow, InventoryDatabase, Process, validate_database
from .lcia import ImpactCategory, ImpactMethod, ImpactResult
from .scenario import ComparisonEntry, ReplaceProvider, ScaleExchange, Scenario, SetComponentMass
from .units import Unit, convert_amount, get_unit

FORMAT_VERSION = "1.0"
SUPPORTED_VERSIONS = ("1.0",)
DENSITY_UNITS = {"Wh/kg": 1.0, "kWh/kg": 1000.0}

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    path: str
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.path or '$'}: {self.code}: {self.message}"


@dataclass(frozen=True)
class Dataset:
    format_version: str = FORMAT_VERSION
    database: InventoryDatabase = field(default_factory=InventoryDatabase)
    methods: tuple[ImpactMethod, ...] = ()
    cells: tuple[CellDesign, ...] = ()
    packs: tuple[PackDesign, ...] = ()
    evolutions: tuple[EvolutionSpec, ...] = ()
    scenarios: tuple[Scenario, ...] = ()
    comparisons: tuple[ComparisonEntry, ...] = ()

    def _find(self, items, attr: str, key: str, code: str):
        for it in items:
            if getattr(it, attr) == key:
                return it
        raise LcaError(code, repr(key))

    def method(self, method_id: str) -> ImpactMethod:
        return self._find(self.methods, "id", method_id, "UNKNOWN_METHOD")

    def cell(self, name: str) -> CellDesign:
        return self._find(self.cells, "name", name, "UNKNOWN_CELL")

    def pack(self, pack_id: str) -> PackDesign:
        return self._find(self.packs, "id", pack_id, "UNKNOWN_PACK")

    def evolution(self, evo_id: str) -> EvolutionSpec:
        return self._find(self.evolutions, "id", evo_id, "UNKNOWN_EVOLUTION")

    def scenario(self, scenario_id: str) -> Scenario:
        return self._find(self.scenarios, "id", scenario_id, "UNKNOWN_SCENARIO")


class DatasetError(LcaError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        errors = [d for d in diagnostics if d.severity == ERROR]
        first = errors[0] if errors else None
        super().__init__(first.code if first else "INVALID_DATASET", str(first) if first else "")


class _Bail(Exception):
    """Abort the current element after an error has been recorded."""


class _Reader:
    def __init__(self):
        self.diags: list[ParseDiagnostic] = []

    def error(self, path: str, code: str, message: str) -> _Bail:
        self.diags.append(ParseDiagnostic(ERROR, path, code, message))
        return _Bail()

    def warn(self, path: str, code: str, message: str) -> None:
        self.diags.append(ParseDiagnostic(WARNING, path, code, message))

    def obj(self, value: Any, path: str, known: tuple[str, ...]) -> dict:
        if not isinstance(value, dict):
            raise self.error(path, "BAD_VALUE", "expected an object")
        for key in value:
            if key not in known:
                self.warn(f"{path}.{key}", "UNKNOWN_FIELD", f"field {key!r} ignored")
        return value

    def req(self, obj: dict, key: str, path: str, check: Callable[[Any, str], Any]):
        if key not in obj:
            raise self.error(path, "MISSING_FIELD", f"{key!r} is required")
        return check(obj[key], f"{path}.{key}")

    def opt(self, obj: dict, key: str, path: str, check: Callable[[Any, str], Any], default=None):
        if key not in obj or obj[key] is None:
            return default
        return check(obj[key], f"{path}.{key}")

    def text(self, value: Any, path: str) -> str:
        if not isinstance(value, str):
            raise self.error(path, "BAD_VALUE", "expected a string")
        return value

    def ident(self, value: Any, path: str) -> str:
        s = self.text(value, path)
        if not s:
            raise self.error(path, "BAD_VALUE", "identifier must not be empty")
        return s

    def number(self, value: Any, path: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(path, "BAD_VALUE", "expected a number")
        try:
            x = float(value)
        except OverflowError:
            raise self.error(path, "BAD_VALUE", "number out of range") from None
        if not math.isfinite(x):
            raise self.error(path, "BAD_VALUE", "number must be finite")
        return x

    def unit(self, value: Any, path: str) -> Unit:
        sym = self.text(value, path)
        try:
            return get_unit(sym)
        except LcaError:
            raise self.error(path, "BAD_UNIT", f"unknown unit {sym!r}") from None

    def quantity(self, value: Any, path: str, target: str) -> float:
        """A ``{"amount", "unit"}`` pair converted to unit ``target``."""
        q = self.obj(value, path, ("amount", "unit"))
        amount = self.req(q, "amount", path, self.number)
        unit = self.req(q, "unit", path, self.unit)
        try:
            return convert_amount(amount, unit, target)
        except LcaError:
            raise self.error(f"{path}.unit", "BAD_UNIT", f"{unit.symbol} is not convertible to {target}") from None

    def density(self, value: Any, path: str) -> float:
        q = self.obj(value, path, ("amount", "unit"))
        amount = self.req(q, "amount", path, self.number)
        sym = self.req(q, "unit", path, self.text)
        if sym not in DENSITY_UNITS:
            raise self.error(f"{path}.unit", "BAD_UNIT", f"unknown density unit {sym!r}")
        return amount * DENSITY_UNITS[sym] if DENSITY_UNITS[sym] != 1.0 else amount

    def array(self, value: Any, path: str) -> list:
        if not isinstance(value, list):
            raise self.error(path, "BAD_VALUE", "expected an array")
        return value

    def each(self, doc: dict, key: str, build: Callable[[Any, str], Any]) -> list:
        out = []
        if key not in doc or doc[key] is None:
            return out
        try:
            items = self.array(doc[key], key)
        except _Bail:
            return out
        for i, item in enumerate(items):
            try:
                out.append(build(item, f"{key}[{i}]"))
            except _Bail:
                pass
            except LcaError as exc:
                self.error(f"{key}[{i}]", "BAD_VALUE", str(exc))
        return out

    def unique(self, items: list, attr: str, key: str) -> None:
        seen = set()
        for i, it in enumerate(items):
            k = getattr(it, attr)
            if k in seen:
                self.error(f"{key}[{i}].{attr}", "DUPLICATE_ID", f"{k!r} defined more than once")
            seen.add(k)


_TOP = (
    "format_version",
    "metadata",
    "flows",
    "processes",
    "methods",
    "cells",
    "packs",
    "evolutions",
    "scenarios",
    "comparisons",
)


def parse(text: Union[bytes, str]) -> tuple[Optional[Dataset], list[ParseDiagnostic]]:
    """Parse a document into a :class:`Dataset`.

    Returns ``(dataset, diagnostics)``; the dataset is ``None`` whenever an
    error diagnostic was produced.
    """
    r = _Reader()
    try:
        ds = _parse(r, text)
    except _Bail:
        ds = None
    except Exception as exc:  # parsing is total: anything unforeseen is a diagnostic
        r.error("", "SYNTAX", f"unreadable document: {exc}")
        ds = None
    if any(d.severity == ERROR for d in r.diags):
        ds = None
    return ds, r.diags


def _parse(r: _Reader, text: Union[bytes, str]) -> Optional[Dataset]:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise r.error("", "SYNTAX", f"not UTF-8: {exc}") from None
    if not text.strip():
        raise r.error("", "MISSING_FIELD", "'format_version' is required (empty document)")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise r.error("", "SYNTAX", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except RecursionError:
        raise r.error("", "SYNTAX", "document nested too deeply") from None
    if not isinstance(doc, dict):
        raise r.error("", "SYNTAX", "top level must be an object")
    r.obj(doc, "", _TOP)
    version = r.req(doc, "format_version", "", r.text)
    if version not in SUPPORTED_VERSIONS:
        raise r.error("format_version", "VERSION_UNSUPPORTED", f"version {version!r} is not supported")
    meta = r.opt(doc, "metadata", "", lambda v, p: r.obj(v, p, ("name", "version")), {})
    db_name = r.opt(meta, "name", "metadata", r.text, "")
    db_version = r.opt(meta, "version", "metadata", r.text, "")

    flows = r.each(doc, "flows", lambda v, p: _flow(r, v, p))
    r.unique(flows, "id", "flows")
    flow_index = {f.id: f for f in flows}
    processes = r.each(doc, "processes", lambda v, p: _process(r, v, p, flow_index))
    r.unique(processes, "id", "processes")
    db = InventoryDatabase(tuple(flows), tuple(processes), db_name, db_version)
    if not any(d.severity == ERROR for d in r.diags):
        positions = {p.id: i for i, p in enumerate(processes)}
        for f in validate_database(db).findings:
            pid = f.process_id.split(",")[0]
            path = f"processes[{positions[pid]}]" if pid in positions else "processes"
            r.error(path, f.code, f"{f.flow_id}: {f.message}")

    methods = r.each(doc, "methods", lambda v, p: _method(r, v, p, flow_index))
    r.unique(methods, "id", "methods")
    cells = r.each(doc, "cells", lambda v, p: _cell(r, v, p, flow_index))
    r.unique(cells, "name", "cells")
    packs = r.each(doc, "packs", lambda v, p: _pack(r, v, p, flow_index))
    r.unique(packs, "id", "packs")
    cell_index = {c.name: c for c in cells}
    evolutions = r.each(doc, "evolutions", lambda v, p: _evolution(r, v, p, cell_index))
    r.unique(evolutions, "id", "evolutions")
    scenarios = r.each(doc, "scenarios", lambda v, p: _scenario(r, v, p, db, cell_index))
    r.unique(scenarios, "id", "scenarios")
    method_index = {m.id: m for m in methods}
    comparisons = r.each(doc, "comparisons", lambda v, p: _comparison(r, v, p, method_index))
    r.unique(comparisons, "name", "comparisons")

    return Dataset(
        version,
        db,
        tuple(methods),
        tuple(cells),
        tuple(packs),
        tuple(evolutions),
        tuple(scenarios),
        tuple(comparisons),
    )


def _flow(r: _Reader, v: Any, path: str) -> Flow:
    o = r.obj(v, path, ("id", "name", "kind", "unit", "compartment"))
    fid = r.req(o, "id", path, r.ident)
    name = r.opt(o, "name", path, r.text, "")
    kind = r.req(o, "kind", path, r.text)
    if kind not in (PRODUCT, ELEMENTARY):
        raise r.error(f"{path}.kind", "BAD_VALUE", f"kind must be product or elementary, not {kind!r}")
    unit = r.req(o, "unit", path, r.unit)
    compartment = r.opt(o, "compartment", path, r.text)
    if kind == PRODUCT and compartment:
        raise r.error(f"{path}.compartment", "BAD_VALUE", "product flows have no compartment")
    if kind == ELEMENTARY and not compartment:
        raise r.error(path, "MISSING_FIELD", "elementary flows need a 'compartment'")
    return Flow(fid, name, kind, unit, compartment)


def _exchange(r: _Reader, v: Any, path: str, flows: dict[str, Flow], reference: bool) -> Exchange:
    known = ("flow", "amount", "unit") if reference else ("flow", "amount", "unit", "direction")
    o = r.obj(v, path, known)
    fid = r.req(o, "flow", path, r.ident)
    if fid not in flows:
        raise r.error(f"{path}.flow", "DANGLING_REF", f"undefined flow {fid!r}")
    amount = r.req(o, "amount", path, r.number)
    unit = r.opt(o, "unit", path, r.unit)
    if unit is not None and unit.dimension != flows[fid].unit.dimension:
        raise r.error(f"{path}.unit", "BAD_UNIT", f"{unit.symbol} does not measure {flows[fid].unit.dimension}")
    if reference:
        direction = OUTPUT
    else:
        direction = r.opt(o, "direction", path, r.text, INPUT)
        if direction not in (INPUT, OUTPUT):
            raise r.error(f"{path}.direction", "BAD_VALUE", f"direction {direction!r}")
    return Exchange(fid, amount, direction, unit)


def _process(r: _Reader, v: Any, path: str, flows: dict[str, Flow]) -> Process:
    o = r.obj(v, path, ("id", "name", "reference_product", "exchanges"))
    pid = r.req(o, "id", path, r.ident)
    name = r.opt(o, "name", path, r.text, "")
    ref = r.req(o, "reference_product", path, lambda x, p: _exchange(r, x, p, flows, True))
    exchanges = []
    failed = False
    for i, ex in enumerate(r.opt(o, "exchanges", path, r.array, [])):
        try:
            exchanges.append(_exchange(r, ex, f"{path}.exchanges[{i}]", flows, False))
        except _Bail:
            failed = True
    if failed:
        raise _Bail()
    return Process(pid, name, ref, tuple(exchanges))


def _method(r: _Reader, v: Any, path: str, flows: dict[str, Flow]) -> ImpactMethod:
    o = r.obj(v, path, ("id", "name", "categories"))
    mid = r.req(o, "id", path, r.ident)
    name = r.opt(o, "name", path, r.text, "")
    cats = []
    seen = set()
    for i, c in enumerate(r.opt(o, "categories", path, r.array, [])):
        cpath = f"{path}.categories[{i}]"
        co = r.obj(c, cpath, ("id", "name", "unit", "factors"))
        cid = r.req(co, "id", cpath, r.ident)
        if cid in seen:
            raise r.error(f"{cpath}.id", "DUPLICATE_ID", f"category {cid!r} repeated")
        seen.add(cid)
        cname = r.opt(co, "name", cpath, r.text, cid)
        cunit = r.opt(co, "unit", cpath, r.text, "")
        raw = r.opt(co, "factors", cpath, lambda x, p: r.obj(x, p, tuple(x) if isinstance(x, dict) else ()), {})
        factors = {}
        for fid, val in raw.items():
            fpath = f"{cpath}.factors.{fid}"
            if fid not in flows:
                raise r.error(fpath, "DANGLING_REF", f"undefined flow {fid!r}")
            if flows[fid].is_product:
                raise r.error(fpath, "BAD_VALUE", f"{fid!r} is a product flow")
            factors[fid] = r.number(val, fpath)
        cats.append(ImpactCategory(cid, cname, cunit, factors))
    return ImpactMethod(mid, tuple(cats), name)


def _material(r: _Reader, v: Any, path: str, flows: dict[str, Flow]) -> str:
    fid = r.ident(v, path)
    if fid not in flows:
        raise r.error(path, "DANGLING_REF", f"undefined flow {fid!r}")
    if not flows[fid].is_product:
        raise r.error(path, "BAD_VALUE", f"{fid!r} is not a product flow")
    return fid


def _cell(r: _Reader, v: Any, path: str, flows: dict[str, Flow]) -> CellDesign:
    o = r.obj(v, path, ("name", "energy", "components"))
    name = r.req(o, "name", path, r.ident)
    energy = r.req(o, "energy", path, lambda x, p: r.quantity(x, p, "Wh"))
    comps = []
    for i, c in enumerate(r.req(o, "components", path, r.array)):
        cpath = f"{path}.components[{i}]"
        co = r.obj(c, cpath, ("role", "material", "mass"))
        role = r.req(co, "role", cpath, r.text)
        if role not in ROLES:
            raise r.error(f"{cpath}.role", "BAD_VALUE", f"unknown role {role!r}")
        material = r.req(co, "material", cpath, lambda x, p: _material(r, x, p, flows))
        mass = r.req(co, "mass", cpath, lambda x, p: r.quantity(x, p, "mg"))
        comps.append(CellComponent(role, material, mass))
    return CellDesign(name, tuple(comps), energy)


def _pack(r: _Reader, v: Any, path: str, flows: dict[str, Flow]) -> PackDesign:
    o = r.obj(
        v,
        path,
        (
            "id",
            "cell_share",
            "housing_share",
            "bms_share",
            "pack_mass",
            "housing_material",
            "bms_material",
            "cell_manufacture_flow",
        ),
    )
    mat = lambda x, p: _material(r, x, p, flows)  # noqa: E731
    return PackDesign(
        r.req(o, "id", path, r.ident),
        r.req(o, "cell_share", path, r.number),
        r.req(o, "housing_share", path, r.number),
        r.req(o, "bms_share", path, r.number),
        r.opt(o, "pack_mass", path, lambda x, p: r.quantity(x, p, "kg"), 1.0),
        r.opt(o, "housing_material", path, mat),
        r.opt(o, "bms_material", path, mat),
        r.opt(o, "cell_manufacture_flow", path, mat),
    )


def _role(r: _Reader, v: Any, path: str) -> str:
    role = r.text(v, path)
    if role not in ROLES:
        raise r.error(path, "BAD_VALUE", f"unknown role {role!r}")
    return role


def _evolution(r: _Reader, v: Any, path: str, cells: dict[str, CellDesign]) -> EvolutionSpec:
    o = r.obj(v, path, ("id", "base", "result_name", "fixed_roles", "target_shares", "preserved_shares"))
    eid = r.req(o, "id", path, r.ident)
    base = r.opt(o, "base", path, r.text, "")
    if base and base not in cells:
        raise r.error(f"{path}.base", "DANGLING_REF", f"undefined cell {base!r}")
    result_name = r.opt(o, "result_name", path, r.text)
    fixed = [
        _role(r, x, f"{path}.fixed_roles[{i}]") for i, x in enumerate(r.opt(o, "fixed_roles", path, r.array, []))
    ]
    targets = {}
    for role, share in r.opt(o, "target_shares", path, lambda x, p: r.obj(x, p, ROLES), {}).items():
        targets[_role(r, role, f"{path}.target_shares")] = r.number(share, f"{path}.target_shares.{role}")
    preserved = {}
    for role, share in r.opt(o, "preserved_shares", path, lambda x, p: r.obj(x, p, ROLES), {}).items():
        preserved[_role(r, role, f"{path}.preserved_shares")] = (
            None if share is None else r.number(share, f"{path}.preserved_shares.{role}")
        )
    return EvolutionSpec(frozenset(fixed), targets, preserved, eid, base, result_name)


def _override(r: _Reader, v: Any, path: str, db: InventoryDatabase, cells: dict[str, CellDesign]):
    if not isinstance(v, dict):
        raise r.error(path, "BAD_VALUE", "expected an object")
    kind = r.req(v, "kind", path, r.text)
    if kind == "replace_provider":
        o = r.obj(v, path, ("kind", "flow", "process"))
        flow = r.req(o, "flow", path, r.ident)
        proc = r.req(o, "process", path, r.ident)
        if flow not in db.flow_index:
            raise r.error(f"{path}.flow", "DANGLING_REF", f"undefined flow {flow!r}")
        if proc not in db.process_index:
            raise r.error(f"{path}.process", "DANGLING_REF", f"undefined process {proc!r}")
        return ReplaceProvider(flow, proc)
    if kind == "scale_exchange":
        o = r.obj(v, path, ("kind", "process", "flow", "factor"))
        proc = r.req(o, "process", path, r.ident)
        flow = r.req(o, "flow", path, r.ident)
        factor = r.req(o, "factor", path, r.number)
        if proc not in db.process_index:
            raise r.error(f"{path}.process", "DANGLING_REF", f"undefined process {proc!r}")
        if flow not in db.flow_index:
            raise r.error(f"{path}.flow", "DANGLING_REF", f"undefined flow {flow!r}")
        if factor < 0:
            raise r.error(f"{path}.factor", "BAD_VALUE", "factor must be nonnegative")
        return ScaleExchange(proc, flow, factor)
    if kind == "set_component_mass":
        o = r.obj(v, path, ("kind", "cell", "role", "mass"))
        cell = r.req(o, "cell", path, r.ident)
        role = r.req(o, "role", path, lambda x, p: _role(r, x, p))
        mass = r.req(o, "mass", path, lambda x, p: r.quantity(x, p, "mg"))
        if cell not in cells:
            raise r.error(f"{path}.cell", "DANGLING_REF", f"undefined cell {cell!r}")
        return SetComponentMass(cell, role, mass)
    raise r.error(f"{path}.kind", "BAD_VALUE", f"unknown override kind {kind!r}")


def _scenario(r: _Reader, v: Any, path: str, db: InventoryDatabase, cells: dict[str, CellDesign]) -> Scenario:
    o = r.obj(v, path, ("id", "description", "overrides"))
    sid = r.req(o, "id", path, r.ident)
    desc = r.opt(o, "description", path, r.text, "")
    overrides = [
        _override(r, x, f"{path}.overrides[{i}]", db, cells)
        for i, x in enumerate(r.opt(o, "overrides", path, r.array, []))
    ]
    return Scenario(sid, tuple(overrides), desc)


def _comparison(r: _Reader, v: Any, path: str, methods: dict[str, ImpactMethod]) -> ComparisonEntry:
    o = r.obj(v, path, ("name", "original_density", "adjusted_density", "per_wh_impacts"))
    name = r.req(o, "name", path, r.ident)
    orig = r.req(o, "original_density", path, r.density)
    adj = r.req(o, "adjusted_density", path, r.density)
    impacts = None
    if o.get("per_wh_impacts") is not None:
        ipath = f"{path}.per_wh_impacts"
        io = r.obj(o["per_wh_impacts"], ipath, ("method", "values"))
        mid = r.req(io, "method", ipath, r.ident)
        if mid not in methods:
            raise r.error(f"{ipath}.method", "DANGLING_REF", f"undefined method {mid!r}")
        cat_ids = {c.id for c in methods[mid].categories}
        raw = r.req(io, "values", ipath, lambda x, p: r.obj(x, p, tuple(x) if isinstance(x, dict) else ()))
        values = {}
        for cid, val in raw.items():
            if cid not in cat_ids:
                raise r.error(f"{ipath}.values.{cid}", "DANGLING_REF", f"method {mid!r} has no category {cid!r}")
            values[cid] = r.number(val, f"{ipath}.values.{cid}")
        impacts = ImpactResult(mid, values, {})
    return ComparisonEntry(name, orig, adj, impacts)


# --- emitting ---------------------------------------------------------------


def _num(x: float):
    if isinstance(x, float) and x.is_integer() and abs(x) < 2**53:
        return int(x)
    return x


def _qty(amount: float, unit: str) -> dict:
    return {"amount": _num(amount), "unit": unit}


def _emit_exchange(ex: Exchange, reference: bool) -> dict:
    out: dict[str, Any] = {"flow": ex.flow, "amount": _num(ex.amount)}
    if ex.unit is not None:
        out["unit"] = ex.unit.symbol
    if not reference:
        out["direction"] = ex.direction
    return out


def to_document(ds: Dataset) -> dict:
    """The JSON-ready document for ``ds``, with a fixed key order."""
    db = ds.database
    doc: dict[str, Any] = {"format_version": ds.format_version}
    if db.name or db.version:
        doc["metadata"] = {"name": db.name, "version": db.version}
    doc["flows"] = []
    for f in db.flows:
        item = {"id": f.id, "name": f.name, "kind": f.kind, "unit": f.unit.symbol}
        if f.compartment is not None:
            item["compartment"] = f.compartment
        doc["flows"].append(item)
    doc["processes"] = [
        {
            "id": p.id,
            "name": p.name,
            "reference_product": _emit_exchange(p.reference_product, True),
            "exchanges": [_emit_exchange(ex, False) for ex in p.exchanges],
        }
        for p in db.processes
    ]
    doc["methods"] = [
        {
            "id": m.id,
            "name": m.name,
            "categories": [
                {"id": c.id, "name": c.name, "unit": c.unit, "factors": {k: _num(v) for k, v in c.factors.items()}}
                for c in m.categories
            ],
        }
        for m in ds.methods
    ]
    doc["cells"] = [
        {
            "name": c.name,
            "energy": _qty(c.cell_energy, "Wh"),
            "components": [
                {"role": x.role, "material": x.material, "mass": _qty(x.mass, "mg")} for x in c.components
            ],
        }
        for c in ds.cells
    ]
    packs = []
    for p in ds.packs:
        item = {
            "id": p.id,
            "cell_share": _num(p.cell_share),
            "housing_share": _num(p.housing_share),
            "bms_share": _num(p.bms_share),
            "pack_mass": _qty(p.pack_mass, "kg"),
        }
        for key in ("housing_material", "bms_material", "cell_manufacture_flow"):
            if getattr(p, key) is not None:
                item[key] = getattr(p, key)
        packs.append(item)
    doc["packs"] = packs
    evos = []
    for e in ds.evolutions:
        item = {"id": e.id}
        if e.base:
            item["base"] = e.base
        if e.result_name is not None:
            item["result_name"] = e.result_name
        item["fixed_roles"] = [r for r in ROLES if r in e.fixed_roles]
        item["target_shares"] = {k: _num(v) for k, v in e.target_shares.items()}
        item["preserved_shares"] = {k: (None if v is None else _num(v)) for k, v in e.preserved_shares.items()}
        evos.append(item)
    doc["evolutions"] = evos
    doc["scenarios"] = [
        {"id": s.id, "description": s.description, "overrides": [_emit_override(o) for o in s.overrides]}
        for s in ds.scenarios
    ]
    comps = []
    for c in ds.comparisons:
        item = {
            "name": c.name,
            "original_density": {"amount": _num(c.original_density), "unit": "Wh/kg"},
            "adjusted_density": {"amount": _num(c.adjusted_density), "unit": "Wh/kg"},
        }
        if c.per_wh_impacts is not None:
            item["per_wh_impacts"] = {
                "method": c.per_wh_impacts.method_id,
                "values": {k: _num(v) for k, v in c.per_wh_impacts.values.items()},
            }
        comps.append(item)
    doc["comparisons"] = comps
    return doc


def _emit_override(o) -> dict:
    if isinstance(o, ReplaceProvider):
        return {"kind": o.kind, "flow": o.flow, "process": o.process}
    if isinstance(o, ScaleExchange):
        return {"kind": o.kind, "process": o.process, "flow": o.flow, "factor": _num(o.factor)}
    return {"kind": o.kind, "cell": o.cell, "role": o.role, "mass": _qty(o.mass, "mg")}


def emit(ds: Dataset) -> bytes:
    """Serialize ``ds``; output is deterministic and UTF-8 encoded."""
    return (json.dumps(to_document(ds), indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode("utf-8")


def load(path: Union[str, Path]) -> Dataset:
    """Read a dataset file, raising :class:`DatasetError` on any error diagnostic."""
    ds, diags = parse(Path(path).read_bytes())
    if ds is None:
        raise DatasetError(diags)
    return ds


def fixture_path() -> Path:
    """Location of the bundled magnesium-sulfur dataset."""
    return Path(__file__).parent / "data" / "mgs.lca.json"


def load_fixture() -> Dataset:
    return load(fixture_path())
