"""Command-line front end.

Exit codes: 0 success, 1 domain or validation error, 2 I/O or usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import battery as bat
from .dataio import Dataset, DatasetError, fixture_path, parse
from .errors import LcaError
from .report import FORMATS, render
from .scenario import (
    ComparisonEntry,
    Scenario,
    apply_scenario,
    battery_contributions,
    battery_impacts,
    compare,
    run_sweep,
)


class _IOFailure(Exception):
    pass


def _load(path: Optional[str]) -> Dataset:
    p = Path(path) if path else fixture_path()
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise _IOFailure(f"cannot read {p}: {exc.strerror or exc}") from None
    ds, diags = parse(data)
    if ds is None:
        raise DatasetError(diags)
    return ds


def _selection(ds: Dataset, args):
    method = ds.method(args.method) if args.method else _first(ds.methods, "method")
    pack = ds.pack(args.pack) if args.pack else _first(ds.packs, "pack")
    scenario = ds.scenario(args.scenario) if args.scenario else Scenario("baseline")
    db, cells = apply_scenario(ds.database, ds.cells, scenario)
    name = args.cell or _first(ds.cells, "cell").name
    cell = next((c for c in cells if c.name == name), None)
    if cell is None:
        raise LcaError("UNKNOWN_CELL", repr(name))
    return db, cells, cell, pack, method, scenario


def _first(items, what: str):
    if not items:
        raise LcaError("EMPTY_DATASET", f"dataset defines no {what}")
    return items[0]


def cmd_validate(args) -> tuple[list[str], list[dict]]:
    path = args.path or args.dataset
    p = Path(path) if path else fixture_path()
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise _IOFailure(f"cannot read {p}: {exc.strerror or exc}") from None
    ds, diags = parse(data)
    for d in diags:
        print(d, file=sys.stderr)
    if ds is None:
        raise DatasetError(diags)
    cols = ["item", "count"]
    rows = [
        {"item": "flows", "count": len(ds.database.flows)},
        {"item": "processes", "count": len(ds.database.processes)},
        {"item": "methods", "count": len(ds.methods)},
        {"item": "cells", "count": len(ds.cells)},
        {"item": "packs", "count": len(ds.packs)},
        {"item": "evolutions", "count": len(ds.evolutions)},
        {"item": "scenarios", "count": len(ds.scenarios)},
        {"item": "comparisons", "count": len(ds.comparisons)},
        {"item": "warnings", "count": len(diags)},
    ]
    return cols, rows


def cmd_impacts(args):
    ds = _load(args.dataset)
    db, _, cell, pack, method, scenario = _selection(ds, args)
    res = battery_impacts(db, cell, pack, method)
    rows = [
        {
            "category": c.id,
            "value": res.values[c.id],
            "unit": f"{c.unit} per Wh" if c.unit else "per Wh",
            "coverage": res.coverage[c.id],
        }
        for c in method.categories
    ]
    return ["category", "value", "unit", "coverage"], rows


def cmd_contrib(args):
    ds = _load(args.dataset)
    db, _, cell, pack, method, _ = _selection(ds, args)
    grouping = None
    if args.single_group:
        from .scenario import battery_grouping

        members = [p for ps in battery_grouping(db, cell, pack).values() for p in ps]
        grouping = {args.single_group: members}
    table = battery_contributions(db, cell, pack, method, grouping)
    rows = [
        {
            "category": r.category,
            "group": r.group,
            "value": r.value,
            "unit": table.units.get(r.category, ""),
            "share_pct": r.share * 100.0,
            "zero_total": table.zero_total[r.category],
        }
        for r in table.rows
    ]
    return ["category", "group", "value", "unit", "share_pct", "zero_total"], rows


def _parse_share(text: str, flag: str) -> tuple[str, Optional[float]]:
    role, sep, value = text.partition("=")
    if not sep:
        return role, None
    try:
        return role, float(value)
    except ValueError:
        raise LcaError("BAD_ARGUMENT", f"{flag} {text!r}: share must be a number") from None


def cmd_evolve(args):
    ds = _load(args.dataset)
    if args.evolution:
        spec = ds.evolution(args.evolution)
    else:
        targets = dict(_parse_share(t, "--target") for t in args.target)
        if any(v is None for v in targets.values()):
            raise LcaError("BAD_ARGUMENT", "--target needs ROLE=SHARE")
        preserved = dict(_parse_share(t, "--preserve") for t in args.preserve)
        spec = bat.EvolutionSpec(frozenset(args.fixed), targets, preserved, "cli", "", None)
    base_name = args.cell or spec.base or _first(ds.cells, "cell").name
    base = ds.cell(base_name)
    cell = bat.derive_evolution(base, spec)
    shares = bat.mass_shares(cell)
    rows = [
        {
            "cell": cell.name,
            "item": c.role,
            "material": c.material,
            "value": c.mass,
            "unit": "mg",
            "share_pct": shares[c.role] * 100.0,
        }
        for c in cell.components
    ]
    rows.append({"cell": cell.name, "item": "total", "value": cell.total_mass, "unit": "mg", "share_pct": 100.0})
    density = bat.cell_energy_density(cell)
    rows.append({"cell": cell.name, "item": "cell_energy", "value": cell.cell_energy, "unit": "Wh"})
    rows.append({"cell": cell.name, "item": "cell_energy_density", "value": density, "unit": "Wh/kg"})
    pack = ds.pack(args.pack) if args.pack else (ds.packs[0] if ds.packs else None)
    if pack is not None:
        rows.append(
            {
                "cell": cell.name,
                "item": "pack_energy_density",
                "value": bat.pack_energy_density(density, pack),
                "unit": "Wh/kg",
            }
        )
    return ["cell", "item", "material", "value", "unit", "share_pct"], rows


def cmd_anode(args):
    inp = bat.AnodeSizingInput(
        args.area,
        args.cathode_mass,
        args.cathode_capacity,
        args.anode_capacity,
        args.ref_thickness,
        args.conductivity_ratio,
        args.density,
    )
    res = bat.size_anode(inp, args.prototype_mass)
    rows = [
        {"item": "collector_thickness", "value": res.collector_thickness, "unit": "um"},
        {"item": "collector_mass", "value": res.collector_mass, "unit": "mg"},
        {"item": "active_mass", "value": res.active_mass, "unit": "mg"},
        {"item": "optimized_anode_mass", "value": res.total_mass, "unit": "mg"},
    ]
    if res.prototype_mass is not None:
        rows.append({"item": "prototype_mass", "value": res.prototype_mass, "unit": "mg"})
        rows.append({"item": "at_or_above_prototype", "value": res.at_or_above_prototype, "unit": ""})
    return ["item", "value", "unit"], rows


def cmd_breakeven(args):
    if len(args.values) == 2:
        ced_value, ret = args.values
        source = "given"
    elif len(args.values) == 1:
        (ret,) = args.values
        ds = _load(args.dataset)
        db, _, cell, pack, method, _ = _selection(ds, args)
        ced_value = battery_impacts(db, cell, pack, method).values[method.category(args.category).id]
        source = f"{cell.name}/{method.id}/{args.category}"
    else:
        raise _IOFailure("breakeven takes CED RETURN, or RETURN alone to compute CED from the dataset")
    cycles = bat.break_even_cycles(ced_value, ret)
    rows = [{"ced_per_wh": ced_value, "return_per_cycle": ret, "cycles": cycles, "ced_source": source}]
    return ["ced_per_wh", "return_per_cycle", "cycles", "ced_source"], rows


def cmd_compare(args):
    ds = _load(args.dataset)
    db, cells, _, pack, method, _ = _selection(ds, args)
    entries = []
    for cell in cells:
        density = bat.pack_energy_density(bat.cell_energy_density(cell), pack)
        entries.append(ComparisonEntry(cell.name, density, density, battery_impacts(db, cell, pack, method)))
    entries += [e for e in ds.comparisons if e.per_wh_impacts is None or e.per_wh_impacts.method_id == method.id]
    ranked = compare(entries, method)
    cols = [
        "system",
        "original_density",
        "adjusted_density",
        "category",
        "value",
        "unit",
        "ratio_to_best",
        "rank",
        "tie",
    ]
    by_name = {e.name: e for e in entries}
    rows = []
    for r in ranked:
        e = by_name[r.system]
        rows.append(
            {
                "system": r.system,
                "original_density": e.original_density,
                "adjusted_density": e.adjusted_density,
                "category": r.category,
                "value": r.value,
                "unit": r.unit,
                "ratio_to_best": r.ratio_to_best,
                "rank": r.rank,
                "tie": r.tie,
            }
        )
    for e in entries:
        if e.per_wh_impacts is None:
            rows.append(
                {"system": e.name, "original_density": e.original_density, "adjusted_density": e.adjusted_density}
            )
    return cols, rows


def cmd_sweep(args):
    ds = _load(args.dataset)
    method = ds.method(args.method) if args.method else _first(ds.methods, "method")
    pack = ds.pack(args.pack) if args.pack else _first(ds.packs, "pack")
    cell_name = args.cell or _first(ds.cells, "cell").name
    ds.cell(cell_name)
    if args.scenario:
        scenarios = [ds.scenario(s) for s in args.scenario.split(",")]
    else:
        scenarios = list(ds.scenarios)
    scenarios = [Scenario("baseline")] + scenarios
    results = run_sweep(ds.database, ds.cells, cell_name, pack, method, scenarios, jobs=args.jobs)
    rows = []
    for res in results:
        for c in method.categories:
            rows.append(
                {
                    "scenario": res.scenario,
                    "cell": res.cell,
                    "category": c.id,
                    "value": res.impacts.values[c.id],
                    "unit": f"{c.unit} per Wh" if c.unit else "per Wh",
                }
            )
    return ["scenario", "cell", "category", "value", "unit"], rows


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", metavar="PATH", help="dataset file (default: bundled MgS dataset)")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--method", metavar="ID")
    common.add_argument("--cell", metavar="ID")
    common.add_argument("--pack", metavar="ID")
    common.add_argument("--scenario", metavar="ID")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="mgslca", description="Cradle-to-gate LCA of battery packs per Wh.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a dataset file")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("impacts", parents=[common], help="per-Wh impacts of a cell in a pack")
    p.set_defaults(func=cmd_impacts)

    p = sub.add_parser("contrib", parents=[common], help="contribution of each component group")
    p.add_argument("--single-group", metavar="LABEL", help="lump every component into one group")
    p.set_defaults(func=cmd_contrib)

    p = sub.add_parser("evolve", parents=[common], help="derive an evolved cell layout")
    p.add_argument("--evolution", metavar="ID", help="evolution defined in the dataset")
    p.add_argument("--fixed", action="append", default=[], metavar="ROLE")
    p.add_argument("--target", action="append", default=[], metavar="ROLE=SHARE")
    p.add_argument("--preserve", action="append", default=[], metavar="ROLE[=SHARE]")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("anode", parents=[common], help="size the Mg foil anode")
    p.add_argument("--area", type=float, default=74.0, help="electrode area, cm2")
    p.add_argument("--cathode-mass", type=float, default=421.0, help="sulfur load, mg")
    p.add_argument("--cathode-capacity", type=float, default=bat.SULFUR_PRACTICAL_CAPACITY, help="Ah/g")
    p.add_argument("--anode-capacity", type=float, default=bat.MG_SPECIFIC_CAPACITY, help="Ah/g")
    p.add_argument("--ref-thickness", type=float, default=4.4, help="reference collector thickness, um")
    p.add_argument("--conductivity-ratio", type=float, default=bat.MG_AL_CONDUCTIVITY_RATIO)
    p.add_argument("--density", type=float, default=bat.MG_DENSITY, help="anode density, g/cm3")
    p.add_argument("--prototype-mass", type=float, default=427.0, help="prototype foil mass, mg")
    p.set_defaults(func=cmd_anode)

    p = sub.add_parser("breakeven", parents=[common], help="cycles needed to amortize the CED")
    p.add_argument("values", nargs="+", type=float, metavar="CED RETURN")
    p.add_argument("--category", default="CED", help="category holding the CED (when computed)")
    p.set_defaults(func=cmd_breakeven)

    p = sub.add_parser("compare", parents=[common], help="compare chemistries per Wh")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scenario-sweep", parents=[common], help="impacts under every scenario")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        columns, rows = args.func(args)
        text = render(columns, rows, args.format)
        if args.out:
            try:
                Path(args.out).write_text(text, encoding="utf-8", newline="\n")
            except OSError as exc:
                raise _IOFailure(f"cannot write {args.out}: {exc.strerror or exc}") from None
        else:
            sys.stdout.write(text)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DatasetError as exc:
        if args.command != "validate":
            for d in exc.diagnostics:
                print(d, file=sys.stderr)
        return 1
    except LcaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
