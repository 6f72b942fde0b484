"""Regenerate src/mgslca/data/mgs.lca.json.

The background inventory is a small illustrative stand-in for a commercial
database: process amounts are round, plausible figures, not measurements.
Cell compositions are the published prototype and evolution layouts. The
CED factors are scaled by one common factor so the baseline pack needs
1583 Wh of primary energy per Wh of capacity.

    python scripts/build_fixture.py [--check]
"""
import argparse
import sys
from pathlib import Path

from mgslca.battery import CellComponent, CellDesign, EvolutionSpec, PackDesign
from mgslca.dataio import Dataset, emit, fixture_path
from mgslca.inventory import Exchange, Flow, InventoryDatabase, Process
from mgslca.lcia import ImpactCategory, ImpactMethod, ced
from mgslca.scenario import ComparisonEntry, ReplaceProvider, ScaleExchange, Scenario, SetComponentMass
from mgslca.solver import compute_inventory
from mgslca.battery import per_wh_bom
from mgslca.units import get_unit

BL_ENERGY_WH = 57.0 * 6.706e-3  # 57 Wh/kg at 6706 mg
CED_TARGET = 1583.0

PRODUCTS = [
    ("electricity-eu", "electricity, medium voltage, EU mix", "kWh"),
    ("electricity-cn", "electricity, medium voltage, CN mix", "kWh"),
    ("electricity-ch", "electricity, medium voltage, CH mix", "kWh"),
    ("heat", "heat, natural gas furnace", "MJ"),
    ("magnesium", "magnesium ingot, Pidgeon process", "kg"),
    ("aluminium", "aluminium ingot, primary", "kg"),
    ("sheet-rolling", "sheet rolling, aluminium proxy", "kg"),
    ("steel", "steel, low alloyed", "kg"),
    ("copper", "copper, primary", "kg"),
    ("polyolefin", "polyethylene/polypropylene granulate", "kg"),
    ("hfip", "hexafluoroisopropanol", "kg"),
    ("mg-foil", "Mg foil, 100 um", "kg"),
    ("sulfur", "sulfur", "kg"),
    ("carbon-black", "carbon black", "kg"),
    ("cmc-sbr-binder", "CMC/SBR binder", "kg"),
    ("al-collector-foil", "aluminium collector foil", "kg"),
    ("separator", "polyolefin separator", "kg"),
    ("electrolyte", "Mg[B(hfip)4]2 in DME, 0.3 M", "kg"),
    ("pouch-housing", "pouch cell housing, Al composite", "kg"),
    ("cell-manufacture", "cell assembly, per kg of cell", "kg"),
    ("pack-housing", "battery pack casing", "kg"),
    ("bms", "battery management system", "kg"),
]

ELEMENTARY = [
    ("co2-fossil", "carbon dioxide, fossil", "kg", "air"),
    ("ch4-fossil", "methane, fossil", "kg", "air"),
    ("n2o", "dinitrogen monoxide", "kg", "air"),
    ("so2", "sulfur dioxide", "kg", "air"),
    ("cfc-114", "CFC-114", "kg", "air"),
    ("halon-1301", "Halon 1301", "kg", "air"),
    ("hard-coal", "hard coal, in ground", "kg", "resource"),
    ("natural-gas", "natural gas, in ground", "m3", "resource"),
    ("crude-oil", "crude oil, in ground", "kg", "resource"),
    ("uranium", "uranium, in ground", "kg", "resource"),
    ("hydro-energy", "energy, potential, in hydropower reservoir", "MJ", "resource"),
    ("bauxite", "bauxite, in ground", "kg", "resource"),
    ("dolomite", "dolomite, in ground", "kg", "resource"),
    ("copper-ore", "copper, in ground", "kg", "resource"),
    ("iron-ore", "iron, in ground", "kg", "resource"),
    ("nickel-ore", "nickel, in ground", "kg", "resource"),
]

# (process id, reference flow, [(flow, amount), ...]); amounts per unit of reference flow
PROCESSES = [
    ("elec-eu-mix", "electricity-eu", [
        ("hard-coal", 0.12), ("natural-gas", 0.06), ("uranium", 1.0e-6), ("hydro-energy", 0.4),
        ("co2-fossil", 0.40), ("ch4-fossil", 8e-4), ("n2o", 1e-5), ("so2", 6e-4), ("cfc-114", 3.0e-9),
    ]),
    ("elec-cn-mix", "electricity-cn", [
        ("hard-coal", 0.45), ("natural-gas", 0.01), ("uranium", 6e-8), ("hydro-energy", 0.7),
        ("co2-fossil", 0.95), ("ch4-fossil", 3e-3), ("n2o", 2e-5), ("so2", 4e-3), ("cfc-114", 0.8e-9),
    ]),
    ("elec-ch-mix", "electricity-ch", [
        ("hard-coal", 0.005), ("natural-gas", 0.01), ("uranium", 1.2e-6), ("hydro-energy", 2.0),
        ("co2-fossil", 0.03), ("ch4-fossil", 1e-4), ("n2o", 1e-6), ("so2", 5e-5), ("cfc-114", 3.5e-9),
    ]),
    ("heat-ng", "heat", [
        ("natural-gas", 0.03), ("co2-fossil", 0.066), ("ch4-fossil", 1e-5), ("halon-1301", 1e-11),
    ]),
    ("magnesium-pidgeon", "magnesium", [
        ("electricity-eu", 45.0), ("hard-coal", 0.5), ("dolomite", 10.0), ("co2-fossil", 1.0), ("so2", 0.01),
    ]),
    ("aluminium-primary", "aluminium", [
        ("electricity-eu", 15.0), ("heat", 10.0), ("bauxite", 4.4), ("co2-fossil", 1.6),
    ]),
    ("sheet-rolling-al", "sheet-rolling", [("electricity-eu", 0.7), ("heat", 2.5)]),
    ("steel-production", "steel", [
        ("iron-ore", 1.4), ("hard-coal", 0.6), ("electricity-eu", 0.5), ("co2-fossil", 1.8),
    ]),
    ("copper-production", "copper", [
        ("copper-ore", 1.0), ("electricity-eu", 3.0), ("heat", 5.0), ("co2-fossil", 1.5), ("so2", 0.02),
    ]),
    ("polyolefin-production", "polyolefin", [
        ("crude-oil", 1.0), ("natural-gas", 0.9), ("electricity-eu", 1.2), ("co2-fossil", 1.9),
    ]),
    ("hfip-synthesis", "hfip", [
        ("crude-oil", 1.2), ("natural-gas", 0.8), ("electricity-eu", 4.0), ("heat", 20.0),
        ("co2-fossil", 3.0), ("cfc-114", 2e-8),
    ]),
    ("mg-foil-rolling", "mg-foil", [("magnesium", 1.03), ("sheet-rolling", 1.0)]),
    ("sulfur-production", "sulfur", [
        ("crude-oil", 0.02), ("natural-gas", 0.02), ("electricity-eu", 0.05), ("co2-fossil", 0.08),
    ]),
    ("carbon-black-production", "carbon-black", [
        ("natural-gas", 1.5), ("crude-oil", 0.5), ("co2-fossil", 2.4),
    ]),
    ("binder-production", "cmc-sbr-binder", [
        ("crude-oil", 1.6), ("natural-gas", 0.5), ("electricity-eu", 2.0), ("co2-fossil", 2.5),
    ]),
    ("al-foil-rolling", "al-collector-foil", [("aluminium", 1.02), ("sheet-rolling", 1.0)]),
    ("separator-production", "separator", [("polyolefin", 1.05), ("electricity-eu", 5.0)]),
    ("electrolyte-synthesis", "electrolyte", [
        ("hfip", 0.35), ("magnesium", 0.01), ("electricity-eu", 8.0), ("heat", 15.0), ("crude-oil", 0.6),
        ("co2-fossil", 0.4),
    ]),
    ("pouch-production", "pouch-housing", [
        ("aluminium", 0.45), ("polyolefin", 0.5), ("sheet-rolling", 0.45), ("electricity-eu", 1.0),
    ]),
    ("cell-assembly", "cell-manufacture", [("electricity-eu", 12.0), ("heat", 15.0)]),
    ("pack-housing-production", "pack-housing", [
        ("steel", 0.6), ("aluminium", 0.35), ("polyolefin", 0.1), ("electricity-eu", 2.0),
    ]),
    ("bms-production", "bms", [
        ("copper", 0.25), ("steel", 0.1), ("polyolefin", 0.2), ("electricity-eu", 60.0), ("nickel-ore", 0.01),
        ("co2-fossil", 3.0),
    ]),
]

# category id, name, unit, factors (per flow base unit: kg, m3, Wh)
CATEGORIES = [
    ("GWP", "global warming potential", "kg CO2-eq", {"co2-fossil": 1.0, "ch4-fossil": 25.0, "n2o": 298.0}),
    ("FDP", "fossil depletion potential", "kg oil-eq", {
        "hard-coal": 0.42, "natural-gas": 0.84, "crude-oil": 1.0,
    }),
    ("ODP", "ozone depletion potential", "kg CFC-11-eq", {"cfc-114": 0.94, "halon-1301": 12.0}),
    ("MDP", "metal depletion potential", "kg Fe-eq", {
        "iron-ore": 1.0, "copper-ore": 60.0, "nickel-ore": 23.0, "bauxite": 0.1, "dolomite": 0.0,
    }),
    ("CED", "cumulative energy demand", "Wh", {
        "hard-coal": 8140.0, "natural-gas": 10556.0, "crude-oil": 12722.0, "uranium": 1.556e8,
        "hydro-energy": 1.0,
    }),
]

BL = [
    ("anode", "mg-foil", 427),
    ("cathode_active", "sulfur", 421),
    ("binder", "cmc-sbr-binder", 5),
    ("conductive_additive", "carbon-black", 5),
    ("cathode_collector", "al-collector-foil", 88),
    ("separator", "separator", 700),
    ("electrolyte", "electrolyte", 2060),
    ("housing", "pouch-housing", 3000),
]
EVO1_MASSES = {"housing": 115}
EVO2_MASSES = {"separator": 29, "electrolyte": 451, "housing": 44}

LITERATURE_SYSTEMS = [
    ("NMC (Ell)", 105.1, 130.3),
    ("LFP (Zak)", 93.0, 86.4),
    ("LiS (Deng)", 220.0, 224.0),
    ("NMC (M-B)", 112.0, 144.85),
    ("LFP (M-B)", 88.0, 113.8),
]


def build() -> Dataset:
    flows = [Flow(i, n, "product", get_unit(u)) for i, n, u in PRODUCTS]
    flows += [Flow(i, n, "elementary", get_unit(u), c) for i, n, u, c in ELEMENTARY]
    kinds = {f.id: f for f in flows}
    procs = []
    for pid, ref, exchanges in PROCESSES:
        exs = tuple(Exchange(f, a, "input" if kinds[f].is_product or kinds[f].compartment == "resource" else "output")
                    for f, a in exchanges)
        procs.append(Process(pid, pid.replace("-", " "), Exchange(ref, 1.0, "output"), exs))
    db = InventoryDatabase(tuple(flows), tuple(procs), "mgs-illustrative-background", "1")

    def cell(name, overrides):
        comps = tuple(CellComponent(r, m, float(overrides.get(r, mass))) for r, m, mass in BL)
        return CellDesign(name, comps, BL_ENERGY_WH)

    cells = (cell("MgS-BL", {}), cell("MgS-Evo1", EVO1_MASSES), cell("MgS-Evo2", EVO2_MASSES))
    pack = PackDesign("automotive", 0.80, 0.145, 0.055, 1.0, "pack-housing", "bms", "cell-manufacture")

    cats = [ImpactCategory(i, n, u, f) for i, n, u, f in CATEGORIES]
    raw_ced = ced(compute_inventory(db, per_wh_bom(cells[0], pack)), cats[-1])
    k = CED_TARGET / raw_ced
    cats[-1] = ImpactCategory("CED", cats[-1].name, "Wh", {f: v * k for f, v in cats[-1].factors.items()})
    method = ImpactMethod("recipe-midpoint-h-illustrative", tuple(cats), "ReCiPe-style midpoint (H), illustrative factors")

    stack = frozenset({"anode", "cathode_active", "binder", "conductive_additive", "cathode_collector"})
    evolutions = (
        EvolutionSpec(stack | {"separator", "electrolyte"}, {"housing": 0.03}, {}, "evo1", "MgS-BL", "MgS-Evo1"),
        EvolutionSpec(stack, {"separator": 0.02, "housing": 0.03}, {"electrolyte": 0.307}, "evo2", "MgS-BL", "MgS-Evo2"),
    )
    scenarios = (
        Scenario("cn-mix", (ReplaceProvider("electricity-eu", "elec-cn-mix"),), "Chinese electricity mix"),
        Scenario("ch-mix", (ReplaceProvider("electricity-eu", "elec-ch-mix"),), "Swiss electricity mix"),
        Scenario("low-energy-assembly", (ScaleExchange("cell-assembly", "electricity-eu", 0.5),),
                 "cell assembly without dry room, half the electricity"),
        Scenario("optimized-anode", (SetComponentMass("MgS-Evo2", "anode", 432.0),),
                 "Mg foil sized to the electrochemical minimum"),
    )
    comparisons = tuple(ComparisonEntry(n, o, a) for n, o, a in LITERATURE_SYSTEMS)
    print(f"CED calibration factor {k:.6f} (raw baseline CED {raw_ced:.3f} Wh/Wh)", file=sys.stderr)
    return Dataset("1.0", db, (method,), cells, (pack,), evolutions, scenarios, comparisons)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="fail if the shipped file is out of date")
    args = ap.parse_args()
    data = emit(build())
    path = Path(fixture_path())
    if args.check:
        return 0 if path.read_bytes() == data else 1
    path.write_bytes(data)
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
