"""Cradle-to-gate LCA engine and battery mass/energy toolkit."""
from .errors import LcaError
from .units import Unit, convert_amount, get_unit
from .inventory import Exchange, Flow, InventoryDatabase, Process, ValidationReport, validate_database
from .solver import (
    DemandVector,
    InventoryVector,
    ScalingVector,
    TechnosphereSystem,
    assemble,
    compute_inventory,
    inventory,
    solve_scaling,
    traverse_oracle,
)
from .lcia import ContributionTable, ImpactCategory, ImpactMethod, ImpactResult, ced, characterize, contributions
from .battery import (
    AnodeSizingInput,
    CellComponent,
    CellDesign,
    EvolutionSpec,
    PackDesign,
    break_even_cycles,
    capacity_match,
    cell_energy_density,
    collector_min,
    derive_evolution,
    mass_shares,
    optimized_anode_mass,
    pack_energy_density,
    per_wh_bom,
)
from .scenario import (
    ComparisonEntry,
    ReplaceProvider,
    ScaleExchange,
    Scenario,
    SetComponentMass,
    apply_scenario,
    battery_contributions,
    battery_impacts,
    compare,
)
from .dataio import Dataset, ParseDiagnostic, emit, load, load_fixture, parse

__version__ = "0.1.0"

__all__ = [
    "LcaError",
    "Unit",
    "convert_amount",
    "get_unit",
    "Exchange",
    "Flow",
    "InventoryDatabase",
    "Process",
    "ValidationReport",
    "validate_database",
    "DemandVector",
    "InventoryVector",
    "ScalingVector",
    "TechnosphereSystem",
    "assemble",
    "compute_inventory",
    "inventory",
    "solve_scaling",
    "traverse_oracle",
    "ContributionTable",
    "ImpactCategory",
    "ImpactMethod",
    "ImpactResult",
    "ced",
    "characterize",
    "contributions",
    "AnodeSizingInput",
    "CellComponent",
    "CellDesign",
    "EvolutionSpec",
    "PackDesign",
    "break_even_cycles",
    "capacity_match",
    "cell_energy_density",
    "collector_min",
    "derive_evolution",
    "mass_shares",
    "optimized_anode_mass",
    "pack_energy_density",
    "per_wh_bom",
    "ComparisonEntry",
    "ReplaceProvider",
    "ScaleExchange",
    "Scenario",
    "SetComponentMass",
    "apply_scenario",
    "battery_contributions",
    "battery_impacts",
    "compare",
    "Dataset",
    "ParseDiagnostic",
    "emit",
    "load",
    "load_fixture",
    "parse",
]
