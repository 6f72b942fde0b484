"""Cell and pack mass balances, layout evolutions, anode sizing and break-even.

Cell component masses are in mg, energies in Wh and densities in Wh/kg,
matching the way battery compositions are usually tabulated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .errors import LcaError
from .solver import DemandVector

ROLES = (
    "anode",
    "cathode_active",
    "binder",
    "conductive_additive",
    "cathode_collector",
    "separator",
    "electrolyte",
    "housing",
)

# contribution group of each cell role
ROLE_GROUPS = {
    "anode": "anode",
    "cathode_active": "cathode",
    "binder": "cathode",
    "conductive_additive": "cathode",
    "cathode_collector": "cathode",
    "separator": "separator",
    "electrolyte": "electrolyte",
    "housing": "housing",
}

MG_DENSITY = 1.738  # g/cm3
AL_DENSITY = 2.70  # g/cm3
MG_SPECIFIC_CAPACITY = 2.205  # Ah/g, theoretical
SULFUR_PRACTICAL_CAPACITY = 1.67  # Ah/g
MG_AL_CONDUCTIVITY_RATIO = 0.5


@dataclass(frozen=True)
class CellComponent:
    role: str
    material: str
    mass: float  # mg

    def __post_init__(self):
        if self.role not in ROLES:
            raise LcaError("UNKNOWN_ROLE", repr(self.role))
        if not (math.isfinite(self.mass) and self.mass >= 0):
            raise LcaError("NEGATIVE_MASS", f"{self.role}: {self.mass!r}")


@dataclass(frozen=True)
class CellDesign:
    name: str
    components: tuple[CellComponent, ...]
    cell_energy: float  # Wh

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        roles = [c.role for c in self.components]
        if len(set(roles)) != len(roles):
            raise LcaError("DUPLICATE_ROLE", f"cell {self.name!r} lists a role twice")
        if not (math.isfinite(self.cell_energy) and self.cell_energy > 0):
            raise LcaError("NONPOSITIVE_ENERGY", f"cell {self.name!r}")

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(c.role for c in self.components)

    @property
    def total_mass(self) -> float:
        return math.fsum(c.mass for c in self.components)

    def component(self, role: str) -> CellComponent:
        for c in self.components:
            if c.role == role:
                return c
        raise LcaError("MISSING_ROLE", f"cell {self.name!r} has no {role!r}")

    def mass(self, role: str) -> float:
        return self.component(role).mass

    def with_mass(self, role: str, mass: float) -> "CellDesign":
        self.component(role)
        comps = tuple(replace(c, mass=mass) if c.role == role else c for c in self.components)
        return replace(self, components=comps)


@dataclass(frozen=True)
class PackDesign:
    """Pack mass split between cells, casing and BMS.

    ``housing_material``, ``bms_material`` and ``cell_manufacture_flow`` name
    the product flows that carry the pack periphery and the cell assembly
    step (per kg of cell) into the inventory model.
    """

    id: str
    cell_share: float
    housing_share: float
    bms_share: float
    pack_mass: float = 1.0  # kg
    housing_material: Optional[str] = None
    bms_material: Optional[str] = None
    cell_manufacture_flow: Optional[str] = None

    def __post_init__(self):
        shares = (self.cell_share, self.housing_share, self.bms_share)
        if not all(math.isfinite(x) and x > 0 for x in shares):
            raise LcaError("BAD_PACK", f"pack {self.id!r}: shares must be positive")
        if abs(math.fsum(shares) - 1.0) > 1e-9:
            raise LcaError("BAD_PACK", f"pack {self.id!r}: shares sum to {math.fsum(shares)}")
        if not (math.isfinite(self.pack_mass) and self.pack_mass > 0):
            raise LcaError("BAD_PACK", f"pack {self.id!r}: pack mass must be positive")


@dataclass(frozen=True)
class EvolutionSpec:
    """How a cell layout is re-proportioned.

    Fixed roles keep their absolute mass. Target roles are set to a mass
    share of the new total. Preserved roles keep a mass share too: the
    baseline share when mapped to ``None``, otherwise the given value.
    """

    fixed_roles: frozenset = frozenset()
    target_shares: Mapping[str, float] = field(default_factory=dict)
    preserved_shares: Mapping[str, Optional[float]] = field(default_factory=dict)
    id: str = ""
    base: str = ""
    result_name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "fixed_roles", frozenset(self.fixed_roles))
        object.__setattr__(self, "target_shares", dict(self.target_shares))
        object.__setattr__(self, "preserved_shares", dict(self.preserved_shares))
        sets = [set(self.fixed_roles), set(self.target_shares), set(self.preserved_shares)]
        for a in range(3):
            for b in range(a + 1, 3):
                both = sets[a] & sets[b]
                if both:
                    raise LcaError("OVERLAPPING_ROLES", f"{sorted(both)} appear in two role sets")
        shares = list(self.target_shares.values()) + [v for v in self.preserved_shares.values() if v is not None]
        if not all(math.isfinite(x) and 0 <= x < 1 for x in shares):
            raise LcaError("SHARES_EXCEED_ONE", "each share must lie in [0, 1)")


def mass_shares(cell: CellDesign) -> dict[str, float]:
    total = cell.total_mass
    if not total > 0:
        raise LcaError("EMPTY_CELL", f"cell {cell.name!r} has no mass")
    return {c.role: c.mass / total for c in cell.components}


def derive_evolution(base: CellDesign, spec: EvolutionSpec, name: Optional[str] = None) -> CellDesign:
    """Re-proportion ``base`` so targeted roles hit their mass shares.

    With F the summed mass of fixed roles and S the summed shares of target
    and preserved roles, the new total is F / (1 - S). Cell energy is kept.
    """
    roles = set(base.roles)
    covered = set(spec.fixed_roles) | set(spec.target_shares) | set(spec.preserved_shares)
    missing = sorted(covered - roles)
    if missing:
        raise LcaError("MISSING_ROLE", f"cell {base.name!r} lacks {missing}")
    uncovered = sorted(roles - covered)
    if uncovered:
        raise LcaError("MISSING_ROLE", f"evolution does not place {uncovered}")

    baseline = mass_shares(base)
    preserved = {r: (baseline[r] if v is None else v) for r, v in spec.preserved_shares.items()}
    sigma = math.fsum(list(spec.target_shares.values()) + list(preserved.values()))
    if sigma >= 1.0:
        raise LcaError("SHARES_EXCEED_ONE", f"target and preserved shares sum to {sigma:.6g}")
    fixed = math.fsum(base.mass(r) for r in spec.fixed_roles)
    total = fixed / (1.0 - sigma)

    comps = []
    for c in base.components:
        if c.role in spec.target_shares:
            comps.append(replace(c, mass=spec.target_shares[c.role] * total))
        elif c.role in preserved:
            comps.append(replace(c, mass=preserved[c.role] * total))
        else:
            comps.append(c)
    new_name = name or spec.result_name or base.name
    return CellDesign(new_name, tuple(comps), base.cell_energy)


def cell_energy_density(cell: CellDesign) -> float:
    """Wh/kg at cell level."""
    total = cell.total_mass
    if not total > 0:
        raise LcaError("EMPTY_CELL", f"cell {cell.name!r} has no mass")
    return cell.cell_energy / (total * 1e-6)


def pack_energy_density(cell_density: float, pack: PackDesign) -> float:
    """Wh/kg at pack level, with the cell share of pack mass held fixed."""
    return cell_density * pack.cell_share


# a pack keeps its layout when the cells change, so repacking is the same rule
repack_density = pack_energy_density


def pack_energy(cell: CellDesign, pack: PackDesign) -> float:
    """Storage capacity of a pack of ``pack.pack_mass`` kg, in Wh."""
    return pack_energy_density(cell_energy_density(cell), pack) * pack.pack_mass


def per_wh_bom(cell: CellDesign, pack: PackDesign) -> DemandVector:
    """Material demand, in kg per Wh of pack capacity.

    Cell materials come from their share of pack mass; pack casing, BMS
    and the cell manufacture flow (kg of cell processed) are added when the
    pack names them.
    """
    density = pack_energy_density(cell_energy_density(cell), pack)
    if not density > 0:
        raise LcaError("NONPOSITIVE_DENSITY", f"cell {cell.name!r}")
    shares = mass_shares(cell)
    out: dict[str, float] = {}
    for c in cell.components:
        out[c.material] = out.get(c.material, 0.0) + shares[c.role] * pack.cell_share / density
    for flow, share in (
        (pack.housing_material, pack.housing_share),
        (pack.bms_material, pack.bms_share),
        (pack.cell_manufacture_flow, pack.cell_share),
    ):
        if flow:
            out[flow] = out.get(flow, 0.0) + share / density
    return DemandVector(out)


@dataclass(frozen=True)
class AnodeSizingInput:
    electrode_area: float = 74.0  # cm2
    cathode_active_mass: float = 421.0  # mg
    cathode_specific_capacity: float = SULFUR_PRACTICAL_CAPACITY  # Ah/g
    anode_specific_capacity: float = MG_SPECIFIC_CAPACITY  # Ah/g
    reference_collector_thickness: float = 4.4  # um
    anode_to_reference_conductivity_ratio: float = MG_AL_CONDUCTIVITY_RATIO
    anode_density: float = MG_DENSITY  # g/cm3

    def __post_init__(self):
        for name in (
            "electrode_area",
            "cathode_specific_capacity",
            "anode_specific_capacity",
            "reference_collector_thickness",
            "anode_density",
        ):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise LcaError("BAD_SIZING_INPUT", f"{name} must be positive, got {v!r}")
        if not (math.isfinite(self.cathode_active_mass) and self.cathode_active_mass >= 0):
            raise LcaError("BAD_SIZING_INPUT", "cathode_active_mass must be nonnegative")
        r = self.anode_to_reference_conductivity_ratio
        if not (math.isfinite(r) and 0 < r <= 1):
            raise LcaError("BAD_SIZING_INPUT", "conductivity ratio must be in (0, 1]")


def foil_thickness(mass_mg: float, area_cm2: float, density_g_cm3: float) -> float:
    """Thickness in um of a foil of given mass, area and density."""
    return (mass_mg * 1e-3) / (density_g_cm3 * area_cm2) * 1e4


def foil_mass(thickness_um: float, area_cm2: float, density_g_cm3: float) -> float:
    """Mass in mg of a foil of given thickness, area and density."""
    return thickness_um * 1e-4 * area_cm2 * density_g_cm3 * 1e3


def collector_min(inp: AnodeSizingInput) -> tuple[float, float]:
    """Minimum anode foil left after full discharge, as (um, mg).

    The reference collector thickness is scaled up by the inverse
    conductivity ratio so the foil keeps the same sheet resistance.
    """
    thickness = inp.reference_collector_thickness / inp.anode_to_reference_conductivity_ratio
    return thickness, foil_mass(thickness, inp.electrode_area, inp.anode_density)


def capacity_match(cathode_mass: float, cathode_cap: float, anode_cap: float) -> float:
    """Anode active mass (mg) holding the same charge as the cathode."""
    if not (cathode_cap > 0 and anode_cap > 0):
        raise LcaError("NONPOSITIVE_CAPACITY", "specific capacities must be positive")
    return cathode_mass * cathode_cap / anode_cap


@dataclass(frozen=True)
class AnodeSizing:
    collector_thickness: float  # um
    collector_mass: float  # mg
    active_mass: float  # mg
    total_mass: float  # mg
    prototype_mass: Optional[float] = None

    @property
    def at_or_above_prototype(self) -> Optional[bool]:
        if self.prototype_mass is None:
            return None
        return self.total_mass >= self.prototype_mass


def optimized_anode_mass(inp: AnodeSizingInput) -> float:
    return size_anode(inp).total_mass


def size_anode(inp: AnodeSizingInput, prototype_mass: Optional[float] = None) -> AnodeSizing:
    thickness, collector = collector_min(inp)
    active = capacity_match(inp.cathode_active_mass, inp.cathode_specific_capacity, inp.anode_specific_capacity)
    return AnodeSizing(thickness, collector, active, active + collector, prototype_mass)


def break_even_cycles(ced_per_wh: float, energy_return_per_cycle: float) -> int:
    """Smallest whole number of cycles whose returned energy covers the CED."""
    if not (math.isfinite(energy_return_per_cycle) and energy_return_per_cycle > 0):
        raise LcaError("NONPOSITIVE_RETURN", f"return per cycle {energy_return_per_cycle!r}")
    if not (math.isfinite(ced_per_wh) and ced_per_wh >= 0):
        raise LcaError("NEGATIVE_CED", f"ced {ced_per_wh!r}")
    q = ced_per_wh / energy_return_per_cycle
    nearest = round(q)
    # absorb division noise such as 3.0000000000000004
    if abs(q - nearest) <= 1e-12 * max(1.0, abs(q)):
        return int(nearest)
    return math.ceil(q)
