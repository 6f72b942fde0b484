"""Linear units of measure grouped by dimension.

Every unit converts to the base unit of its dimension with a single positive
factor: kg, Wh, m2, m, m3 and item.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LcaError

DIMENSIONS = ("mass", "energy", "area", "length", "volume", "amount")

BASE_SYMBOLS = {
    "mass": "kg",
    "energy": "Wh",
    "area": "m2",
    "length": "m",
    "volume": "m3",
    "amount": "item",
}


@dataclass(frozen=True)
class Unit:
    symbol: str
    dimension: str
    to_base: float

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise LcaError("BAD_UNIT", f"unknown dimension {self.dimension!r}")
        if not (math.isfinite(self.to_base) and self.to_base > 0):
            raise LcaError("BAD_UNIT", f"{self.symbol}: to_base must be positive")


_DEFINITIONS = [
    # mass
    ("kg", "mass", 1.0),
    ("g", "mass", 1e-3),
    ("mg", "mass", 1e-6),
    ("t", "mass", 1e3),
    # energy
    ("Wh", "energy", 1.0),
    ("mWh", "energy", 1e-3),
    ("kWh", "energy", 1e3),
    ("MWh", "energy", 1e6),
    ("J", "energy", 1.0 / 3600.0),
    ("kJ", "energy", 1e3 / 3600.0),
    ("MJ", "energy", 1e6 / 3600.0),
    ("GJ", "energy", 1e9 / 3600.0),
    # area
    ("m2", "area", 1.0),
    ("cm2", "area", 1e-4),
    ("mm2", "area", 1e-6),
    # length
    ("m", "length", 1.0),
    ("cm", "length", 1e-2),
    ("mm", "length", 1e-3),
    ("um", "length", 1e-6),
    ("km", "length", 1e3),
    # volume
    ("m3", "volume", 1.0),
    ("L", "volume", 1e-3),
    ("cm3", "volume", 1e-6),
    # amount
    ("item", "amount", 1.0),
]

_ALIASES = {
    "m²": "m2",
    "cm²": "cm2",
    "mm²": "mm2",
    "m³": "m3",
    "cm³": "cm3",
    "µm": "um",
    "μm": "um",
    "l": "L",
    "p": "item",
    "unit": "item",
}

UNITS: dict[str, Unit] = {sym: Unit(sym, dim, f) for sym, dim, f in _DEFINITIONS}


def get_unit(symbol: str) -> Unit:
    """Look up a unit by symbol (a few typographic aliases are accepted)."""
    key = _ALIASES.get(symbol, symbol)
    try:
        return UNITS[key]
    except (KeyError, TypeError):
        raise LcaError("BAD_UNIT", f"unknown unit {symbol!r}") from None


def base_unit(dimension: str) -> Unit:
    return UNITS[BASE_SYMBOLS[dimension]]


def _as_unit(u: Unit | str) -> Unit:
    return u if isinstance(u, Unit) else get_unit(u)


def convert_amount(x: float, from_unit: Unit | str, to_unit: Unit | str) -> float:
    """Convert ``x`` between two units of the same dimension.

    >>> round(convert_amount(1.81, "MJ", "Wh"), 2)
    502.78
    """
    src, dst = _as_unit(from_unit), _as_unit(to_unit)
    if src.dimension != dst.dimension:
        raise LcaError(
            "DIMENSION_MISMATCH",
            f"cannot convert {src.symbol} ({src.dimension}) to {dst.symbol} ({dst.dimension})",
        )
    if src.to_base == dst.to_base:
        return x
    return x * src.to_base / dst.to_base


def to_base(x: float, unit: Unit | str) -> float:
    u = _as_unit(unit)
    return x * u.to_base
