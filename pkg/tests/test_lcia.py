import math

import pytest
from helpers import chain_db, looped_db
from hypothesis import given, strategies as st

from mgslca.errors import LcaError
from mgslca.lcia import ImpactCategory, ImpactMethod, ced, characterize, contributions
from mgslca.solver import DemandVector, inventory_from_dict

GWP = ImpactCategory("GWP", "global warming", "kg CO2-eq", {"co2": 1.0, "ch4": 25.0})
METHOD = ImpactMethod("m", (GWP, ImpactCategory("ODP", "ozone", "kg CFC-11-eq", {"cfc": 1.0})))


def test_gwp_example():
    r = characterize(inventory_from_dict({"co2": 2.0, "ch4": 0.1}), METHOD)
    assert r.values["GWP"] == pytest.approx(4.5, rel=1e-15)
    assert r.coverage["GWP"] == 1.0
    assert r.values["ODP"] == 0.0


def test_zero_inventory():
    r = characterize(inventory_from_dict({"co2": 0.0, "ch4": 0.0}), METHOD)
    assert r.values == {"GWP": 0.0, "ODP": 0.0}


def test_uncharacterized_flow_lowers_coverage():
    g = inventory_from_dict({"co2": 2.0, "ch4": 0.1, "n2o": 7.0})
    r = characterize(g, METHOD)
    assert r.values["GWP"] == pytest.approx(4.5, rel=1e-15)
    assert r.coverage["GWP"] == pytest.approx(2 / 3)


def test_ced_single_flow():
    hard_coal = ImpactCategory("CED", "cumulative energy demand", "Wh", {"hard-coal": 8.14e3})
    assert ced(inventory_from_dict({"hard-coal": 1.0}), hard_coal) == pytest.approx(8140.0)
    assert ced(inventory_from_dict({"hard-coal": 0.0}), hard_coal) == 0.0


def test_non_finite_factor_rejected():
    with pytest.raises(LcaError):
        ImpactCategory("X", "x", "u", {"a": math.inf})


def test_chain_contributions():
    table = contributions(chain_db(), DemandVector({"foil": 1.0}), METHOD, {"electricity": ["P"], "foil": ["Q"]})
    assert table.totals["GWP"] == pytest.approx(1.1)
    shares = table.shares("GWP")
    # 2 kWh at 0.5 kg/kWh against 0.1 kg direct
    assert shares["electricity"] == pytest.approx(1.0 / 1.1, rel=1e-12)
    assert shares["foil"] == pytest.approx(0.1 / 1.1, rel=1e-12)
    assert round(shares["electricity"], 3) == 0.909
    assert table.hot_spot("GWP") == "electricity"
    assert table.zero_total == {"GWP": False, "ODP": True}
    assert table.shares("ODP") == {"electricity": 0.0, "foil": 0.0}


def test_background_attribution_in_loop():
    # foil is foreground, the looped electricity supply is background
    table = contributions(looped_db(), DemandVector({"foil": 1.0}), METHOD, {"foil": ["foil-prod"]})
    assert table.shares("GWP") == {"foil": pytest.approx(1.0, rel=1e-12)}
    assert table.row("GWP", "foil").value == pytest.approx(1.375, rel=1e-12)


def test_single_group_takes_everything():
    table = contributions(chain_db(), DemandVector({"foil": 1.0}), METHOD, {"all": ["P", "Q"]})
    assert table.shares("GWP") == {"all": 1.0}


@pytest.mark.parametrize(
    "grouping, code",
    [
        ({"a": ["P", "Q"], "b": ["Q"]}, "OVERLAPPING_GROUPS"),
        ({"a": ["P"]}, "UNGROUPED_FOREGROUND"),
        ({"a": ["Q", "Z"]}, "UNKNOWN_PROCESS"),
    ],
)
def test_grouping_errors(grouping, code):
    with pytest.raises(LcaError) as e:
        contributions(chain_db(), DemandVector({"foil": 1.0}), METHOD, grouping)
    assert e.value.code == code


dyadic = st.integers(min_value=0, max_value=2**20).map(lambda k: k / 1024)
amounts = st.dictionaries(st.sampled_from(["co2", "ch4", "cfc", "n2o"]), dyadic, min_size=1)


def _add(a, b):
    return inventory_from_dict({k: a.get(k, 0.0) + b.get(k, 0.0) for k in set(a) | set(b)})


@given(amounts, amounts)
def test_linearity_exact_on_dyadic_values(a, b):
    whole = characterize(_add(a, b), METHOD).values
    parts = [characterize(inventory_from_dict(x), METHOD).values for x in (a, b)]
    assert whole == {k: parts[0][k] + parts[1][k] for k in whole}


reals = st.dictionaries(
    st.sampled_from(["co2", "ch4", "cfc", "n2o"]), st.floats(min_value=0, max_value=1e6), min_size=1
)


@given(reals, reals)
def test_linearity_general(a, b):
    whole = characterize(_add(a, b), METHOD).values
    parts = [characterize(inventory_from_dict(x), METHOD).values for x in (a, b)]
    for k in whole:
        assert math.isclose(whole[k], parts[0][k] + parts[1][k], rel_tol=1e-12, abs_tol=0.0)


@given(reals, st.floats(min_value=1e-3, max_value=1e3))
def test_monotone_in_positive_factor(a, bump):
    g = dict(a)
    base = characterize(inventory_from_dict(g), METHOD).values["GWP"]
    g["co2"] = g.get("co2", 0.0) + bump
    assert characterize(inventory_from_dict(g), METHOD).values["GWP"] > base


def test_fixture_contributions_complete(mgs):
    from mgslca.scenario import battery_contributions

    for cell in mgs.cells:
        table = battery_contributions(mgs.database, cell, mgs.packs[0], mgs.methods[0])
        for cat in table.categories:
            vals = [table.row(cat, g).value for g in table.groups]
            assert math.fsum(vals) == pytest.approx(table.totals[cat], rel=1e-9)
            assert math.fsum(table.shares(cat).values()) == pytest.approx(1.0, abs=1e-9)
