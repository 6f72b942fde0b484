"""Small hand-checkable databases and random generators shared by the tests."""
import numpy as np
from hypothesis import strategies as st

from mgslca.battery import ROLES, CellComponent, CellDesign, EvolutionSpec, PackDesign
from mgslca.dataio import FORMAT_VERSION, Dataset
from mgslca.inventory import Exchange, Flow, InventoryDatabase, Process
from mgslca.lcia import ImpactCategory, ImpactMethod, ImpactResult
from mgslca.scenario import ComparisonEntry, ReplaceProvider, ScaleExchange, Scenario, SetComponentMass
from mgslca.units import UNITS, get_unit

KWH = get_unit("kWh")
KG = get_unit("kg")


def product(fid, unit="kg"):
    return Flow(fid, fid, "product", get_unit(unit))


def emission(fid, unit="kg", compartment="air"):
    return Flow(fid, fid, "elementary", get_unit(unit), compartment)


def proc(pid, ref, inputs=(), emissions=(), ref_amount=1.0):
    exs = [Exchange(f, a, "input") for f, a in inputs]
    exs += [Exchange(f, a, "output") for f, a in emissions]
    return Process(pid, pid, Exchange(ref, ref_amount, "output"), tuple(exs))


def chain_db():
    """P: 1 kWh electricity, 0.5 kg CO2.  Q: 1 kg foil from 2 kWh, 0.1 kg CO2."""
    flows = (product("electricity", "kWh"), product("foil"), emission("co2"))
    return InventoryDatabase(
        flows,
        (
            proc("P", "electricity", emissions=[("co2", 0.5)]),
            proc("Q", "foil", inputs=[("electricity", 2.0)], emissions=[("co2", 0.1)]),
        ),
    )


def looped_db():
    """Electricity needs 0.1 kg foil per kWh, foil needs 2 kWh per kg."""
    flows = (product("electricity", "kWh"), product("foil"), emission("co2"))
    return InventoryDatabase(
        flows,
        (
            proc("elec", "electricity", inputs=[("foil", 0.1)], emissions=[("co2", 0.5)]),
            proc("foil-prod", "foil", inputs=[("electricity", 2.0)], emissions=[("co2", 0.1)]),
        ),
    )


_MASS_UNITS = ["kg", "g", "t"]


def random_db(rng: np.random.Generator, n_proc: int, n_elem: int = 6, loops: bool = False, max_inputs: int = 3):
    """Random valid database; acyclic unless ``loops`` adds weak back edges.

    Process ``i`` only draws on processes with a larger index, so the
    forward graph is a DAG. Back edges carry small coefficients so that
    truncated expansion converges quickly.
    """
    pflows = []
    for i in range(n_proc):
        pflows.append(Flow(f"prod{i:03d}", f"product {i}", "product", get_unit(rng.choice(_MASS_UNITS))))
    eflows = [
        Flow(f"elem{k:02d}", f"emission {k}", "elementary", get_unit(rng.choice(["kg", "g", "m3", "MJ"])), "air")
        for k in range(n_elem)
    ]
    procs = []
    hi = 0.3 if loops else 2.0
    for i in range(n_proc):
        ref_amount = float(rng.uniform(1.0, 2.0)) if loops else float(rng.uniform(0.5, 2.0))
        ref_base = ref_amount * pflows[i].unit.to_base

        def draw(j, c):
            # amount chosen so that c units (base) of j are used per base unit of i
            unit = None if rng.random() < 0.5 else get_unit(rng.choice(_MASS_UNITS))
            per = (unit or pflows[j].unit).to_base
            return Exchange(f"prod{j:03d}", c * ref_base / per, "input", unit)

        exs = []
        later = list(range(i + 1, n_proc))
        if later:
            k = int(rng.integers(0, min(max_inputs, len(later)) + 1))
            for j in rng.choice(later, size=k, replace=False):
                exs.append(draw(int(j), float(rng.uniform(0.0, hi))))
        if loops and i > 0 and rng.random() < 0.5:
            exs.append(draw(int(rng.integers(0, i)), float(rng.uniform(0.0, 0.1))))
        for k in rng.choice(n_elem, size=int(rng.integers(0, 3)), replace=False):
            exs.append(Exchange(f"elem{k:02d}", float(rng.uniform(0.0, 5.0)), "output"))
        procs.append(Process(f"p{i:03d}", f"process {i}", Exchange(f"prod{i:03d}", ref_amount, "output"), tuple(exs)))
    order = rng.permutation(n_proc)
    return InventoryDatabase(tuple(pflows + eflows), tuple(procs[i] for i in order))


def random_demand(rng: np.random.Generator, db: InventoryDatabase, max_entries: int = 3) -> dict:
    products = sorted(f.id for f in db.flows if f.is_product)
    k = int(rng.integers(1, max_entries + 1))
    picks = rng.choice(products, size=min(k, len(products)), replace=False)
    out = {str(p): float(rng.uniform(0.1, 10.0)) for p in picks}
    return out


def rel_close(a, b, rtol):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.max(np.abs(b))) if b.size else 0.0, 1e-300)
    return float(np.max(np.abs(a - b))) <= rtol * scale if a.size else True


# --- hypothesis strategy for whole datasets ---------------------------------


names = st.text(max_size=12)
amounts = st.floats(min_value=0.0, max_value=1e15, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-300, max_value=1e15, allow_nan=False, allow_infinity=False)
factors = st.floats(min_value=-1e15, max_value=1e15, allow_nan=False, allow_infinity=False)
_UNIT_SYMBOLS = sorted(UNITS)


def _ids(prefix, n):
    return [f"{prefix}{i}" for i in range(n)]


@st.composite
def datasets(draw):
    n_prod = draw(st.integers(1, 6))
    n_elem = draw(st.integers(0, 5))
    flows = []
    for fid in _ids("prod-", n_prod):
        flows.append(Flow(fid, draw(names), "product", UNITS[draw(st.sampled_from(_UNIT_SYMBOLS))]))
    for fid in _ids("elem-", n_elem):
        compartment = draw(st.text(min_size=1, max_size=8))
        flows.append(Flow(fid, draw(names), "elementary", UNITS[draw(st.sampled_from(_UNIT_SYMBOLS))], compartment))
    by_id = {f.id: f for f in flows}

    def same_dim_unit(fid):
        dim = by_id[fid].unit.dimension
        return draw(st.one_of(st.none(), st.sampled_from([u for u in UNITS.values() if u.dimension == dim])))

    # each of the first k product flows gets exactly one provider
    k = draw(st.integers(0, n_prod))
    provided = [f.id for f in flows[:k]]
    elems = [f.id for f in flows if not f.is_product]
    processes = []
    for i, ref in enumerate(provided):
        exs = []
        for fid in draw(st.lists(st.sampled_from(provided), max_size=3)):
            exs.append(Exchange(fid, draw(amounts), "input", same_dim_unit(fid)))
        if elems:
            for fid in draw(st.lists(st.sampled_from(elems), max_size=3)):
                exs.append(Exchange(fid, draw(amounts), draw(st.sampled_from(["input", "output"])), same_dim_unit(fid)))
        ref_ex = Exchange(ref, draw(positive), "output", same_dim_unit(ref))
        processes.append(Process(f"proc-{i}", draw(names), ref_ex, tuple(exs)))
    db = InventoryDatabase(tuple(flows), tuple(processes), draw(names), draw(names))

    methods = []
    for mid in _ids("method-", draw(st.integers(0, 2))):
        cats = []
        for cid in _ids("cat-", draw(st.integers(0, 3))):
            fac = draw(st.dictionaries(st.sampled_from(elems), factors)) if elems else {}
            cats.append(ImpactCategory(cid, draw(names), draw(names), fac))
        methods.append(ImpactMethod(mid, tuple(cats), draw(names)))

    products = [f.id for f in flows if f.is_product]
    cells = []
    for name in _ids("cell-", draw(st.integers(0, 3))):
        roles = draw(st.lists(st.sampled_from(ROLES), unique=True, max_size=len(ROLES)))
        comps = tuple(CellComponent(r, draw(st.sampled_from(products)), draw(amounts)) for r in roles)
        cells.append(CellDesign(name, comps, draw(positive)))

    packs = []
    for pid in _ids("pack-", draw(st.integers(0, 2))):
        a = draw(st.floats(0.01, 0.5))
        b = draw(st.floats(0.01, 0.45))
        optional = st.one_of(st.none(), st.sampled_from(products))
        packs.append(PackDesign(pid, a, b, 1.0 - a - b, draw(positive), draw(optional), draw(optional), draw(optional)))

    evolutions = []
    cell_names = [c.name for c in cells]
    for eid in _ids("evo-", draw(st.integers(0, 2))):
        roles = draw(st.permutations(ROLES))
        cut1 = draw(st.integers(0, len(roles)))
        cut2 = draw(st.integers(cut1, len(roles)))
        share = st.floats(0.0, 0.99)
        targets = {r: draw(share) for r in roles[cut1:cut2]}
        preserved = {r: draw(st.one_of(st.none(), share)) for r in roles[cut2:]}
        base = draw(st.sampled_from(cell_names)) if cell_names and draw(st.booleans()) else ""
        evolutions.append(
            EvolutionSpec(frozenset(roles[:cut1]), targets, preserved, eid, base, draw(st.one_of(st.none(), names)))
        )

    scenarios = []
    for sid in _ids("scenario-", draw(st.integers(0, 3))):
        overrides = []
        for _ in range(draw(st.integers(0, 3))):
            choice = draw(st.integers(0, 2))
            if choice == 0 and processes:
                overrides.append(ReplaceProvider(draw(st.sampled_from(products)), draw(st.sampled_from(processes)).id))
            elif choice == 1 and processes:
                p = draw(st.sampled_from(processes))
                overrides.append(ScaleExchange(p.id, draw(st.sampled_from([f.id for f in flows])), draw(amounts)))
            elif choice == 2 and cells:
                overrides.append(SetComponentMass(draw(st.sampled_from(cell_names)), draw(st.sampled_from(ROLES)), draw(amounts)))
        scenarios.append(Scenario(sid, tuple(overrides), draw(names)))

    comparisons = []
    for name in _ids("system-", draw(st.integers(0, 3))):
        impacts = None
        if methods and draw(st.booleans()):
            m = draw(st.sampled_from(methods))
            values = {c.id: draw(factors) for c in m.categories if draw(st.booleans())}
            impacts = ImpactResult(m.id, values, {})
        comparisons.append(ComparisonEntry(name, draw(positive), draw(positive), impacts))

    return Dataset(
        FORMAT_VERSION,
        db,
        tuple(methods),
        tuple(cells),
        tuple(packs),
        tuple(evolutions),
        tuple(scenarios),
        tuple(comparisons),
    )
