"""Scenario schema: loading, validation, defaults, and round-trip emission.

A scenario is a YAML document (shipped files use the `.scenario` extension)
describing terminal geometry, equipment counts, yard blocks, stochastic input
distributions, the policy set, and the horizon.  Validation collects every
problem with its key path instead of stopping at the first.

Distribution specs are maps with a `dist` key::

    {dist: constant, value: 4.2}
    {dist: uniform, low: 2, high: 4}
    {dist: exponential, mean: 306}
    {dist: triangular, low: 120, mode: 200, high: 300}
    {dist: empirical, table: [[value, weight], ...]}
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

import yaml

from .entities import CATEGORIES, DISCHARGE_CATEGORIES
from .policies import PolicySet, validate_policy_set
from .randomness import Distribution, DistributionError

SCHEMA_VERSION = 1
DISTANCE_CLASSES = ("near", "mid", "far")
CRANE_GROUPS = ("rtg", "top_lift")
BUILTIN_SCENARIOS = ("act", "act-baseline")


class ScenarioError(Exception):
    """Scenario parse or validation failure; `errors` lists every problem."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class BlockSpec:
    id: str
    category: str
    capacity: int
    distance_class: str
    crane_group: str


@dataclass(frozen=True)
class FixedShip:
    """A deterministic arrival, used instead of stochastic generation."""

    arrival_min: float
    length_m: float
    manifest: tuple[tuple[str, int], ...]  # (category, count) pairs
    load: int = 0

    def manifest_total(self) -> int:
        return sum(count for _cat, count in self.manifest)


@dataclass(frozen=True)
class ArrivalsSpec:
    interarrival_min: Distribution | None
    ship_length_m: Distribution
    moves_per_meter: float
    forty_foot_share: float
    category_mix: tuple[tuple[str, float], ...]
    export_lead_time_h: float

    def mix(self) -> dict[str, float]:
        return dict(self.category_mix)


@dataclass(frozen=True)
class DurationsSpec:
    quay_cycle_min: Distribution
    dedicated_quay_cycle_min: Distribution | None
    yard_cycle_min: Distribution
    truck_travel_min: tuple[tuple[str, Distribution], ...]  # per distance class
    import_dwell_min: Distribution

    def travel(self) -> dict[str, Distribution]:
        return dict(self.truck_travel_min)


@dataclass(frozen=True)
class ScenarioConfig:
    schema_version: int
    name: str
    quay_length_m: float
    berth_clearance_m: float
    quay_cranes: int
    yard_cranes_rtg: int
    trucks: int
    top_lift_group: int
    horizon_hours: float
    arrivals: ArrivalsSpec
    durations: DurationsSpec
    blocks: tuple[BlockSpec, ...]
    policies: PolicySet
    fixed_ships: tuple[FixedShip, ...] | None = None
    metadata: tuple[tuple[str, float], ...] = ()

    def blocks_for(self, category: str) -> list[BlockSpec]:
        return [block for block in self.blocks if block.category == category]

    def rtg_blocks(self) -> list[BlockSpec]:
        return [block for block in self.blocks if block.crane_group == "rtg"]


# --- parsing helpers --------------------------------------------------------

def _is_num(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class _Collector:
    def __init__(self) -> None:
        self.errors: list[str] = []

    def add(self, path: str, message: str) -> None:
        self.errors.append(f"{path}: {message}")

    def number(self, mapping: dict, key: str, path: str, *, default=None,
               required: bool = True, minimum=None, strict_min=None):
        if key not in mapping:
            if required:
                self.add(f"{path}.{key}", "missing required key")
            return default
        value = mapping[key]
        if not _is_num(value):
            self.add(f"{path}.{key}", f"expected a number, got {value!r}")
            return default
        if minimum is not None and value < minimum:
            self.add(f"{path}.{key}", f"must be >= {minimum}, got {value}")
            return default
        if strict_min is not None and value <= strict_min:
            self.add(f"{path}.{key}", f"must be > {strict_min}, got {value}")
            return default
        return value

    def integer(self, mapping: dict, key: str, path: str, *, default=None,
                required: bool = True, minimum=None):
        value = self.number(mapping, key, path, default=default,
                            required=required, minimum=minimum)
        if value is None:
            return default
        if isinstance(value, float) and not value.is_integer():
            self.add(f"{path}.{key}", f"expected an integer, got {value!r}")
            return default
        return int(value)

    def mapping(self, parent: dict, key: str, path: str, *, required: bool = True):
        if key not in parent:
            if required:
                self.add(f"{path}.{key}" if path else key, "missing required section")
            return None
        value = parent[key]
        if not isinstance(value, dict):
            self.add(f"{path}.{key}" if path else key,
                     f"expected a mapping, got {type(value).__name__}")
            return None
        return value


def _parse_distribution(node, path: str, errs: _Collector) -> Distribution | None:
    if not isinstance(node, dict) or "dist" not in node:
        errs.add(path, "expected a distribution mapping with a 'dist' key")
        return None
    family = node["dist"]
    try:
        if family == "constant":
            return Distribution.constant(node["value"])
        if family == "uniform":
            return Distribution.uniform(node["low"], node["high"])
        if family == "exponential":
            return Distribution.exponential(node["mean"])
        if family == "triangular":
            return Distribution.triangular(node["low"], node["mode"], node["high"])
        if family == "empirical":
            return Distribution.empirical([(v, w) for v, w in node["table"]])
    except KeyError as exc:
        errs.add(path, f"missing distribution parameter {exc.args[0]!r}")
        return None
    except (DistributionError, TypeError, ValueError) as exc:
        errs.add(path, str(exc))
        return None
    errs.add(path, f"unknown distribution family {family!r}")
    return None


def _emit_distribution(dist: Distribution) -> dict:
    p = dist.params
    if dist.family == "constant":
        return {"dist": "constant", "value": p[0]}
    if dist.family == "uniform":
        return {"dist": "uniform", "low": p[0], "high": p[1]}
    if dist.family == "exponential":
        return {"dist": "exponential", "mean": p[0]}
    if dist.family == "triangular":
        return {"dist": "triangular", "low": p[0], "mode": p[1], "high": p[2]}
    return {"dist": "empirical", "table": [[v, w] for v, w in p]}


def _parse_arrivals(root: dict, errs: _Collector) -> ArrivalsSpec | None:
    node = errs.mapping(root, "arrivals", "")
    if node is None:
        return None
    interarrival = None
    if node.get("interarrival_min") is not None:
        interarrival = _parse_distribution(
            node["interarrival_min"], "arrivals.interarrival_min", errs)
    length = None
    if "ship_length_m" not in node:
        errs.add("arrivals.ship_length_m", "missing required key")
    else:
        length = _parse_distribution(node["ship_length_m"], "arrivals.ship_length_m", errs)
    moves_per_meter = errs.number(node, "moves_per_meter", "arrivals", strict_min=0.0)
    forty = errs.number(node, "forty_foot_share", "arrivals",
                        default=0.0, required=False, minimum=0.0)
    if forty is not None and forty > 1.0:
        errs.add("arrivals.forty_foot_share", f"must be <= 1, got {forty}")
    lead = errs.number(node, "export_lead_time_h", "arrivals",
                       default=24.0, required=False, minimum=0.0)

    mix_node = errs.mapping(node, "category_mix", "arrivals")
    mix: list[tuple[str, float]] = []
    if mix_node is not None:
        for key, value in mix_node.items():
            if key not in CATEGORIES:
                errs.add(f"arrivals.category_mix.{key}",
                         f"unknown category (known: {', '.join(CATEGORIES)})")
                continue
            if not _is_num(value) or value < 0:
                errs.add(f"arrivals.category_mix.{key}",
                         f"expected a share >= 0, got {value!r}")
                continue
            mix.append((key, float(value)))
        if mix and sum(share for _c, share in mix) <= 0:
            errs.add("arrivals.category_mix", "shares must sum to a positive value")

    if errs.errors or length is None or moves_per_meter is None:
        return None
    return ArrivalsSpec(
        interarrival_min=interarrival,
        ship_length_m=length,
        moves_per_meter=float(moves_per_meter),
        forty_foot_share=float(forty),
        category_mix=tuple(sorted(mix)),
        export_lead_time_h=float(lead),
    )


def _parse_durations(root: dict, errs: _Collector) -> DurationsSpec | None:
    node = errs.mapping(root, "durations", "")
    if node is None:
        return None
    parsed: dict[str, Distribution | None] = {}
    for key in ("quay_cycle_min", "yard_cycle_min", "import_dwell_min"):
        if key not in node:
            errs.add(f"durations.{key}", "missing required key")
            parsed[key] = None
        else:
            parsed[key] = _parse_distribution(node[key], f"durations.{key}", errs)
    dedicated = None
    if node.get("dedicated_quay_cycle_min") is not None:
        dedicated = _parse_distribution(
            node["dedicated_quay_cycle_min"], "durations.dedicated_quay_cycle_min", errs)

    travel_node = errs.mapping(node, "truck_travel_min", "durations")
    travel: list[tuple[str, Distribution]] = []
    if travel_node is not None:
        for cls in DISTANCE_CLASSES:
            if cls not in travel_node:
                errs.add(f"durations.truck_travel_min.{cls}", "missing distance class")
                continue
            dist = _parse_distribution(
                travel_node[cls], f"durations.truck_travel_min.{cls}", errs)
            if dist is not None:
                travel.append((cls, dist))
        for cls in travel_node:
            if cls not in DISTANCE_CLASSES:
                errs.add(f"durations.truck_travel_min.{cls}",
                         f"unknown distance class (known: {', '.join(DISTANCE_CLASSES)})")

    if errs.errors or any(parsed[k] is None for k in parsed):
        return None
    return DurationsSpec(
        quay_cycle_min=parsed["quay_cycle_min"],
        dedicated_quay_cycle_min=dedicated,
        yard_cycle_min=parsed["yard_cycle_min"],
        truck_travel_min=tuple(travel),
        import_dwell_min=parsed["import_dwell_min"],
    )


def _parse_blocks(root: dict, errs: _Collector) -> tuple[BlockSpec, ...]:
    node = root.get("blocks")
    if not isinstance(node, list) or not node:
        errs.add("blocks", "expected a non-empty list of block mappings")
        return ()
    blocks: list[BlockSpec] = []
    seen: set[str] = set()
    for index, raw in enumerate(node):
        path = f"blocks[{index}]"
        if not isinstance(raw, dict):
            errs.add(path, "expected a mapping")
            continue
        block_id = raw.get("id")
        if not isinstance(block_id, str) or not block_id:
            errs.add(f"{path}.id", "expected a non-empty string")
            continue
        if block_id in seen:
            errs.add(f"{path}.id", f"duplicate block id {block_id!r}")
            continue
        seen.add(block_id)
        category = raw.get("category")
        if category not in CATEGORIES:
            errs.add(f"{path}.category",
                     f"unknown category {category!r} (known: {', '.join(CATEGORIES)})")
            continue
        capacity = errs.integer(raw, "capacity", path, minimum=1)
        distance = raw.get("distance", "mid")
        if distance not in DISTANCE_CLASSES:
            errs.add(f"{path}.distance",
                     f"unknown distance class {distance!r} "
                     f"(known: {', '.join(DISTANCE_CLASSES)})")
            continue
        crane_group = raw.get("crane", "rtg")
        if crane_group not in CRANE_GROUPS:
            errs.add(f"{path}.crane",
                     f"unknown crane group {crane_group!r} "
                     f"(known: {', '.join(CRANE_GROUPS)})")
            continue
        if capacity is None:
            continue
        blocks.append(BlockSpec(block_id, category, capacity, distance, crane_group))
    return tuple(blocks)


def _parse_policies(root: dict, errs: _Collector) -> PolicySet:
    node = root.get("policies")
    if node is None:
        return PolicySet()
    if not isinstance(node, dict):
        errs.add("policies", "expected a mapping")
        return PolicySet()
    kwargs = {}
    for key, attr in (("berth", "berth"), ("crane", "crane"),
                      ("truck", "truck"), ("storage", "storage")):
        if key in node:
            kwargs[attr] = node[key]
    if "max_cranes_per_ship" in node:
        value = errs.integer(node, "max_cranes_per_ship", "policies", minimum=1)
        if value is not None:
            kwargs["max_cranes_per_ship"] = value
    if "crane_moves_quantum" in node:
        value = errs.integer(node, "crane_moves_quantum", "policies", minimum=1)
        if value is not None:
            kwargs["crane_moves_quantum"] = value
    if node.get("long_ship_threshold_m") is not None:
        value = errs.number(node, "long_ship_threshold_m", "policies", strict_min=0.0)
        if value is not None:
            kwargs["long_ship_threshold_m"] = float(value)
    try:
        policy_set = PolicySet(**kwargs)
    except TypeError as exc:
        errs.add("policies", str(exc))
        return PolicySet()
    for problem in validate_policy_set(policy_set):
        errs.errors.append(problem)
    return policy_set


def _parse_fixed_ships(root: dict, errs: _Collector) -> tuple[FixedShip, ...] | None:
    node = root.get("fixed_ships")
    if node is None:
        return None
    if not isinstance(node, list):
        errs.add("fixed_ships", "expected a list")
        return None
    ships: list[FixedShip] = []
    for index, raw in enumerate(node):
        path = f"fixed_ships[{index}]"
        if not isinstance(raw, dict):
            errs.add(path, "expected a mapping")
            continue
        arrival = errs.number(raw, "arrival_min", path, minimum=0.0)
        length = errs.number(raw, "length_m", path, strict_min=0.0)
        load = errs.integer(raw, "load", path, default=0, required=False, minimum=0)
        manifest_node = raw.get("manifest", {})
        manifest: list[tuple[str, int]] = []
        if not isinstance(manifest_node, dict):
            errs.add(f"{path}.manifest", "expected a mapping of category to count")
        else:
            for category, count in manifest_node.items():
                if category not in DISCHARGE_CATEGORIES:
                    errs.add(f"{path}.manifest.{category}",
                             "manifest categories must be one of "
                             f"{', '.join(DISCHARGE_CATEGORIES)}")
                    continue
                if not isinstance(count, int) or count < 0:
                    errs.add(f"{path}.manifest.{category}",
                             f"expected a count >= 0, got {count!r}")
                    continue
                manifest.append((category, count))
        if arrival is None or length is None:
            continue
        ships.append(FixedShip(
            arrival_min=float(arrival),
            length_m=float(length),
            manifest=tuple(sorted(manifest)),
            load=int(load),
        ))
    ships.sort(key=lambda s: s.arrival_min)
    return tuple(ships)


def _cross_validate(config: ScenarioConfig, errs: _Collector) -> None:
    # every category the mix can generate needs at least one matching block
    mix = config.arrivals.mix()
    for category, share in sorted(mix.items()):
        if share > 0 and not config.blocks_for(category):
            errs.add("blocks", f"no block serves category {category!r} "
                               "but the category mix generates it")
    # the RTG count is one crane per rtg block
    rtg_blocks = len(config.rtg_blocks())
    if config.yard_cranes_rtg != rtg_blocks:
        errs.add("equipment.yard_cranes_rtg",
                 f"must equal the number of rtg blocks ({rtg_blocks}), "
                 f"got {config.yard_cranes_rtg}")
    if any(block.crane_group == "top_lift" for block in config.blocks) \
            and config.top_lift_group < 1:
        errs.add("equipment.top_lift_group",
                 "must be >= 1 because top_lift blocks exist")
    # a ship longer than the quay can never berth: fail at load time
    longest = config.arrivals.ship_length_m.max_value
    if longest > config.quay_length_m:
        errs.add("arrivals.ship_length_m",
                 f"maximum ship length {longest} m exceeds the "
                 f"{config.quay_length_m} m quay")
    if config.fixed_ships:
        for index, ship in enumerate(config.fixed_ships):
            if ship.length_m > config.quay_length_m:
                errs.add(f"fixed_ships[{index}].length_m",
                         f"ship length {ship.length_m} m exceeds the "
                         f"{config.quay_length_m} m quay")


def load_scenario(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document; raises ScenarioError."""
    errs = _Collector()
    try:
        root = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError([f"parse error: {exc}"]) from exc
    if not isinstance(root, dict):
        raise ScenarioError(["document root must be a mapping"])

    schema_version = errs.integer(root, "schema_version", "", default=SCHEMA_VERSION,
                                  required=False, minimum=1)
    if schema_version is not None and schema_version != SCHEMA_VERSION:
        errs.add("schema_version",
                 f"unsupported version {schema_version} (supported: {SCHEMA_VERSION})")
    name = root.get("name", "scenario")
    if not isinstance(name, str) or not name:
        errs.add("name", "expected a non-empty string")
        name = "scenario"

    terminal = errs.mapping(root, "terminal", "")
    quay_length = clearance = None
    if terminal is not None:
        quay_length = errs.number(terminal, "quay_length_m", "terminal", strict_min=0.0)
        clearance = errs.number(terminal, "berth_clearance_m", "terminal",
                                default=10.0, required=False, minimum=0.0)

    equipment = errs.mapping(root, "equipment", "")
    quay_cranes = yard_cranes = trucks = top_lift = None
    if equipment is not None:
        quay_cranes = errs.integer(equipment, "quay_cranes", "equipment", minimum=0)
        yard_cranes = errs.integer(equipment, "yard_cranes_rtg", "equipment", minimum=0)
        trucks = errs.integer(equipment, "trucks", "equipment", minimum=0)
        top_lift = errs.integer(equipment, "top_lift_group", "equipment",
                                default=0, required=False, minimum=0)

    horizon = errs.number(root, "horizon_hours", "", strict_min=0.0)
    arrivals = _parse_arrivals(root, errs)
    durations = _parse_durations(root, errs)
    blocks = _parse_blocks(root, errs)
    policy_set = _parse_policies(root, errs)
    fixed_ships = _parse_fixed_ships(root, errs)

    metadata_node = root.get("metadata", {})
    metadata: list[tuple[str, float]] = []
    if isinstance(metadata_node, dict):
        for key, value in metadata_node.items():
            if _is_num(value):
                metadata.append((str(key), float(value)))
            else:
                errs.add(f"metadata.{key}", f"expected a number, got {value!r}")
    elif metadata_node:
        errs.add("metadata", "expected a mapping")

    if errs.errors:
        raise ScenarioError(errs.errors)

    config = ScenarioConfig(
        schema_version=SCHEMA_VERSION,
        name=name,
        quay_length_m=float(quay_length),
        berth_clearance_m=float(clearance),
        quay_cranes=quay_cranes,
        yard_cranes_rtg=yard_cranes,
        trucks=trucks,
        top_lift_group=top_lift,
        horizon_hours=float(horizon),
        arrivals=arrivals,
        durations=durations,
        blocks=blocks,
        policies=policy_set,
        fixed_ships=fixed_ships,
        metadata=tuple(sorted(metadata)),
    )
    _cross_validate(config, errs)
    if errs.errors:
        raise ScenarioError(errs.errors)
    return config


def load_scenario_file(path: str | Path) -> ScenarioConfig:
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def builtin_scenario_text(name: str) -> str:
    """Text of a scenario shipped with the package ('act', 'act-baseline')."""
    if name not in BUILTIN_SCENARIOS:
        raise ScenarioError(
            [f"unknown builtin scenario {name!r} (known: {', '.join(BUILTIN_SCENARIOS)})"])
    return resources.files("portsim.data").joinpath(f"{name}.scenario").read_text("utf-8")


def load_builtin_scenario(name: str) -> ScenarioConfig:
    return load_scenario(builtin_scenario_text(name))


def emit_scenario(config: ScenarioConfig) -> str:
    """Serialize a config back to YAML; load(emit(c)) == c."""
    policies: dict = {
        "berth": config.policies.berth,
        "crane": config.policies.crane,
        "max_cranes_per_ship": config.policies.max_cranes_per_ship,
        "crane_moves_quantum": config.policies.crane_moves_quantum,
        "truck": config.policies.truck,
        "storage": config.policies.storage,
    }
    if config.policies.long_ship_threshold_m is not None:
        policies["long_ship_threshold_m"] = config.policies.long_ship_threshold_m
    doc: dict = {
        "schema_version": config.schema_version,
        "name": config.name,
        "terminal": {
            "quay_length_m": config.quay_length_m,
            "berth_clearance_m": config.berth_clearance_m,
        },
        "equipment": {
            "quay_cranes": config.quay_cranes,
            "yard_cranes_rtg": config.yard_cranes_rtg,
            "trucks": config.trucks,
            "top_lift_group": config.top_lift_group,
        },
        "horizon_hours": config.horizon_hours,
        "arrivals": {
            "interarrival_min": (
                _emit_distribution(config.arrivals.interarrival_min)
                if config.arrivals.interarrival_min is not None else None
            ),
            "ship_length_m": _emit_distribution(config.arrivals.ship_length_m),
            "moves_per_meter": config.arrivals.moves_per_meter,
            "forty_foot_share": config.arrivals.forty_foot_share,
            "export_lead_time_h": config.arrivals.export_lead_time_h,
            "category_mix": dict(config.arrivals.category_mix),
        },
        "durations": {
            "quay_cycle_min": _emit_distribution(config.durations.quay_cycle_min),
            "dedicated_quay_cycle_min": (
                _emit_distribution(config.durations.dedicated_quay_cycle_min)
                if config.durations.dedicated_quay_cycle_min is not None else None
            ),
            "yard_cycle_min": _emit_distribution(config.durations.yard_cycle_min),
            "truck_travel_min": {
                cls: _emit_distribution(dist)
                for cls, dist in config.durations.truck_travel_min
            },
            "import_dwell_min": _emit_distribution(config.durations.import_dwell_min),
        },
        "blocks": [
            {"id": b.id, "category": b.category, "capacity": b.capacity,
             "distance": b.distance_class, "crane": b.crane_group}
            for b in config.blocks
        ],
        "policies": policies,
        "metadata": dict(config.metadata),
    }
    if config.fixed_ships is not None:
        doc["fixed_ships"] = [
            {"arrival_min": s.arrival_min, "length_m": s.length_m,
             "manifest": dict(s.manifest), "load": s.load}
            for s in config.fixed_ships
        ]
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)
