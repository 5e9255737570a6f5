import copy

import pytest
import yaml

from portsim import build_report, load_builtin_scenario, load_scenario, simulate

# A minimal valid scenario document; tests mutate copies of it.
BASE_DOC = {
    "schema_version": 1,
    "name": "mini",
    "terminal": {"quay_length_m": 530, "berth_clearance_m": 10},
    "equipment": {"quay_cranes": 2, "yard_cranes_rtg": 1, "trucks": 5,
                  "top_lift_group": 0},
    "horizon_hours": 24,
    "arrivals": {
        "interarrival_min": {"dist": "exponential", "mean": 300},
        "ship_length_m": {"dist": "triangular", "low": 120, "mode": 200, "high": 300},
        "moves_per_meter": 0.5,
        "forty_foot_share": 0.0,
        "export_lead_time_h": 6,
        "category_mix": {"import": 1.0},
    },
    "durations": {
        "quay_cycle_min": {"dist": "constant", "value": 2.0},
        "yard_cycle_min": {"dist": "constant", "value": 3.0},
        "truck_travel_min": {
            "near": {"dist": "constant", "value": 1.0},
            "mid": {"dist": "constant", "value": 2.0},
            "far": {"dist": "constant", "value": 3.0},
        },
        "import_dwell_min": {"dist": "constant", "value": 600},
    },
    "blocks": [
        {"id": "C1", "category": "import", "capacity": 500,
         "distance": "mid", "crane": "rtg"},
    ],
    "policies": {},
}


def make_doc(**overrides) -> dict:
    doc = copy.deepcopy(BASE_DOC)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(doc.get(key), dict):
            doc[key].update(value)
        else:
            doc[key] = value
    return doc


def make_scenario(**overrides):
    return load_scenario(yaml.safe_dump(make_doc(**overrides)))


@pytest.fixture(scope="session")
def act_scenario():
    return load_builtin_scenario("act")


@pytest.fixture(scope="session")
def baseline_scenario():
    return load_builtin_scenario("act-baseline")


@pytest.fixture(scope="session")
def act_results(act_scenario):
    """30 seeded replications of the shipped ACT scenario, reused across tests."""
    out = []
    for seed in range(1, 31):
        result = simulate(act_scenario, seed)
        out.append((result, build_report(result, act_scenario)))
    return out
