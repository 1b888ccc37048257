from dce.scenarios.config import ScenarioConfig, load_scenario, scale_scenario, parse_quantity
from dce.scenarios.observables import evaluate_scenario, anchor_report, plate_mass
