"""
Observables of scenario files, optionally tracked with sacred.
You can choose between:
    - evaluating a single scenario (--config <scenario>.yaml)
    - evaluating every combination of a sweep file (--grid_search --config <sweep>_gs.yaml)
"""
import copy
import os

import pandas as pd

from dce import config, logger
from dce.scenarios.config import ScenarioConfig, load_scenario, load_raw, scale_scenario, set_dotted, \
    quadrature_spec
from dce.scenarios.observables import evaluate_scenario, anchor_report, COLUMNS
from dce.utils.decorators import cli_command, f_main
from dce.utils.errors import ConfigError
from dce.utils.experiments import DCEExperiment, run_grid_search, run_single_experiment
from dce.utils.tables import write_table

EX_NAME = 'scenario'


def scenario_table(cfg, spec=None):
    """
    Observables of the scenario followed by one anchor_ratio row per anchor.
    """
    table = evaluate_scenario(cfg, spec)
    if cfg.anchors:
        anchors = anchor_report(table, cfg.anchors)
        for row in anchors.itertuples(index=False):
            if not row.within_factor:
                logger.warning('{}: {} = {:.3e} is not within a factor 3 of {:.1e}'
                               .format(cfg.name, row.observable, row.value, row.expected))
        extra = pd.DataFrame([('anchor_ratio.' + r.observable, r.ratio, '1') for r in anchors.itertuples(index=False)],
                             columns=COLUMNS)
        table = pd.concat([table, extra], ignore_index=True)
    return table


def from_records(records):
    table = pd.DataFrame(records, columns=COLUMNS)
    table['value'] = pd.to_numeric(table['value'])
    return table


def build_config(base, overrides):
    raw = copy.deepcopy(load_raw(base))
    for k, v in overrides.items():
        set_dotted(raw, k, v)
    return ScenarioConfig.from_dict(raw).to_dict()


def _resolve(path):
    if path is None:
        raise ConfigError('scenario needs --config')
    if not os.path.exists(path) and os.path.exists(os.path.join(config['config'], path)):
        return os.path.join(config['config'], path)
    if not os.path.exists(path):
        raise ConfigError('config file {} not found'.format(path))
    return path


@cli_command
def run_scenario(args):
    @f_main(args=args)
    def main(_run):
        cfg = ScenarioConfig.from_dict(dict(_run.config))
        return scenario_table(cfg, quadrature_spec(cfg, args.rel_tol))

    path = _resolve(args.config)
    if args.grid_search:
        results = run_grid_search(experimentclass=DCEExperiment,
                                  db_name=config['db'],
                                  ex_name=EX_NAME,
                                  f_main=main,
                                  f_config=path,
                                  observer_type=args.observer,
                                  build_config=build_config)
        tables = []
        for i, records in enumerate(results):
            t = from_records(records)
            t.insert(0, 'run', i)
            tables.append(t)
        table = pd.concat(tables, ignore_index=True)
    else:
        cfg = load_scenario(path)
        if args.scale != 1.:
            cfg = scale_scenario(cfg, args.scale)
        if args.observer == 'none':
            table = scenario_table(cfg, quadrature_spec(cfg, args.rel_tol))
        else:
            records = run_single_experiment(experimentclass=DCEExperiment,
                                            db_name=config['db'],
                                            ex_name=EX_NAME,
                                            f_main=main,
                                            f_config=cfg.to_dict(),
                                            observer_type=args.observer)
            table = from_records(records)
    write_table(table, args.out, args.format)
