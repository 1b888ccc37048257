import copy
import os
from itertools import product

import yaml
from pymongo import MongoClient
from sacred import Experiment
from sacred.observers import MongoObserver, FileStorageObserver
from sacred.utils import apply_backspaces_and_linefeeds

from dce import config
from dce.utils.logger import logger
from dce.utils.errors import ConfigError

OBSERVERS = ('none', 'file', 'mongodb')


def main_wrapper(f_main, ex, curr_db_name, _run, mongo_url):
    """
    Wrapper for the main function of a tracked run.
    Ensures that the DB does not already contain a run with the same configuration.

    :param f_main: function
        f_main(ex, _run), see dce.utils.decorators.f_main
    :param ex: the experiment (an instance of the Experiment class)
    :param curr_db_name: str
        Name of the db in use
    :param _run: the run object for the current run
    """
    client = MongoClient(mongo_url)
    logger.info('db = {}'.format(curr_db_name))
    db = client[curr_db_name]
    duplicate_ex = check_for_completed_experiment(db, _run.config)
    if duplicate_ex is not None:
        raise ConfigError('Aborting due to a duplicate scenario run')
    return f_main(ex, _run)


def check_for_completed_experiment(db, config):
    return db['runs'].find_one({'config': config, 'status': 'COMPLETED'})


class SacredWrapper(object):
    """
    Base class for a Sacred Experiment.
    """
    def __init__(self, f_main, f_config, observer_type='none', log_dir=None,
                 mongo_url='mongodb://localhost:27017'):
        """
        :param f_main: function
            The main function for the run, f_main(ex, _run)
        :param f_config: dict or str
            The run configuration or a yaml file holding it
        :param observer_type: 'none', 'file' or 'mongodb'
        :param log_dir: str
            Directory of the file observer, defaults to the logs path
        :param mongo_url: str
            The url for MongoDB
        """
        if observer_type not in OBSERVERS:
            raise ConfigError('{} is not a valid type for a SACRED observer.'.format(observer_type))
        self.log_dir = log_dir if log_dir is not None else os.path.join(config['logs'], self.sacred_ex_name())

        ex = Experiment(self.sacred_ex_name(), interactive=True)
        ex.captured_out_filter = apply_backspaces_and_linefeeds

        if observer_type == 'mongodb':
            logger.info('Connecting to MongoDB at {}:{}'.format(mongo_url, self.sacred_db_name()))
            ex.observers.append(MongoObserver(url=mongo_url, db_name=self.sacred_db_name()))
        elif observer_type == 'file':
            os.makedirs(self.log_dir, exist_ok=True)
            ex.observers.append(FileStorageObserver(self.log_dir))

        if isinstance(f_config, (str, dict)):
            ex.add_config(f_config)
        else:
            raise ConfigError('A scenario run needs a config dict or a config file, got {}'.format(type(f_config)))

        @ex.main
        def ex_main(_run):
            if observer_type == 'mongodb':
                return main_wrapper(f_main, ex, self.sacred_db_name(), _run, mongo_url)
            return f_main(ex, _run)

        self.ex = ex

    def sacred_db_name(self):
        """
        This method should be overridden by child classes.
        Returns the Mongo DB name for this set of runs.
        """
        raise NotImplementedError

    def sacred_ex_name(self):
        """
        This method should be overridden by child classes.
        Returns the current experiment name.
        """
        raise NotImplementedError


class DCEExperiment(SacredWrapper):
    """
    Experiment used for every tracked scenario run.
    """
    def __init__(self, ex_name, db_name, **kwargs):
        """
        :param ex_name: Name of the experiment
        :param db_name: Name of the db where the results will be stored
        """
        self.ex_name = ex_name
        self.db_name = db_name
        super().__init__(**kwargs)

    def sacred_db_name(self):
        return self.db_name

    def sacred_ex_name(self):
        return self.ex_name


def load_grid(f_config):
    """
    Read a sweep file: a `base` scenario file name plus lists of values for dotted keys.

    :return: (base, {dotted key: list of values})
    """
    with open(f_config) as f:
        parameters = yaml.safe_load(f) or {}
    base = parameters.pop('base', None)
    if base is None:
        raise ConfigError('sweep file {} has no base scenario'.format(f_config))
    for k, v in parameters.items():
        if not isinstance(v, list) or len(v) == 0:
            raise ConfigError('sweep entry {} must be a non-empty list'.format(k))
    return base, parameters


def expand_grid(parameters):
    """
    Every combination of the listed values, as dicts sorted by key.
    """
    keys = list(parameters.keys())
    values = list(parameters.values())
    return [dict(sorted(zip(keys, vals))) for vals in product(*values)]


def run_grid_search(experimentclass, db_name, ex_name, f_main, f_config, observer_type, build_config, log_dir=None):
    """
    Run one tracked scenario for each combination of the sweep values.
    Each combination is stored as a separate run; they all share the same experiment name.

    :param f_config: str
        full path to the sweep file
    :param build_config: function
        (base, overrides) -> run configuration dict
    :return: list of the run results
    """
    base, parameters = load_grid(f_config)
    results = []
    for overrides in expand_grid(parameters):
        logger.info('grid point {}'.format(overrides))
        results.append(run_single_experiment(
            experimentclass=experimentclass,
            db_name=db_name,
            ex_name=ex_name,
            f_main=f_main,
            f_config=build_config(base, copy.deepcopy(overrides)),
            observer_type=observer_type,
            log_dir=log_dir))
    return results


def run_single_experiment(experimentclass, db_name, ex_name, f_main, f_config, observer_type, log_dir=None):
    """
    Run a single tracked scenario.

    see run_grid_search for the params.
    """
    experiment = experimentclass(
        db_name=db_name,
        ex_name=ex_name,
        f_main=f_main,
        f_config=f_config,
        observer_type=observer_type,
        log_dir=log_dir)
    return experiment.ex.run().result
