from dce.utils.utils import get_args
from dce.utils.errors import DCEError, ConfigError, NonConvergenceError, DivergentResponseError, OracleFailure
from dce.utils.experiments import DCEExperiment, run_grid_search, run_single_experiment
