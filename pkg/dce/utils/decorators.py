from functools import wraps

from dce import logger
from dce.utils.errors import DCEError, ConfigError
from dce.utils.tables import json_safe


def cli_command(command):
    """
    Decorator for the command line entry points. The wrapped function returns the
    process exit code: 0 on success, the exit code of the DCEError it raised otherwise.
    ValueErrors raised by bad command line input map to ConfigError.
    """
    @wraps(command)
    def decorator(args):
        try:
            command(args)
        except DCEError as e:
            logger.error(str(e))
            return e.exit_code
        except ValueError as e:
            logger.error(str(e))
            return ConfigError.exit_code
        return 0

    return decorator


def f_main(args=None):
    """
    Decorator for the main function of a tracked scenario run.
        - updates the command line args with the run configuration
        - stores the observables table of the run in _run.info['observables']
    """
    def callable_wrapper(main_func):
        @wraps(main_func)
        def decorator(ex, _run):
            if args is not None:
                vars(args).update(scenario=dict(_run.config))
            table = main_func(_run)
            records = json_safe(table)
            _run.info['observables'] = records
            logger.info('run {} stored {} observables'.format(_run._id, len(records)))
            return records

        return decorator

    return callable_wrapper
