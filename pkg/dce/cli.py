"""
Command line front end: `dce <command> [flags]`.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence, 4 drive in the
divergent region, 5 oracle failure.
"""
import sys

from dce.commands.capillary import run_capillary
from dce.commands.josephson import run_josephson
from dce.commands.kernel import run_kernel, run_region_map
from dce.commands.oracle import run_oracle
from dce.commands.scenario import run_scenario
from dce.utils import get_args
from dce.utils.logger import set_verbosity

COMMANDS = {
    'kernel': run_kernel,
    'region-map': run_region_map,
    'scenario': run_scenario,
    'josephson': run_josephson,
    'capillary': run_capillary,
    'oracle': run_oracle,
}


def main(argv=None):
    """
    :param argv: list of str, sys.argv[1:] when None
    :return: exit code
    """
    try:
        args = get_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    set_verbosity(args.verbose, args.quiet)
    return COMMANDS[args.command](args)


def main_entry():
    sys.exit(main())


if __name__ == '__main__':
    main_entry()
