from dce import logger
from dce.oracle.checks import run_suite
from dce.utils.decorators import cli_command
from dce.utils.errors import OracleFailure
from dce.utils.tables import write_table, write_text, to_json


@cli_command
def run_oracle(args):
    summary = run_suite(threads=args.threads)
    for line in summary.to_text().splitlines():
        logger.info(line)
    if args.format == 'json':
        write_text(to_json(summary.to_dict()) + '\n', args.out)
    else:
        write_table(summary.to_frame(), args.out, 'csv')
    if not summary.passed:
        raise OracleFailure(summary.failed)
