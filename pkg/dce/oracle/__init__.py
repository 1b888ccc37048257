from dce.oracle.checks import OracleReport, OracleSummary, run_suite, suite
