"""
Exceptions raised by the library. Every class carries the exit code the
command line front end returns when it escapes a command.
"""


class DCEError(Exception):
    exit_code = 1


class ConfigError(DCEError):
    """Invalid or inconsistent scenario / command line input."""
    exit_code = 2


class NonConvergenceError(DCEError):
    """A quadrature or extrapolation did not reach the requested tolerance."""
    exit_code = 3

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DivergentResponseError(DCEError):
    """
    A drive or spectrum reaches region IIb, where the kernels have no finite value
    and no finite external force can produce the motion.
    """
    exit_code = 4

    def __init__(self, q, omega, message=None):
        self.q = q
        self.omega = omega
        if message is None:
            message = 'divergent response at (q={:.9e}, omega={:.9e}): region IIb'.format(q, omega)
        super().__init__(message)


class OracleFailure(DCEError):
    exit_code = 5

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__('oracle checks failed: {}'.format(', '.join(self.failed)))
