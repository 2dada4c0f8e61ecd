class PrecisionExhausted(ArithmeticError):
    """A quantity could not be certified at the available t-adic precision.

    Callers are expected to rebuild at higher precision and retry; the CLI
    does this automatically (doubling, three attempts).
    """


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagreed.

    This is a hard internal error: it signals a bug, never bad input.
    """
