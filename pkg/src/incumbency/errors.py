"""Exception hierarchy shared by the solver, simulator and CLI."""


class ModelError(ValueError):
    """Invalid model, schedule, or contest parameters."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its tolerance."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({extra})"


class QuadratureError(NumericalError):
    pass


class SolverError(NumericalError):
    pass
