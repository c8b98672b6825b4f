"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Evaluation point or parameter outside the admissible domain."""


class PoleError(ValueError):
    """Function requested at a pole (e.g. gamma at a non-positive integer)."""


class ConvergenceError(RuntimeError):
    """A truncated series or iteration hit its budget before the cutoff."""


class PreconditionError(ValueError):
    """A documented operator precondition was violated."""


class HypothesisError(ValueError):
    """Inputs violate a hypothesis of the theorem backing the computation."""


class NoWitnessError(RuntimeError):
    """A sign-change scan found no witness point for a mean value identity."""


class PerturbationError(ValueError):
    """Candidate solution fails the approximate-solution admissibility check."""


class UnknownNameError(KeyError):
    """Lookup of a builtin scale function or identity id failed."""


class NearSingularWarning(UserWarning):
    """The inner integral order is close to zero; accuracy may degrade."""
