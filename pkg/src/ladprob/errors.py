"""Exception hierarchy shared by every module.

Each exception carries a short machine-readable ``code`` so that the CLI
can print one parsable line per failure.
"""

from __future__ import annotations


class LadProbError(Exception):
    code = "E_LADPROB"
    # True when the caller supplied malformed input rather than a valid
    # request that cannot be computed.
    bad_input = False


class ImpossibleConditionError(LadProbError, ZeroDivisionError):
    """The conditioning event has zero instances (denominator is 0)."""

    code = "E_IMPOSSIBLE"


class MissingSizeError(LadProbError, ValueError):
    code = "E_MISSING_SIZE"
    bad_input = True

    def __init__(self, case: str, field: str):
        super().__init__(f"case {case} requires size {field!r}")
        self.case = case
        self.field = field


class ProfileError(LadProbError, ValueError):
    code = "E_PROFILE"
    bad_input = True


class CapExceededError(LadProbError):
    code = "E_CAP"

    def __init__(self, message: str, required: int):
        super().__init__(f"{message} (would require {required} configurations)")
        self.required = required


class InfeasibleProfileError(LadProbError, ValueError):
    code = "E_INFEASIBLE"


class InstanceFormatError(LadProbError, ValueError):
    code = "E_FORMAT"
    bad_input = True

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.row = row
        self.column = column


class UnsatisfiableInstanceError(LadProbError):
    code = "E_UNSAT"

    def __init__(self, witness: tuple[int, int]):
        o, o2 = witness
        super().__init__(f"observations {o} and {o2} are identical but lie in different groups")
        self.witness = witness


class NotASolutionError(LadProbError, ValueError):
    code = "E_NOT_SOLUTION"


class BudgetError(LadProbError):
    code = "E_BUDGET"
