# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from typing import ClassVar


class AuskitError(Exception):
    exit_code: ClassVar[int] = 1


class ParseError(AuskitError):
    """Malformed algebra file, module expression or configuration string."""

    exit_code = 2

    def __init__(self, msg: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        if line is not None and column is not None:
            msg = f"{msg} (line {line}, column {column})"
        elif column is not None:
            msg = f"{msg} (column {column})"
        super().__init__(msg)


class UnknownIdentifierError(ParseError):
    pass


class BadRelationError(ParseError):
    pass


class InputError(AuskitError):
    exit_code = 2


class NotFiniteDimensionalError(InputError):
    pass


class PreconditionError(InputError, ValueError):
    pass


class DimensionMismatchError(PreconditionError):
    pass


class AlgebraMismatchError(PreconditionError):
    pass


class TargetMismatchError(PreconditionError):
    pass


class NotDeterminedError(PreconditionError):
    pass


class CapExceededError(AuskitError):
    exit_code = 3

    def __init__(self, what: str, bound: int, cap: int) -> None:
        self.what = what
        self.bound = bound
        self.cap = cap
        super().__init__(f"{what}: would need {bound}, cap is {cap}")


class VerificationError(AuskitError):
    """A certificate failed. Carries the offending object as `witness`."""

    exit_code = 4

    def __init__(self, msg: str, witness: object = None) -> None:
        self.witness = witness
        super().__init__(msg)
