# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

import enum
import typing as t

if t.TYPE_CHECKING:
    from collections.abc import Sequence


class ErrorCode(enum.IntEnum):
    UNKNOWN_ERROR_OCCURED = 0000

    # Lattice Errors
    NOT_SYMMETRIC = 1000
    ODD_DIAGONAL = 1001
    DEGENERATE = 1002
    NOT_DEFINITE = 1003
    NOT_ISOTROPIC = 1004
    NOT_PRIMITIVE = 1005
    ZERO_VECTOR = 1006
    NOT_IN_DUAL = 1007

    # Representation Errors
    NOT_FINITE_INDEX = 2000

    # Series Errors
    GROUP_MISMATCH = 3000

    # Special Function Errors
    NEGATIVE_ARGUMENT = 4000
    INADMISSIBLE = 4001

    # Hyperbolic Theta Errors
    RAY_NOT_IN_CONE = 5000
    RELATION_VIOLATED = 5001
    ISOTROPIC_RAY = 5002
    NOT_HYPERBOLIC = 5003

    # Toric Errors
    SINGULAR_SYSTEM = 6000
    FAN_INCOMPLETE = 6001
    AMBIENT_MISMATCH = 6002

    # Input Errors
    INPUT_SCHEMA = 7000


class ThetaToolsError(ValueError):
    code: ErrorCode = ErrorCode.UNKNOWN_ERROR_OCCURED


class NotSymmetricError(ThetaToolsError):
    code = ErrorCode.NOT_SYMMETRIC


class OddDiagonalError(ThetaToolsError):
    code = ErrorCode.ODD_DIAGONAL


class DegenerateError(ThetaToolsError):
    code = ErrorCode.DEGENERATE


class NotDefiniteError(ThetaToolsError):
    code = ErrorCode.NOT_DEFINITE


class NotIsotropicError(ThetaToolsError):
    code = ErrorCode.NOT_ISOTROPIC


class NotPrimitiveError(ThetaToolsError):
    code = ErrorCode.NOT_PRIMITIVE


class ZeroVectorError(ThetaToolsError):
    code = ErrorCode.ZERO_VECTOR


class NotInDualError(ThetaToolsError):
    code = ErrorCode.NOT_IN_DUAL


class NotFiniteIndexError(ThetaToolsError):
    code = ErrorCode.NOT_FINITE_INDEX


class GroupMismatchError(ThetaToolsError):
    code = ErrorCode.GROUP_MISMATCH


class NegativeArgumentError(ThetaToolsError):
    code = ErrorCode.NEGATIVE_ARGUMENT


class InadmissibleError(ThetaToolsError):
    code = ErrorCode.INADMISSIBLE


class RayNotInConeError(ThetaToolsError):
    code = ErrorCode.RAY_NOT_IN_CONE


class RelationViolatedError(ThetaToolsError):
    code = ErrorCode.RELATION_VIOLATED


class IsotropicRayError(ThetaToolsError):
    code = ErrorCode.ISOTROPIC_RAY


class NotHyperbolicError(ThetaToolsError):
    code = ErrorCode.NOT_HYPERBOLIC


class SingularSystemError(ThetaToolsError):
    code = ErrorCode.SINGULAR_SYSTEM


class FanIncompleteError(ThetaToolsError):
    code = ErrorCode.FAN_INCOMPLETE


class AmbientMismatchError(ThetaToolsError):
    code = ErrorCode.AMBIENT_MISMATCH


class InputSchemaError(ThetaToolsError):
    """Input document violates its schema.

    Every violation is reported with the JSON pointer of the offending value.
    """

    code = ErrorCode.INPUT_SCHEMA

    def __init__(self, violations: Sequence[tuple[str, str]]) -> None:
        self.violations = list(violations)
        msg = "; ".join(f"{pointer or '/'}: {message}" for pointer, message in self.violations)
        super().__init__(msg)
