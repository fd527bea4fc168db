# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

import argparse
import contextlib
import enum
import json
import pathlib
import re
import sys
import typing as t
from fractions import Fraction

import loguru
import mpmath
import pydantic
import sympy

from toric_theta_tools.__version__ import VERSION
from toric_theta_tools.constants import Precision
from toric_theta_tools.constants import Tolerances
from toric_theta_tools.error_codes import ErrorCode
from toric_theta_tools.error_codes import InputSchemaError
from toric_theta_tools.error_codes import ThetaToolsError
from toric_theta_tools.hurwitz import hurwitz_H
from toric_theta_tools.hyperbolic import completion_report
from toric_theta_tools.hyperbolic import theta_plus
from toric_theta_tools.hyperbolic import verify_transformations
from toric_theta_tools.lattice import to_fraction
from toric_theta_tools.special import theta_definite
from toric_theta_tools.toric import intersection_series
from toric_theta_tools.toric import precise_main_pairing
from toric_theta_tools.utils.io import ExportHandler
from toric_theta_tools.utils.io import FileType
from toric_theta_tools.utils.io import ImportHandler
from toric_theta_tools.utils.io import format_element
from toric_theta_tools.utils.io import format_fraction
from toric_theta_tools.utils.io import parse_fraction
from toric_theta_tools.utils.io import parse_fragment
from toric_theta_tools.utils.io import parse_lattice
from toric_theta_tools.utils.io import parse_ray_system
from toric_theta_tools.utils.io import series_to_dict
from toric_theta_tools.utils.io import series_to_rows
from toric_theta_tools.zagier import ZagierNormalization
from toric_theta_tools.zagier import zagier_F

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.qseries import VectorValuedQSeries

config = pydantic.ConfigDict(use_enum_values=True)

DEFAULT_BOUND = "10"


class Command(enum.Enum):
    INSPECT_LATTICE = "inspect-lattice"
    THETA = "theta"
    ZAGIER = "zagier"
    HURWITZ = "hurwitz"
    THETA_PLUS = "theta-plus"
    COMPLETION = "completion"
    INTERSECT_SERIES = "intersect-series"
    PAIR_MAIN = "pair-main"
    VERIFY_TRANSFORM = "verify-transform"


class ExitCode(enum.IntEnum):
    OK = 0
    INPUT_ERROR = 1
    NUMERIC_FAILURE = 2


class LogLevel(enum.Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


def parse_tau(text: str) -> mpmath.mpc:
    """Parse ``i``, ``2i``, ``0.25+0.5i`` or ``1/4+1/2i`` into an exact-valued complex number."""
    normalized = re.sub(r"(?<=[0-9.)])i", "*I", text.replace(" ", "")).replace("i", "I")
    try:
        expr = sympy.sympify(normalized, rational=True)
        real, imag = (to_fraction(part) for part in expr.as_real_imag())
    except (sympy.SympifyError, TypeError, ValueError) as e:
        msg = f"Cannot parse tau {text!r}."
        raise ValueError(msg) from e
    return mpmath.mpc(mpmath.mpf(real.numerator) / real.denominator, mpmath.mpf(imag.numerator) / imag.denominator)


@pydantic.dataclasses.dataclass(config=config)
class JobConfig:
    command: Command
    lattice_path: pathlib.Path | None = None
    rays_path: pathlib.Path | None = None
    fragment_path: pathlib.Path | None = None
    bound: str = DEFAULT_BOUND
    level: int = 1
    discriminant: int | None = None
    residue: int | None = None
    normalization: ZagierNormalization = ZagierNormalization.VERBATIM
    precision: int = Precision.DIGITS
    tolerance: float = Tolerances.TRANSFORMATION
    taus: list[str] = pydantic.Field(default_factory=lambda: ["i"])
    output_path: pathlib.Path | None = None
    output_format: FileType = FileType.JSON
    logging_level: LogLevel = LogLevel.INFO
    log_file_path: pathlib.Path | None = None

    @pydantic.field_validator("bound")
    @classmethod
    def check_bound(cls, value: str) -> str:
        try:
            bound = parse_fraction(value)
        except ZeroDivisionError as e:
            msg = f"Bound {value} has a zero denominator."
            raise ValueError(msg) from e
        if bound < 0:
            msg = f"Bound must be non-negative, got {value}."
            raise ValueError(msg)
        return value

    @pydantic.field_validator("tolerance")
    @classmethod
    def check_tolerance(cls, value: float) -> float:
        if value <= 0:
            msg = f"Tolerance must be positive, got {value}."
            raise ValueError(msg)
        return value

    @pydantic.field_validator("precision")
    @classmethod
    def check_precision(cls, value: int) -> int:
        if value < Precision.MIN_DIGITS:
            msg = f"Precision must be at least {Precision.MIN_DIGITS} digits, got {value}."
            raise ValueError(msg)
        return value

    @pydantic.field_validator("taus")
    @classmethod
    def check_taus(cls, value: list[str]) -> list[str]:
        for text in value:
            if parse_tau(text).imag <= 0:
                msg = f"tau={text} does not lie in the upper half plane."
                raise ValueError(msg)
        return value

    @property
    def bound_value(self) -> Fraction:
        return parse_fraction(self.bound)


@pydantic.dataclasses.dataclass
class JobRunner:
    config: JobConfig

    def __post_init__(self) -> None:
        self._set_logging_handler(self.config.log_file_path)

    def _set_logging_handler(self, log_file_path: pathlib.Path | None) -> None:
        with contextlib.suppress(ValueError):
            loguru.logger.remove(handler_id=0)
        if log_file_path is None:
            loguru.logger.add(
                sink=sys.stderr,
                colorize=True,
                format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> <level>{file}:{line}</level> <white>{message}</white>",
                filter="toric_theta_tools",
                level=self.config.logging_level,
            )
        else:
            loguru.logger.add(
                sink=log_file_path,
                format="{time:YYYY-MM-DD HH:mm:ss} {level} {file}:{line} {message}",
                filter="toric_theta_tools",
                level=self.config.logging_level,
                enqueue=True,
            )

    def run(self) -> ExitCode:
        command = Command(self.config.command)
        loguru.logger.info("Running {command}...", command=command.value)
        try:
            with mpmath.workdps(self.config.precision):
                data, exit_code = self._dispatch(command)
            if not self.emit(data):
                return ExitCode.INPUT_ERROR
        except InputSchemaError as e:
            for pointer, message in e.violations:
                loguru.logger.error("Input violates schema at {pointer}: {message}", pointer=pointer or "/", message=message)
            return ExitCode.INPUT_ERROR
        except (ThetaToolsError, OSError, ValueError) as e:
            error_code = self.resolve_error_code(e)
            loguru.logger.error(f"{command.value} failed. Error code: {error_code.value} - {error_code.name}: {e}")
            return ExitCode.INPUT_ERROR
        loguru.logger.info("Running {command}... Done. Exit code {code}.", command=command.value, code=int(exit_code))
        return exit_code

    @staticmethod
    def resolve_error_code(error: Exception) -> ErrorCode:
        if isinstance(error, ThetaToolsError):
            return error.code
        return ErrorCode.UNKNOWN_ERROR_OCCURED

    def _load(self, path: pathlib.Path | None, flag: str) -> dict[str, t.Any]:
        if path is None:
            msg = f"Command needs {flag}."
            raise ValueError(msg)
        data = ImportHandler(file_path=path).import_user_data()
        if data is None:
            msg = f"Could not read {path}."
            raise ValueError(msg)
        return data

    def _dispatch(self, command: Command) -> tuple[dict[str, t.Any] | str, ExitCode]:
        bound = self.config.bound_value
        if command is Command.HURWITZ:
            if self.config.discriminant is None or self.config.residue is None:
                msg = "hurwitz needs --D and --r."
                raise ValueError(msg)
            return format_fraction(hurwitz_H(self.config.level, self.config.discriminant, self.config.residue)), ExitCode.OK

        if command is Command.ZAGIER:
            normalization = ZagierNormalization(self.config.normalization)
            return self._series(zagier_F(self.config.level, bound, normalization=normalization).holo), ExitCode.OK

        if command in (Command.INSPECT_LATTICE, Command.THETA):
            lattice = parse_lattice(self._load(self.config.lattice_path, "--lattice"))
            if command is Command.THETA:
                return self._series(theta_definite(lattice, bound)), ExitCode.OK
            group = lattice.discriminant
            return {
                "rank": lattice.rank,
                "signature": list(lattice.signature),
                "det": lattice.det,
                "group_orders": list(group.cyclic_orders),
                "level": group.level,
                "q_form": {format_element(g): format_fraction(q) for g, q in group.q_table.items()},
            }, ExitCode.OK

        if command in (Command.THETA_PLUS, Command.COMPLETION, Command.VERIFY_TRANSFORM):
            rs = parse_ray_system(self._load(self.config.rays_path, "--rays"))
            if command is Command.THETA_PLUS:
                return self._series(theta_plus(rs, bound)), ExitCode.OK
            if command is Command.COMPLETION:
                report = completion_report(rs, bound)
                return {
                    "theta_plus": series_to_dict(report.theta_plus),
                    "aniso_terms": [{"ray": list(ray), "series": series_to_dict(s)} for ray, s in report.aniso_terms],
                    "iso_terms": [{"ray": list(ray), "series": series_to_dict(s)} for ray, s in report.iso_terms],
                    "candidate": series_to_dict(report.candidate),
                    "candidate_vanishes": report.candidate.is_zero(),
                    "weight": format_fraction(report.weight),
                }, ExitCode.OK
            taus = [parse_tau(text) for text in self.config.taus]
            report = verify_transformations(rs, taus, bound, self.config.tolerance, digits=self.config.precision)
            data = report.to_dict() | {"precision": self.config.precision, "tolerance": self.config.tolerance}
            return data, ExitCode.OK if report.passed else ExitCode.NUMERIC_FAILURE

        ad, fragment = parse_fragment(self._load(self.config.fragment_path, "--fragment"))
        if command is Command.INTERSECT_SERIES:
            return self._series(intersection_series(ad, fragment, bound)), ExitCode.OK
        pairing = precise_main_pairing(ad, fragment, bound)
        return {
            "pairing": series_to_dict(pairing.pairing),
            "expected": series_to_dict(pairing.expected),
            "mismatches": [[format_fraction(exp), format_element(g)] for exp, g in pairing.mismatches],
            "constant_term": format_fraction(pairing.constant_term),
            "pass": pairing.matches,
        }, ExitCode.OK if pairing.matches else ExitCode.NUMERIC_FAILURE

    def _series(self, series: VectorValuedQSeries) -> dict[str, t.Any]:
        if FileType(self.config.output_format) is FileType.CSV:
            return series_to_rows(series)
        return series_to_dict(series)

    def emit(self, data: dict[str, t.Any] | str) -> bool:
        file_type = FileType(self.config.output_format)
        if self.config.output_path is None:
            text = data if isinstance(data, str) else json.dumps(data, indent=2, sort_keys=True)
            sys.stdout.write(text + "\n")
            return True
        if isinstance(data, str):
            data = {"value": data}
        if file_type is FileType.CSV and any(isinstance(v, (dict, bool)) for v in data.values()):
            loguru.logger.warning("Report is not tabular; writing JSON instead of CSV.")
            file_type = FileType.JSON
        handler = ExportHandler(directory_path=self.config.output_path.parent)
        return handler.export_user_data(data, file_type=file_type, file_name=self.config.output_path.stem)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-theta", description="Theta series and toric intersection series.")
    parser.add_argument("--version", action="version", version=VERSION)
    parser.add_argument("--log-level", default=LogLevel.INFO.value, choices=[level.value for level in LogLevel])
    parser.add_argument("--log-file", type=pathlib.Path, default=None)
    parser.add_argument("--precision", type=int, default=Precision.DIGITS)
    parser.add_argument("--output", type=pathlib.Path, default=None)
    parser.add_argument("--format", default="json", choices=["json", "csv"])
    commands = parser.add_subparsers(dest="command", required=True)

    for name in (Command.INSPECT_LATTICE, Command.THETA):
        sub = commands.add_parser(name.value)
        sub.add_argument("--lattice", type=pathlib.Path, required=True)
        sub.add_argument("--bound", default=DEFAULT_BOUND)

    sub = commands.add_parser(Command.ZAGIER.value)
    sub.add_argument("--level", type=int, default=1)
    sub.add_argument("--bound", default=DEFAULT_BOUND)
    sub.add_argument("--normalization", default="verbatim", choices=["verbatim", "completion"])

    sub = commands.add_parser(Command.HURWITZ.value)
    sub.add_argument("--level", type=int, default=1)
    sub.add_argument("--D", type=int, required=True, dest="discriminant")
    sub.add_argument("--r", type=int, required=True, dest="residue")

    for name in (Command.THETA_PLUS, Command.COMPLETION, Command.VERIFY_TRANSFORM):
        sub = commands.add_parser(name.value)
        sub.add_argument("--rays", type=pathlib.Path, required=True)
        sub.add_argument("--bound", default=DEFAULT_BOUND)
        if name is Command.VERIFY_TRANSFORM:
            sub.add_argument("--tau", action="append", default=None, dest="taus")
            sub.add_argument("--tol", type=float, default=Tolerances.TRANSFORMATION)

    for name in (Command.INTERSECT_SERIES, Command.PAIR_MAIN):
        sub = commands.add_parser(name.value)
        sub.add_argument("--fragment", type=pathlib.Path, required=True)
        sub.add_argument("--bound", default=DEFAULT_BOUND)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    values = vars(args)
    return JobConfig(
        command=Command(values["command"]),
        lattice_path=values.get("lattice"),
        rays_path=values.get("rays"),
        fragment_path=values.get("fragment"),
        bound=values.get("bound", DEFAULT_BOUND),
        level=values.get("level", 1),
        discriminant=values.get("discriminant"),
        residue=values.get("residue"),
        normalization=ZagierNormalization(values.get("normalization", "verbatim").upper()),
        precision=values["precision"],
        tolerance=values.get("tol", Tolerances.TRANSFORMATION),
        taus=values.get("taus") or ["i"],
        output_path=values["output"],
        output_format=FileType.CSV if values["format"] == "csv" else FileType.JSON,
        logging_level=LogLevel(values["log_level"]),
        log_file_path=values["log_file"],
    )


def main(argv: cabc.Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = config_from_args(args)
    except pydantic.ValidationError as e:
        for error in e.errors():
            loguru.logger.error("Invalid option {option}: {message}", option=".".join(str(p) for p in error["loc"]), message=error["msg"])
        return int(ExitCode.INPUT_ERROR)
    return int(JobRunner(config=job).run())


if __name__ == "__main__":
    sys.exit(main())
