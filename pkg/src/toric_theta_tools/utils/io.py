# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

import csv
import enum
import json
import pathlib
import typing as t
from fractions import Fraction

import loguru
import pydantic
import sympy

from toric_theta_tools.constants import ELEMENT_SEPARATOR
from toric_theta_tools.constants import FRACTION_SEPARATOR
from toric_theta_tools.error_codes import AmbientMismatchError
from toric_theta_tools.error_codes import GroupMismatchError
from toric_theta_tools.error_codes import InputSchemaError
from toric_theta_tools.error_codes import ThetaToolsError
from toric_theta_tools.hyperbolic import hyperbolic_setup
from toric_theta_tools.hyperbolic import ray_system
from toric_theta_tools.lattice import isotropic_quotient
from toric_theta_tools.lattice import isotropic_sublattice
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import VectorValuedQSeries
from toric_theta_tools.toric import ambient_data
from toric_theta_tools.toric import fan_fragment

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.hyperbolic import RaySystem
    from toric_theta_tools.lattice import DiscriminantGroup
    from toric_theta_tools.lattice import Element
    from toric_theta_tools.lattice import IntegerLattice
    from toric_theta_tools.toric import AmbientData
    from toric_theta_tools.toric import FanFragment

    PrimitiveType = (
        str | bool | int | float | None | cabc.Sequence["PrimitiveType"] | cabc.Mapping[str, "PrimitiveType"]
    )

config = pydantic.ConfigDict(use_enum_values=True)


class FileType(enum.Enum):
    CSV = ".csv"
    JSON = ".json"

    @classmethod
    def values(cls) -> list[str]:
        return [_.value for _ in list(cls)]

    @classmethod
    def has(cls, value: str) -> bool:
        return value in cls.values()


@pydantic.dataclasses.dataclass
class ExportHandler:
    directory_path: pathlib.Path

    def export_user_data(
        self,
        data: dict[str, PrimitiveType],
        /,
        *,
        file_type: FileType,
        file_name: str | None = None,
    ) -> bool:
        """Export a report or series document.

        Arguments:
            data {dict[str, PrimitiveType]} -- JSON document, or columns of equal length for CSV
            file_type {FileType} -- the chosen file type for data export
            file_name {str | None} -- the chosen file name without suffix (default: {None})

        Returns:
            {bool} -- whether the file was written
        """
        loguru.logger.debug(
            "Export data to {export_path} as {file_type} ...",
            file_type=file_type,
            export_path=str(self.directory_path),
        )
        if not FileType.has(file_type.value):
            msg = f"File type {file_type} is not supported."
            raise ValueError(msg)

        file_path = self.create_file_path(file_type=file_type, file_name=file_name)
        if file_type is FileType.CSV:
            return self.to_csv(file_path, data=data)
        return self.to_json(file_path, data=data)

    def create_file_path(self, *, file_type: FileType, file_name: str | None = None) -> pathlib.Path:
        self.directory_path.mkdir(parents=True, exist_ok=True)
        return self.directory_path / f"{file_name or 'result'}{file_type.value}"

    def to_json(self, file_path: pathlib.Path, /, *, data: dict[str, PrimitiveType], indent: int = 2) -> bool:
        try:
            with pathlib.Path(file_path).open("w+", encoding="utf-8") as file_handle:
                json.dump(data, file_handle, indent=indent, sort_keys=True)
                file_handle.write("\n")

        except Exception as e:  # noqa: BLE001
            loguru.logger.error(f"Export to JSON failed at {file_path!s} with error {e}")
            return False

        return True

    def to_csv(self, file_path: pathlib.Path, /, *, data: dict[str, PrimitiveType]) -> bool:
        columns = {key: value if isinstance(value, list) else [value] for key, value in data.items()}
        rows = [dict(zip(columns, values, strict=False)) for values in zip(*columns.values(), strict=False)]

        try:
            with pathlib.Path(file_path).open("w+", encoding="utf-8", newline="") as csvfile:
                writer = csv.DictWriter(csvfile, fieldnames=list(data.keys()))
                writer.writeheader()
                writer.writerows(rows)

        except Exception as e:  # noqa: BLE001
            loguru.logger.error(f"Export to CSV failed at {file_path!s} with error {e}")
            return False

        return True


@pydantic.dataclasses.dataclass
class ImportHandler:
    file_path: pathlib.Path

    def __post_init__(self) -> None:
        if not self.file_path.exists():
            msg = f"File path {self.file_path} does not exist."
            raise FileNotFoundError(msg)

        if self.file_path.suffix != FileType.JSON.value:
            msg = f"File type {self.file_path.suffix} is not supported."
            raise ValueError(msg)

    def import_user_data(self) -> dict[str, PrimitiveType] | None:
        """Import a JSON input document.

        Returns:
            {dict[str, PrimitiveType] | None} -- the document, None if it cannot be read
        """
        loguru.logger.debug("Import data from {file_path} ...", file_path=str(self.file_path))
        try:
            with pathlib.Path(self.file_path).open("r", encoding="utf-8") as file_handle:
                return json.load(file_handle)

        except Exception as e:  # noqa: BLE001
            loguru.logger.error(f"Import from JSON failed at {self.file_path!s} with error {e}")
            return None


def format_fraction(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}{FRACTION_SEPARATOR}{value.denominator}"


def parse_fraction(value: str | int) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    numerator, _, denominator = value.strip().partition(FRACTION_SEPARATOR)
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def format_element(element: Element) -> str:
    return "(" + ELEMENT_SEPARATOR.join(str(r) for r in element) + ")"


def parse_element(value: str) -> Element:
    inner = value.strip().removeprefix("(").removesuffix(")")
    if not inner:
        return ()
    return tuple(int(r) for r in inner.split(ELEMENT_SEPARATOR))


def series_to_dict(series: VectorValuedQSeries, /) -> dict[str, PrimitiveType]:
    return {
        "denom": series.denom,
        "bound": format_fraction(series.bound),
        "group_orders": list(series.group.cyclic_orders),
        "weight": None if series.weight is None else format_fraction(series.weight),
        "terms": [
            {
                "exp": format_fraction(exp),
                "coeffs": {format_element(gamma): format_fraction(c) for gamma, c in series.terms[exp].items()},
            }
            for exp in series.exponents()
        ],
    }


def series_from_dict(data: cabc.Mapping[str, t.Any], group: DiscriminantGroup, /) -> VectorValuedQSeries:
    if tuple(data["group_orders"]) != group.cyclic_orders:
        msg = f"Series document has group orders {data['group_orders']}, expected {list(group.cyclic_orders)}."
        raise GroupMismatchError(msg)
    terms = {
        parse_fraction(term["exp"]): {parse_element(k): parse_fraction(v) for k, v in term["coeffs"].items()}
        for term in data["terms"]
    }
    weight = data.get("weight")
    return VectorValuedQSeries.build(
        group,
        terms,
        parse_fraction(data["bound"]),
        weight=None if weight is None else parse_fraction(weight),
    )


def series_to_rows(series: VectorValuedQSeries, /) -> dict[str, list[str]]:
    """Columns ``exp``, ``element``, ``coeff`` for CSV export, one row per nonzero coefficient."""
    rows: dict[str, list[str]] = {"exp": [], "element": [], "coeff": []}
    for exp in series.exponents():
        for gamma, c in series.terms[exp].items():
            rows["exp"].append(format_fraction(exp))
            rows["element"].append(format_element(gamma))
            rows["coeff"].append(format_fraction(c))
    return rows


@pydantic.dataclasses.dataclass(config=config)
class LatticeInput:
    gram: list[list[int]]
    name: str | None = None


@pydantic.dataclasses.dataclass(config=config)
class RaySystemInput:
    lattice: LatticeInput
    witness: list[int]
    rays: list[list[int]]
    coeffs: list[int]
    prefactor: str = "1"

    @pydantic.field_validator("prefactor", mode="before")
    @classmethod
    def check_prefactor(cls, value: str | int) -> str:
        try:
            parse_fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            msg = f"Prefactor {value!r} is not a fraction p/q."
            raise ValueError(msg) from e
        return str(value)


@pydantic.dataclasses.dataclass(config=config)
class FragmentInput:
    lattice_L: list[list[int]]  # noqa: N815
    isotropic_I: list[int]  # noqa: N815
    K_iso: list[list[int]]  # noqa: N815
    sigma_rays: list[list[int]]
    plus_ray: list[int]
    minus_ray: list[int]


def _pointer(location: cabc.Sequence[str | int]) -> str:
    return "".join(f"/{part}" for part in location)


S = t.TypeVar("S")


def validate_input(schema: type[S], data: t.Any, /) -> S:  # noqa: ANN401
    """Validate a document against a schema; every violation is reported with its JSON pointer."""
    try:
        return pydantic.TypeAdapter(schema).validate_python(data)
    except pydantic.ValidationError as e:
        raise InputSchemaError([(_pointer(error["loc"]), error["msg"]) for error in e.errors()]) from e


def _domain(pointer: str, build: cabc.Callable[[], S]) -> S:
    try:
        return build()
    except ThetaToolsError as e:
        if isinstance(e, InputSchemaError):
            raise
        raise InputSchemaError([(pointer, str(e))]) from e


def parse_lattice(data: t.Any, /, *, pointer: str = "") -> IntegerLattice:  # noqa: ANN401
    document = validate_input(LatticeInput, data)
    return _domain(f"{pointer}/gram", lambda: validate_even_lattice(document.gram, name=document.name))


def parse_ray_system(data: t.Any, /) -> RaySystem:  # noqa: ANN401
    document = validate_input(RaySystemInput, data)
    lattice = _domain("/lattice/gram", lambda: validate_even_lattice(document.lattice.gram, name=document.lattice.name))
    setup = _domain("/witness", lambda: hyperbolic_setup(lattice, document.witness))
    return _domain(
        "/rays",
        lambda: ray_system(setup, document.rays, document.coeffs, prefactor=parse_fraction(document.prefactor)),
    )


def parse_fragment(data: t.Any, /) -> tuple[AmbientData, FanFragment]:  # noqa: ANN401
    """Ambient data and fragment; K carries the Gram ``K_iso.T @ G_quot @ K_iso``."""
    document = validate_input(FragmentInput, data)
    lattice = _domain("/lattice_L", lambda: validate_even_lattice(document.lattice_L, name="L"))
    line = _domain("/isotropic_I", lambda: isotropic_sublattice(lattice, [document.isotropic_I]))
    quotient = _domain("/isotropic_I", lambda: isotropic_quotient(lattice, line))

    def transported() -> IntegerLattice:
        m = sympy.Matrix(document.K_iso)
        if m.shape != (quotient.lattice.rank, quotient.lattice.rank):
            msg = f"K_iso must be a square matrix of size {quotient.lattice.rank}."
            raise AmbientMismatchError(msg)
        gram = m.T * quotient.lattice.matrix * m
        return validate_even_lattice([[int(gram[i, j]) for j in range(gram.cols)] for i in range(gram.rows)], name="K")

    k_lattice = _domain("/K_iso", transported)
    ad = _domain("/K_iso", lambda: ambient_data(lattice, document.isotropic_I, k_lattice, document.K_iso))
    fragment = _domain(
        "/sigma_rays",
        lambda: fan_fragment(k_lattice, document.sigma_rays, document.plus_ray, document.minus_ray),
    )
    return ad, fragment
