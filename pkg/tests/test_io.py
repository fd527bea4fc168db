from contextlib import nullcontext as does_not_raise
from fractions import Fraction

import pytest

from toric_theta_tools.error_codes import GroupMismatchError
from toric_theta_tools.error_codes import InputSchemaError
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.special import theta_definite
from toric_theta_tools.utils.io import ExportHandler
from toric_theta_tools.utils.io import FileType
from toric_theta_tools.utils.io import ImportHandler
from toric_theta_tools.utils.io import format_element
from toric_theta_tools.utils.io import format_fraction
from toric_theta_tools.utils.io import parse_element
from toric_theta_tools.utils.io import parse_fraction
from toric_theta_tools.utils.io import parse_fragment
from toric_theta_tools.utils.io import parse_lattice
from toric_theta_tools.utils.io import parse_ray_system
from toric_theta_tools.utils.io import series_from_dict
from toric_theta_tools.utils.io import series_to_dict
from toric_theta_tools.utils.io import series_to_rows

A1_NEG = validate_even_lattice([[-2]], name="A1(-1)")
A2_NEG = validate_even_lattice([[-2, -1], [-1, -2]], name="A2(-1)")

ray_document = {
    "lattice": {"gram": [[0, 1], [1, 0]], "name": "U"},
    "witness": [1, 1],
    "rays": [[1, 0], [0, 1], [1, 1]],
    "coeffs": [1, 1, -1],
    "prefactor": "1/2",
}


@pytest.fixture
def fake_path(tmp_path):
    return tmp_path


class TestExportImportData:
    def test_series_document_survives_export(self, fake_path) -> None:
        series = theta_definite(A1_NEG, 4)
        eh = ExportHandler(directory_path=fake_path)
        assert eh.export_user_data(series_to_dict(series), file_type=FileType.JSON, file_name="theta")

        imported = ImportHandler(file_path=fake_path / "theta.json").import_user_data()
        assert series_from_dict(imported, A1_NEG.discriminant) == series

    def test_csv_rows(self, fake_path) -> None:
        series = theta_definite(A1_NEG, 1)
        eh = ExportHandler(directory_path=fake_path)
        assert eh.export_user_data(series_to_rows(series), file_type=FileType.CSV, file_name="theta")
        lines = (fake_path / "theta.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "exp,element,coeff"
        assert lines[1:] == ["0,(0),1", "1/4,(1),2", "1,(0),2"]

    @pytest.mark.parametrize(
        ("file_name", "content", "expectation"),
        [
            ("doc.json", "{}", does_not_raise()),
            ("doc.csv", "a,b", pytest.raises(ValueError)),
            ("missing.json", None, pytest.raises(FileNotFoundError)),
        ],
    )
    def test_import_handler(self, fake_path, file_name, content, expectation) -> None:
        file_path = fake_path / file_name
        if content is not None:
            file_path.write_text(content, encoding="utf-8")
        with expectation:
            assert ImportHandler(file_path=file_path).import_user_data() == {}

    def test_broken_json(self, fake_path, caplog) -> None:
        file_path = fake_path / "broken.json"
        file_path.write_text("{", encoding="utf-8")
        assert ImportHandler(file_path=file_path).import_user_data() is None
        assert "Import from JSON failed" in caplog.text


class TestFormatting:
    @pytest.mark.parametrize(
        ("value", "text"),
        [
            (Fraction(3, 4), "3/4"),
            (Fraction(-1, 6), "-1/6"),
            (Fraction(4, 2), "2"),
            (0, "0"),
        ],
    )
    def test_fraction(self, value, text) -> None:
        assert format_fraction(value) == text
        assert parse_fraction(text) == value

    @pytest.mark.parametrize(
        ("element", "text"),
        [
            ((), "()"),
            ((1,), "(1)"),
            ((0, 3), "(0,3)"),
        ],
    )
    def test_element(self, element, text) -> None:
        assert format_element(element) == text
        assert parse_element(text) == element

    def test_series_group_mismatch(self) -> None:
        document = series_to_dict(theta_definite(A1_NEG, 1))
        with pytest.raises(GroupMismatchError):
            series_from_dict(document, A2_NEG.discriminant)


class TestSchema:
    def test_ray_system(self) -> None:
        rs = parse_ray_system(ray_document)
        assert rs.prefactor == Fraction(1, 2)
        assert rs.coeffs == (1, 1, -1)

    @pytest.mark.parametrize(
        ("changes", "pointer"),
        [
            ({"rays": [[1, 0], [0, 1], [1, "x"]]}, "/rays/2/1"),
            ({"coeffs": None}, "/coeffs"),
            ({"lattice": {"gram": [[1, 1], [1, 0]]}}, "/lattice/gram"),
            ({"witness": [1, -1]}, "/witness"),
            ({"coeffs": [1, 1, 1]}, "/rays"),
            ({"prefactor": "a/b"}, "/prefactor"),
        ],
    )
    def test_ray_system_violations(self, changes, pointer) -> None:
        document = {**ray_document, **changes}
        document = {k: v for k, v in document.items() if v is not None}
        with pytest.raises(InputSchemaError) as e:
            parse_ray_system(document)
        assert pointer in [p for p, _ in e.value.violations]

    def test_lattice(self) -> None:
        assert parse_lattice({"gram": [[2]]}).det == 2
        with pytest.raises(InputSchemaError) as e:
            parse_lattice({"gram": [[1]]})
        assert e.value.violations[0][0] == "/gram"

    def test_fragment(self, u_fragment_document) -> None:
        ad, fragment = parse_fragment(u_fragment_document)
        assert ad.K.gram == fragment.K.gram
        assert fragment.sigma_rays == ((1, 1),)

    @pytest.mark.parametrize(
        "k_iso",
        [
            [[2, 0], [0, 1]],
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        ],
    )
    def test_fragment_isometry(self, u_fragment_document, k_iso) -> None:
        with pytest.raises(InputSchemaError) as e:
            parse_fragment({**u_fragment_document, "K_iso": k_iso})
        assert e.value.violations[0][0] == "/K_iso"
