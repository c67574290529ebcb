import csv
import io
import json
import shutil

import pytest

from k3fix.classify import KNOWN_ERRATA, table1_cells, table2_cells, verify_against_embedded
from k3fix.data_files import ENV_VAR, PACKAGE_DATA, DataFileError
from k3fix.render import render


@pytest.fixture
def data_copy(tmp_path, monkeypatch):
    for name in ("table1.json", "table2.json"):
        shutil.copy(PACKAGE_DATA / name, tmp_path / name)
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    return tmp_path


def edit(path, fn):
    data = json.loads(path.read_text())
    fn(data["rows"])
    path.write_text(json.dumps(data))


def test_clean_run_has_only_the_known_erratum():
    report = verify_against_embedded()
    assert report.failures == []
    [e] = report.errata
    assert (e.table, e.row, e.column) == ("table1", "18", "F0/Finf")
    assert e.expected == ("I0", "I0") and e.actual == ("I0", "IV")
    assert ("table1", "18", "F0/Finf") in KNOWN_ERRATA
    assert report.ok() and not report.ok(strict=True)


def test_row5_involution_cell_matches():
    cells = {c["id"]: c for c in table1_cells()}
    assert (cells["5"]["F0"], cells["5"]["Finf"]) == ("I0", "IVstar")
    assert (cells["5"]["inv_p34"], cells["5"]["inv_p25"], cells["5"]["inv_l"]) == (6, 3, 1)


@pytest.mark.parametrize(
    "table,rid,col,value",
    [("table1", "7", "p25", 3), ("table1", "3'", "inv_l", 1), ("table2", "4", "p25", 1),
     ("table1", "12", "F0", "I0")],
)
def test_one_perturbation_gives_one_failure(data_copy, table, rid, col, value):
    def change(rows):
        next(r for r in rows if r["id"] == rid)[col] = value
    edit(data_copy / f"{table}.json", change)
    report = verify_against_embedded()
    assert len(report.failures) == 1
    assert report.failures[0].row == rid


def test_swapped_pair_is_not_a_difference(data_copy):
    def swap(rows):
        r = next(r for r in rows if r["id"] == "7")
        r["F0"], r["Finf"] = r["Finf"], r["F0"]
    edit(data_copy / "table1.json", swap)
    assert verify_against_embedded().failures == []


def test_missing_row_is_a_failure(data_copy):
    edit(data_copy / "table2.json", lambda rows: rows.pop())
    [f] = verify_against_embedded().failures
    assert f.column == "row" and f.row == "3'"


def test_corrupt_file(data_copy):
    (data_copy / "table2.json").write_text("{not json")
    with pytest.raises(DataFileError):
        verify_against_embedded()


def test_missing_file(data_copy):
    (data_copy / "table1.json").unlink()
    with pytest.raises(DataFileError):
        verify_against_embedded()


def test_embedded_files_are_complete():
    t1 = json.loads((PACKAGE_DATA / "table1.json").read_text())["rows"]
    t2 = json.loads((PACKAGE_DATA / "table2.json").read_text())["rows"]
    assert len(t1) == 20 and len(t2) == 7
    assert [r["id"] for r in t1][-2:] == ["3'", "6'"]


def test_generated_cells_match_embedded_after_normalization():
    t2 = json.loads((PACKAGE_DATA / "table2.json").read_text())["rows"]
    assert table2_cells() == t2


def test_markdown_layout():
    md = render(["table1"], "markdown").splitlines()
    assert md[0].split("|")[1].strip() == "#"
    assert [h.strip() for h in md[0].strip("|").split("|")][8:11] == ["p(3,4)", "p(2,5)", "l-1"]
    assert len(md) == 22
    row8 = next(line for line in md if line.split("|")[1].strip() == "8")
    assert [c.strip() for c in row8.strip("|").split("|")][11:] == ["", "", "", "", ""]
    assert "IV*" in "\n".join(md)


def test_csv_round_trip():
    text = render(["table1"], "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 20
    assert rows[0]["l_minus_1"] == "0" and rows[7]["F0"] == ""


def test_json_output():
    data = json.loads(render(["table1", "table2", "genus1"], "json"))
    assert len(data["table1"]) == 20 and len(data["table2"]) == 7
    assert data["genus1"]["p25"] == 3
    assert data["table1"][0]["stratum"] == [0, 0]


def test_bad_format():
    with pytest.raises(ValueError):
        render(["table1"], "xml")
