import pytest

from spinlab.tables import EXPECTED, Table, check_all, compare, delta_name, table5
from spinlab.oracle import PAPER_FUNCTIONS, phase_correction


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5])
def test_table_matches(number):
    tables, problems = check_all(number)
    assert problems == []
    assert tables[0].rows == EXPECTED[number]


def test_table5_f8_row():
    row = dict(zip(table5().header, table5().rows[7]))
    assert row["Ix"] == "4IySzRx" and row["Sx"] == "4IzSyRx"


def test_mismatch_names_cell():
    t = table5()
    wrong = [list(r) for r in EXPECTED[5]]
    wrong[3][2] = "2IyRx"
    problems = compare(t, [tuple(r) for r in wrong])
    assert len(problems) == 1
    assert str(problems[0]) == "table 5, row f4, column Ix: expected '2IyRx', got '-2IyRx'"


def test_row_count_mismatch():
    t = Table(2, "x", ("f", "U"), [("f1", "Δ(E,E,E,E)")])
    assert compare(t)[0].row == "*"


def test_unknown_table():
    with pytest.raises(ValueError):
        check_all(6)


def test_delta_name_of_correction():
    assert delta_name(phase_correction(PAPER_FUNCTIONS["f7"])) == "Δ(-iE,E,E,-iE)"


def test_render_has_header_and_rule():
    text = table5().render().splitlines()
    assert text[0].startswith("Table 5:")
    assert set(text[2].replace(" ", "")) == {"-"}
