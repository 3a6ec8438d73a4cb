"""Recompute the five reference tables and check them cell by cell.

Every cell is derived from the operators themselves: truth tables by
classifying all sixteen two-bit functions, Delta forms by reading the 2x2
blocks back out of the oracle matrices, and product-operator cells by
expanding conjugated states.  Expansions are rendered in canonical order
(fewest factors first, then by spin I, S, R, then axis x, y, z) with the
sign attached to each term, e.g. ``-2IyRx``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import E, SIGMA_X, expand, conjugate, spin_operator
from .ideal import RHO_PSI2
from .oracle import (
    INPUTS,
    FunctionClass,
    all_functions,
    classify,
    experimental_unitary,
    oracle_unitary,
    PAPER_FUNCTIONS,
)

LABELS = tuple(PAPER_FUNCTIONS)

_BLOCK_NAMES = (
    ("E", E),
    ("2σx", 2 * SIGMA_X),
    ("2iσx", 2j * SIGMA_X),
    ("-E", -E),
    ("-iE", -1j * E),
)


@dataclass
class Table:
    number: int
    caption: str
    header: tuple[str, ...]
    rows: list[tuple[str, ...]]

    def render(self) -> str:
        cells = [self.header, *self.rows]
        widths = [max(len(r[c]) for r in cells) for c in range(len(self.header))]
        lines = [f"Table {self.number}: {self.caption}"]
        for k, r in enumerate(cells):
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
            if k == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines)


@dataclass
class Mismatch:
    table: int
    row: str
    column: str
    expected: str
    actual: str

    def __str__(self) -> str:
        return (
            f"table {self.table}, row {self.row}, column {self.column}: "
            f"expected {self.expected!r}, got {self.actual!r}"
        )


def block_name(block: np.ndarray) -> str:
    for name, ref in _BLOCK_NAMES:
        if np.allclose(block, ref, atol=1e-12):
            return name
    raise ValueError(f"unrecognised 2x2 block {block!r}")


def delta_name(u: np.ndarray) -> str:
    """Render a block-diagonal 8x8 matrix as ``Δ(b1,b2,b3,b4)``."""
    off = u.copy()
    names = []
    for m in range(4):
        sl = slice(2 * m, 2 * m + 2)
        names.append(block_name(u[sl, sl]))
        off[sl, sl] = 0
    if np.abs(off).max() > 1e-12:
        raise ValueError("matrix is not block diagonal")
    return "Δ(" + ",".join(names) + ")"


def _images(u: np.ndarray) -> tuple[str, str, str]:
    return tuple(expand(conjugate(u, spin_operator(s, "x"))).render() for s in (1, 2, 3))


def table1() -> Table:
    # the paper's eight functions, recovered from the full set of sixteen
    promise = {f.label: f for f in all_functions() if classify(f) is not FunctionClass.NEITHER}
    rows = [(f"{i}{j}", *(str(promise[k](i, j)) for k in LABELS)) for i, j in INPUTS]
    return Table(1, "constant and balanced functions of two bits", ("x", *LABELS), rows)


def table2() -> Table:
    rows = [(k, delta_name(oracle_unitary(PAPER_FUNCTIONS[k]))) for k in LABELS]
    return Table(2, "oracle unitaries", ("f", "U"), rows)


def table3() -> Table:
    rho = RHO_PSI2.to_operator()
    rows = [(k, expand(conjugate(oracle_unitary(PAPER_FUNCTIONS[k]), rho)).render()) for k in LABELS]
    return Table(3, "outputs from the pseudo-pure input", ("f", "output"), rows)


def table4() -> Table:
    rows = []
    for k in LABELS:
        u = oracle_unitary(PAPER_FUNCTIONS[k])
        rows.append((k, delta_name(u), *_images(u)))
    return Table(4, "images of Ix, Sx, Rx under the oracle", ("f", "U", "Ix", "Sx", "Rx"), rows)


def table5() -> Table:
    rows = []
    for k in LABELS:
        u = experimental_unitary(PAPER_FUNCTIONS[k])
        rows.append((k, delta_name(u), *_images(u)))
    return Table(
        5, "images of Ix, Sx, Rx under line-selective pi pulses", ("f", "U", "Ix", "Sx", "Rx"), rows
    )


BUILDERS = {1: table1, 2: table2, 3: table3, 4: table4, 5: table5}

_PP_SAME = "Ix + Sx - Rx + 2IxSx - 2IxRx - 2SxRx - 4IxSxRx"
_PP_I = "-Ix + Sx - Rx - 2IxSx + 2IxRx - 2SxRx + 4IxSxRx"
_PP_S = "Ix - Sx - Rx - 2IxSx - 2IxRx + 2SxRx + 4IxSxRx"
_PP_IS = "-Ix - Sx - Rx + 2IxSx + 2IxRx + 2SxRx - 4IxSxRx"

EXPECTED: dict[int, list[tuple[str, ...]]] = {
    1: [
        ("00", "0", "1", "0", "1", "1", "0", "1", "0"),
        ("01", "0", "1", "0", "1", "0", "1", "0", "1"),
        ("10", "0", "1", "1", "0", "1", "0", "0", "1"),
        ("11", "0", "1", "1", "0", "0", "1", "1", "0"),
    ],
    2: [
        ("f1", "Δ(E,E,E,E)"),
        ("f2", "Δ(2σx,2σx,2σx,2σx)"),
        ("f3", "Δ(E,E,2σx,2σx)"),
        ("f4", "Δ(2σx,2σx,E,E)"),
        ("f5", "Δ(2σx,E,2σx,E)"),
        ("f6", "Δ(E,2σx,E,2σx)"),
        ("f7", "Δ(2σx,E,E,2σx)"),
        ("f8", "Δ(E,2σx,2σx,E)"),
    ],
    3: [
        ("f1", _PP_SAME),
        ("f2", _PP_SAME),
        ("f3", _PP_I),
        ("f4", _PP_I),
        ("f5", _PP_S),
        ("f6", _PP_S),
        ("f7", _PP_IS),
        ("f8", _PP_IS),
    ],
    4: [
        ("f1", "Δ(E,E,E,E)", "Ix", "Sx", "Rx"),
        ("f2", "Δ(2σx,2σx,2σx,2σx)", "Ix", "Sx", "Rx"),
        ("f3", "Δ(E,E,2σx,2σx)", "2IxRx", "Sx", "Rx"),
        ("f4", "Δ(2σx,2σx,E,E)", "2IxRx", "Sx", "Rx"),
        ("f5", "Δ(2σx,E,2σx,E)", "Ix", "2SxRx", "Rx"),
        ("f6", "Δ(E,2σx,E,2σx)", "Ix", "2SxRx", "Rx"),
        ("f7", "Δ(2σx,E,E,2σx)", "2IxRx", "2SxRx", "Rx"),
        ("f8", "Δ(E,2σx,2σx,E)", "2IxRx", "2SxRx", "Rx"),
    ],
    5: [
        ("f1", "Δ(E,E,E,E)", "Ix", "Sx", "Rx"),
        ("f2", "Δ(2iσx,2iσx,2iσx,2iσx)", "Ix", "Sx", "Rx"),
        ("f3", "Δ(E,E,2iσx,2iσx)", "2IyRx", "Sx", "Rx"),
        ("f4", "Δ(2iσx,2iσx,E,E)", "-2IyRx", "Sx", "Rx"),
        ("f5", "Δ(2iσx,E,2iσx,E)", "Ix", "-2SyRx", "Rx"),
        ("f6", "Δ(E,2iσx,E,2iσx)", "Ix", "2SyRx", "Rx"),
        ("f7", "Δ(2iσx,E,E,2iσx)", "-4IySzRx", "-4IzSyRx", "Rx"),
        ("f8", "Δ(E,2iσx,2iσx,E)", "4IySzRx", "4IzSyRx", "Rx"),
    ],
}


def compare(table: Table, expected: list[tuple[str, ...]] | None = None) -> list[Mismatch]:
    """Cell-level differences between a recomputed table and its expected form."""
    expected = EXPECTED[table.number] if expected is None else expected
    out = []
    if len(expected) != len(table.rows):
        out.append(Mismatch(table.number, "*", "*", f"{len(expected)} rows", f"{len(table.rows)} rows"))
    for want, got in zip(expected, table.rows):
        for col, w, g in zip(table.header, want, got):
            if w != g:
                out.append(Mismatch(table.number, got[0], col, w, g))
    return out


def check_all(which: int | None = None) -> tuple[list[Table], list[Mismatch]]:
    numbers = sorted(BUILDERS) if which is None else [which]
    tables, problems = [], []
    for k in numbers:
        if k not in BUILDERS:
            raise ValueError(f"no table {k}; choose 1-5")
        t = BUILDERS[k]()
        tables.append(t)
        problems.extend(compare(t))
    return tables, problems
