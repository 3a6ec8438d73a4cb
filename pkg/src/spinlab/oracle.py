"""Two-bit boolean functions and the oracle unitaries that evaluate them."""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass

import numpy as np

from .algebra import E, SIGMA_X, delta_block, equal_up_to_global_phase

INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


class FunctionClass(str, enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    NEITHER = "neither"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of ``f: {0,1}^2 -> {0,1}``.

    ``table[m]`` is ``f(i, j)`` for ``(i, j) = INPUTS[m]``.
    """

    table: tuple[int, int, int, int]
    label: str | None = None

    def __post_init__(self):
        table = tuple(int(b) for b in self.table)
        if len(table) != 4 or any(b not in (0, 1) for b in table):
            raise ValueError(f"truth table must be four bits, got {self.table!r}")
        object.__setattr__(self, "table", table)
        if self.label is not None and self.label in PAPER_TABLES:
            if PAPER_TABLES[self.label] != table:
                raise ValueError(f"label {self.label} does not match table {table}")

    def __call__(self, i: int, j: int) -> int:
        return self.table[2 * i + j]

    @property
    def name(self) -> str:
        return self.label or self.bits

    @property
    def bits(self) -> str:
        return "".join(str(b) for b in self.table)

    @classmethod
    def parse(cls, text: str) -> "BooleanFunction":
        """Accept ``f1``..``f8`` or a four-character bit string such as ``1100``."""
        text = text.strip()
        key = text.lower()
        if key in PAPER_TABLES:
            return PAPER_FUNCTIONS[key]
        if re.fullmatch(r"[01]{4}", text):
            table = tuple(int(c) for c in text)
            for label, known in PAPER_TABLES.items():
                if known == table:
                    return PAPER_FUNCTIONS[label]
            return cls(table)
        raise ValueError(f"invalid function {text!r}: use f1..f8 or a 4-bit truth table like 0110")


# Outputs for x = 00, 01, 10, 11.
PAPER_TABLES: dict[str, tuple[int, int, int, int]] = {
    "f1": (0, 0, 0, 0),
    "f2": (1, 1, 1, 1),
    "f3": (0, 0, 1, 1),
    "f4": (1, 1, 0, 0),
    "f5": (1, 0, 1, 0),
    "f6": (0, 1, 0, 1),
    "f7": (1, 0, 0, 1),
    "f8": (0, 1, 1, 0),
}

PAPER_FUNCTIONS: dict[str, BooleanFunction] = {
    label: BooleanFunction(table, label) for label, table in PAPER_TABLES.items()
}


def paper_functions() -> list[BooleanFunction]:
    return list(PAPER_FUNCTIONS.values())


def all_functions() -> list[BooleanFunction]:
    """All sixteen two-bit functions, labelled where they appear in PAPER_TABLES."""
    out = []
    for table in itertools.product((0, 1), repeat=4):
        labels = [k for k, v in PAPER_TABLES.items() if v == table]
        out.append(BooleanFunction(table, labels[0] if labels else None))
    return out


def classify(f: BooleanFunction) -> FunctionClass:
    zeros = f.table.count(0)
    if zeros in (0, 4):
        return FunctionClass.CONSTANT
    if zeros == 2:
        return FunctionClass.BALANCED
    return FunctionClass.NEITHER


def oracle_unitary(f: BooleanFunction) -> np.ndarray:
    """Permutation ``|i j k> -> |i j (k xor f(i, j))>`` as an 8x8 matrix."""
    u = np.zeros((8, 8), dtype=complex)
    for i, j, k in itertools.product((0, 1), repeat=3):
        src = 4 * i + 2 * j + k
        dst = 4 * i + 2 * j + (k ^ f(i, j))
        u[dst, src] = 1
    return u


def delta_form(f: BooleanFunction) -> tuple[np.ndarray, ...]:
    """Blocks of the oracle: ``2 sigma_x`` where ``f = 1``, ``E`` elsewhere."""
    return tuple(2 * SIGMA_X if b else E for b in f.table)


def experimental_unitary(f: BooleanFunction) -> np.ndarray:
    """Propagator of simultaneous line-selective pi pulses on the lines with ``f = 1``.

    Each pulsed block is ``2i sigma_x``; ``f1`` (no pulse) is the identity.
    """
    return delta_block(*(2j * SIGMA_X if b else E for b in f.table))


def phase_correction(f: BooleanFunction) -> np.ndarray:
    """Diagonal ``D`` with ``oracle_unitary(f) == experimental_unitary(f) @ D``."""
    return delta_block(*(-1j * E if b else E for b in f.table))


def correction_is_trivial(f: BooleanFunction) -> bool:
    """True when the phase correction is the identity up to a global phase."""
    return equal_up_to_global_phase(phase_correction(f), np.eye(8))
