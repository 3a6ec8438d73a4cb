"""Operator algebra for systems of coupled spin-1/2 nuclei.

Operators are plain complex ``numpy`` arrays of shape ``(2**n, 2**n)``.
The computational basis is ordered ``|i j k ...>`` with spin 1 as the most
significant bit and ``|0>`` the m = +1/2 state, so for three spins (I, S, R)
the block-diagonal ``delta_block`` layout is indexed by the state of I and S.

Product operators use the usual normalization ``2**(q-1) * prod(half-Pauli)``
for a term with ``q`` factors (e.g. ``2IyRx``); every non-identity term then
satisfies ``tr(B @ B) = 2**(n-2)``, which is 2 for three spins.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

AXES = ("x", "y", "z")
SPIN_LABELS = "ISR"

#: Pauli x normalized so that tr(sigma_x @ sigma_x) = 1/2.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex) / 2
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex) / 2
E = np.eye(2, dtype=complex)

_HALF_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

HERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-10


def labels_for(n: int) -> str:
    """Single-letter spin labels used when rendering terms for ``n`` spins."""
    if n == 3:
        return SPIN_LABELS
    return "ABCDEFGH"[:n]


def _check_dim(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else 0
    if dim < 2 or 2**n != dim:
        raise ValueError(f"operator dimension {dim} is not a power of two")
    return n


def n_spins(op: np.ndarray) -> int:
    """Number of spins for a square operator; raises on bad shapes."""
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {op.shape}")
    return _check_dim(op.shape[0])


def is_hermitian(op: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    op = np.asarray(op)
    scale = max(1.0, float(np.max(np.abs(op), initial=0.0)))
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= atol * scale)


def is_unitary(op: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    op = np.asarray(op)
    return unitarity_error(op) <= atol


def unitarity_error(op: np.ndarray) -> float:
    """Max-norm distance of ``U^dagger U`` from the identity."""
    op = np.asarray(op)
    return float(np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0]))))


def spin_operator(spin: int, axis: str, n: int = 3) -> np.ndarray:
    """Half-Pauli operator for one spin embedded in an ``n``-spin space.

    ``spin`` is 1-based: for three spins 1 = I, 2 = S, 3 = R.
    """
    if not 1 <= spin <= n:
        raise ValueError(f"spin index {spin} out of range 1..{n}")
    if axis not in _HALF_PAULI:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    out = np.eye(1, dtype=complex)
    for s in range(1, n + 1):
        out = np.kron(out, _HALF_PAULI[axis] if s == spin else E)
    return out


def total_spin_operator(axis: str, n: int = 3, spins: Iterable[int] | None = None) -> np.ndarray:
    """Sum of ``spin_operator`` over ``spins`` (all spins by default)."""
    spins = range(1, n + 1) if spins is None else spins
    out = np.zeros((2**n, 2**n), dtype=complex)
    for s in spins:
        out += spin_operator(s, axis, n)
    return out


_TERM_RE = re.compile(r"([A-Za-z])([xyz])")
_SUMMAND = r"([+-]?)(\d+(?:\.\d+)?\*)?(\d*(?:[A-Za-z][xyz])+|E)"
_SUMMAND_RE = re.compile(_SUMMAND)
_EXPANSION_RE = re.compile(rf"(?:{_SUMMAND})+")


@dataclass(frozen=True, order=False)
class Term:
    """A normalized product-operator basis element such as ``2IyRx``.

    ``factors`` is a sorted tuple of ``(spin, axis)`` pairs with 1-based spin
    indices; the empty tuple is the identity.
    """

    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        factors = tuple(sorted((int(s), a) for s, a in self.factors))
        spins = [s for s, _ in factors]
        if len(set(spins)) != len(spins):
            raise ValueError(f"repeated spin in term factors {factors}")
        for s, a in factors:
            if s < 1 or a not in AXES:
                raise ValueError(f"bad factor ({s}, {a!r})")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, factors: Mapping[int, str] | Iterable[tuple[int, str]]) -> "Term":
        if isinstance(factors, Mapping):
            factors = factors.items()
        return cls(tuple(factors))

    @classmethod
    def parse(cls, text: str, labels: str = SPIN_LABELS) -> "Term":
        """Parse labels like ``"Ix"``, ``"2IyRx"``, ``"4IzSyRx"`` or ``"E"``."""
        text = text.strip()
        if text in ("E", "1"):
            return cls()
        m = re.fullmatch(r"(\d*)((?:[A-Za-z][xyz])+)", text)
        if not m:
            raise ValueError(f"cannot parse product-operator term {text!r}")
        prefix, body = m.groups()
        factors = []
        for letter, axis in _TERM_RE.findall(body):
            if letter not in labels:
                raise ValueError(f"unknown spin label {letter!r} in {text!r}")
            factors.append((labels.index(letter) + 1, axis))
        term = cls(tuple(factors))
        if prefix and int(prefix) != term.normalization:
            raise ValueError(f"term {text!r} should carry prefix {term.normalization}")
        if not prefix and term.order > 1:
            raise ValueError(f"term {text!r} is missing its normalization prefix")
        return term

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def normalization(self) -> float:
        return 2.0 ** (self.order - 1) if self.factors else 1.0

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.factors)

    def axis(self, spin: int) -> str | None:
        return dict(self.factors).get(spin)

    def sort_key(self) -> tuple:
        return (self.order, self.spins, tuple(AXES.index(a) for _, a in self.factors))

    def label(self, labels: str = SPIN_LABELS) -> str:
        if not self.factors:
            return "E"
        body = "".join(f"{labels[s - 1]}{a}" for s, a in self.factors)
        return body if self.order == 1 else f"{int(self.normalization)}{body}"

    def __str__(self) -> str:
        return self.label()


def product_operator(term: Term | str, n: int = 3) -> np.ndarray:
    """Matrix of a normalized product-operator term."""
    if isinstance(term, str):
        term = Term.parse(term, labels_for(n))
    if any(s > n for s in term.spins):
        raise ValueError(f"term {term} refers to a spin beyond n = {n}")
    if not term.factors:
        return np.eye(2**n, dtype=complex)
    axes = dict(term.factors)
    out = np.eye(1, dtype=complex)
    for s in range(1, n + 1):
        out = np.kron(out, _HALF_PAULI[axes[s]] if s in axes else E)
    return term.normalization * out


@functools.lru_cache(maxsize=8)
def basis_terms(n: int = 3) -> tuple[Term, ...]:
    """All ``4**n`` product-operator terms in canonical order."""
    terms = []
    for choice in itertools.product((None,) + AXES, repeat=n):
        terms.append(Term(tuple((s + 1, a) for s, a in enumerate(choice) if a is not None)))
    return tuple(sorted(terms, key=Term.sort_key))


@functools.lru_cache(maxsize=8)
def _basis_stack(n: int) -> tuple[np.ndarray, np.ndarray]:
    stack = np.array([product_operator(t, n) for t in basis_terms(n)])
    norms = np.einsum("kij,kji->k", stack, stack).real
    stack.setflags(write=False)
    norms.setflags(write=False)
    return stack, norms


class BasisExpansion:
    """Coefficients of an operator over the normalized product-operator basis.

    Missing terms read as zero.  Coefficients are stored as complex numbers;
    ``real`` drops the imaginary parts, which vanish for Hermitian operators.
    """

    def __init__(self, coefficients: Mapping[Term, complex] | None = None, n: int = 3):
        self.n = n
        self._c: dict[Term, complex] = {}
        for term, value in (coefficients or {}).items():
            if isinstance(term, str):
                term = Term.parse(term, labels_for(n))
            if value != 0:
                self._c[term] = complex(value)

    @classmethod
    def parse(cls, text: str, n: int = 3) -> "BasisExpansion":
        """Parse sums like ``"Ix + Sx - 2IxRx"`` (unit or decimal coefficients)."""
        labels = labels_for(n)
        cleaned = text.replace("\u2212", "-").replace(" ", "")
        if cleaned in ("", "0"):
            return cls({}, n)
        if not _EXPANSION_RE.fullmatch(cleaned):
            raise ValueError(f"cannot parse expansion {text!r}")
        coeffs: dict[Term, complex] = {}
        for sign, num, body in _SUMMAND_RE.findall(cleaned):
            value = float(num[:-1]) if num else 1.0
            term = Term.parse(body, labels)
            coeffs[term] = coeffs.get(term, 0) + (-value if sign == "-" else value)
        return cls(coeffs, n)

    def __getitem__(self, term: Term | str) -> complex:
        if isinstance(term, str):
            term = Term.parse(term, labels_for(self.n))
        return self._c.get(term, 0j)

    def __iter__(self):
        return iter(sorted(self._c, key=Term.sort_key))

    def __len__(self) -> int:
        return len(self._c)

    def items(self):
        return [(t, self._c[t]) for t in self]

    def real(self) -> dict[Term, float]:
        return {t: c.real for t, c in self.items()}

    def nonzero(self, tol: float = 1e-10) -> dict[Term, complex]:
        return {t: c for t, c in self.items() if abs(c) > tol}

    def max_imag(self) -> float:
        return max((abs(c.imag) for c in self._c.values()), default=0.0)

    def to_operator(self) -> np.ndarray:
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for term, c in self._c.items():
            out += c * product_operator(term, self.n)
        return out

    def isclose(self, other: "BasisExpansion", atol: float = 1e-10) -> bool:
        terms = set(self._c) | set(other._c)
        return all(abs(self[t] - other[t]) <= atol for t in terms)

    def render(self, tol: float = 1e-9, precision: int = 6) -> str:
        """Canonical text form: terms in basis order, explicit signs."""
        labels = labels_for(self.n)
        parts = []
        for term, c in self.items():
            value = c.real
            if abs(value) <= tol:
                continue
            mag = abs(value)
            body = term.label(labels)
            if abs(mag - 1.0) > tol:
                body = f"{round(mag, precision):g}*{body}"
            sign = "-" if value < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"BasisExpansion({self.render()!r})"


def expand(op: np.ndarray) -> BasisExpansion:
    """Expand an operator over the product-operator basis.

    The coefficient of term ``B`` is ``tr(B @ A) / tr(B @ B)``.
    """
    op = np.asarray(op, dtype=complex)
    n = n_spins(op)
    stack, norms = _basis_stack(n)
    coeffs = np.einsum("kij,ji->k", stack, op) / norms
    return BasisExpansion({t: c for t, c in zip(basis_terms(n), coeffs) if c != 0}, n)


def delta_block(*blocks: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix of 2x2 blocks.

    For three spins ``delta_block(b1, b2, b3, b4)`` places block ``m`` on the
    subspace where (I, S) = (0,0), (0,1), (1,0), (1,1) respectively.
    """
    if not blocks:
        raise ValueError("delta_block needs at least one block")
    _check_dim(2 * len(blocks))
    out = np.zeros((2 * len(blocks), 2 * len(blocks)), dtype=complex)
    for m, block in enumerate(blocks):
        block = np.asarray(block)
        if block.shape != (2, 2):
            raise ValueError(f"block {m + 1} has shape {block.shape}, expected (2, 2)")
        out[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = block
    return out


def matrix_exponential(hamiltonian: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Propagator ``exp(-i H t)`` for a Hermitian ``H`` (angular units)."""
    hamiltonian = np.asarray(hamiltonian, dtype=complex)
    n_spins(hamiltonian)
    if not is_hermitian(hamiltonian):
        raise ValueError("matrix_exponential requires a Hermitian operator")
    w, v = np.linalg.eigh(hamiltonian)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def conjugate(unitary: np.ndarray, op: np.ndarray) -> np.ndarray:
    """``U A U^dagger``."""
    return unitary @ op @ unitary.conj().T


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Global-phase-insensitive overlap ``|tr(U^dagger V)| / dim``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def global_phase_between(u: np.ndarray, v: np.ndarray) -> complex:
    """Unit phase ``c`` minimizing ``|u - c v|``; raises if ``v`` is zero."""
    overlap = np.vdot(v, u)
    if abs(overlap) == 0:
        raise ValueError("operators are orthogonal; no global phase relates them")
    return overlap / abs(overlap)


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, atol: float = 1e-10) -> bool:
    """True if ``u = exp(i phi) v`` elementwise within ``atol``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        return False
    if not np.any(v) or not np.any(u):
        return bool(np.allclose(u, v, atol=atol, rtol=0))
    return bool(np.max(np.abs(u - global_phase_between(u, v) * v)) <= atol)
