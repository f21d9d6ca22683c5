"""Boolean functions and their XOR-query oracles.

A function f: {0,1}^n -> {0,1}^m is stored as its truth table.  Its oracle
is the permutation |x>|y> -> |x>|y XOR f(x)> on n+m qubits, input register
first (most significant).  The four one-bit functions, uniform hypothesis
families over them, and exhaustive enumeration of small (n, m) families all
live here, together with the text format the CLI reads.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import discrim
from .errors import IndexOutOfRange, ParseError, TooLarge, WidthMismatch
from .linalg import StateVector

# enumerate_functions refuses families whose truth tables exceed this many
# bits (2^ENUM_GUARD_BITS members); keeps exhaustive enumeration in memory.
ENUM_GUARD_BITS = 20


@dataclass(frozen=True)
class BoolFunc:
    """Truth table of an n-bit to m-bit Boolean function.

    ``table[x]`` is the integer value f(x), output bits packed most
    significant first.
    """

    n: int
    m: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if self.n < 0 or self.m < 1:
            raise ValueError(f"need n >= 0 and m >= 1, got n={self.n}, m={self.m}")
        if len(self.table) != 1 << self.n:
            raise ValueError(
                f"table needs {1 << self.n} entries for n={self.n}, got {len(self.table)}"
            )
        top = 1 << self.m
        for x, v in enumerate(self.table):
            if not 0 <= v < top:
                raise ValueError(f"table entry {v} at x={x} outside [0, {top})")

    def __call__(self, x: int) -> int:
        if not 0 <= x < 1 << self.n:
            raise IndexOutOfRange(f"input {x} outside [0, {1 << self.n})")
        return self.table[x]

    @property
    def num_qubits(self) -> int:
        return self.n + self.m


@dataclass(frozen=True)
class OracleFamily:
    """Prior-weighted hypothesis set of same-shape Boolean functions."""

    members: tuple[BoolFunc, ...]
    priors: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "priors", tuple(float(p) for p in self.priors))
        if not self.members:
            raise ValueError("a family needs at least one member")
        if len(self.priors) != len(self.members):
            raise ValueError(
                f"{len(self.members)} members but {len(self.priors)} priors"
            )
        shape = (self.members[0].n, self.members[0].m)
        for f in self.members:
            if (f.n, f.m) != shape:
                raise WidthMismatch(
                    f"member shapes differ: ({f.n},{f.m}) vs ({shape[0]},{shape[1]})"
                )
        if any(p < 0.0 for p in self.priors):
            raise ValueError("priors must be non-negative")
        total = sum(self.priors)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"priors sum to {total!r}, expected 1 within 1e-12")

    @classmethod
    def uniform(cls, members) -> "OracleFamily":
        members = tuple(members)
        if not members:
            raise ValueError("a family needs at least one member")
        return cls(members, (1.0 / len(members),) * len(members))

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def m(self) -> int:
        return self.members[0].m

    @property
    def num_qubits(self) -> int:
        return self.members[0].num_qubits


def oracle_permutation(f: BoolFunc) -> np.ndarray:
    """Basis-index map of the oracle: index i goes to ``perm[i]``."""
    idx = np.arange(1 << f.num_qubits)
    x = idx >> f.m
    y = idx & ((1 << f.m) - 1)
    table = np.asarray(f.table, dtype=np.int64)
    return (x << f.m) | (y ^ table[x])


def oracle_unitary(f: BoolFunc) -> np.ndarray:
    """Permutation matrix of |x>|y> -> |x>|y XOR f(x)>, entries exactly 0/1."""
    perm = oracle_permutation(f)
    dim = perm.shape[0]
    u = np.zeros((dim, dim), dtype=np.complex128)
    u[perm, np.arange(dim)] = 1.0
    return u


def apply_oracle(f: BoolFunc, state: StateVector) -> StateVector:
    """Oracle action on a state, as an amplitude permutation."""
    if state.num_qubits != f.num_qubits:
        raise WidthMismatch(
            f"state has {state.num_qubits} qubits, oracle needs {f.num_qubits}"
        )
    inv = np.argsort(oracle_permutation(f))
    return StateVector(state.amplitudes[inv])


def canonical_one_bit_family() -> OracleFamily:
    """The four one-bit functions (constant 0, constant 1, identity, NOT)."""
    return OracleFamily.uniform(
        (
            BoolFunc(1, 1, (0, 0)),
            BoolFunc(1, 1, (1, 1)),
            BoolFunc(1, 1, (0, 1)),
            BoolFunc(1, 1, (1, 0)),
        )
    )


def enumerate_functions(n: int, m: int) -> list[BoolFunc]:
    """All 2^(m*2^n) functions of the given shape, lexicographic table order."""
    bits = m * (1 << n)
    if bits > ENUM_GUARD_BITS:
        raise TooLarge(
            f"(n={n}, m={m}) needs {bits} truth-table bits; "
            f"the enumeration guard is ENUM_GUARD_BITS = {ENUM_GUARD_BITS}"
        )
    return [
        BoolFunc(n, m, tbl)
        for tbl in itertools.product(range(1 << m), repeat=1 << n)
    ]


def full_family(n: int, m: int) -> OracleFamily:
    """Uniform family over every function of the given shape."""
    return OracleFamily.uniform(enumerate_functions(n, m))


def post_oracle_states(probe: StateVector, fam: OracleFamily) -> "discrim.Ensemble":
    """Ensemble of oracle outputs {O_f |probe>} with the family's priors."""
    if probe.num_qubits != fam.num_qubits:
        raise WidthMismatch(
            f"probe has {probe.num_qubits} qubits, family needs {fam.num_qubits}"
        )
    dim = 1 << fam.num_qubits
    states = np.empty((len(fam.members), dim), dtype=np.complex128)
    for i, f in enumerate(fam.members):
        inv = np.argsort(oracle_permutation(f))
        states[i] = probe.amplitudes[inv]
    return discrim.Ensemble(fam.priors, states)


_TOKEN_RE = re.compile(r"[A-Za-z_]+|[0-9]+|[=,]|\S")


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - text.rfind("\n", 0, offset)
    return line, col


class _Tokens:
    def __init__(self, text: str) -> None:
        self.text = text
        self.items = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def fail(self, expected: str, token=None) -> None:
        if token is None:
            token = self.peek()
        if token is None:
            offset, found = len(self.text), "end of input"
        else:
            offset, found = token[1], f"'{token[0]}'"
        line, col = _line_col(self.text, offset)
        raise ParseError(f"expected {expected}, found {found}", line=line, column=col)

    def take_word(self, word: str):
        tok = self.peek()
        if tok is None or tok[0] != word:
            self.fail(f"'{word}'")
        self.pos += 1
        return tok

    def take_int(self):
        tok = self.peek()
        if tok is None or not tok[0].isdigit():
            self.fail("an integer")
        self.pos += 1
        return int(tok[0]), tok


def _parse_record(toks: _Tokens) -> BoolFunc:
    toks.take_word("n")
    toks.take_word("=")
    n, ntok = toks.take_int()
    toks.take_word("m")
    toks.take_word("=")
    m, mtok = toks.take_int()
    if m < 1:
        toks.fail("m >= 1", mtok)
    if n > 16 or m > 16 or n + m > 20:
        toks.fail("a desk-scale shape (n <= 16, m <= 16, n + m <= 20)", ntok)
    table_tok = toks.take_word("table")
    toks.take_word("=")
    entries = [toks.take_int()]
    while toks.peek() is not None and toks.peek()[0] == ",":
        toks.pos += 1
        entries.append(toks.take_int())
    expected = 1 << n
    if len(entries) != expected:
        toks.fail(f"{expected} table entries for n={n}, found {len(entries)}", table_tok)
    top = 1 << m
    for value, tok in entries:
        if value >= top:
            toks.fail(f"a table entry below {top} (m={m})", tok)
    return BoolFunc(n, m, tuple(value for value, _ in entries))


def parse_truth_table(text: str) -> BoolFunc:
    """Parse ``n=<int> m=<int> table=<comma-separated ints>``.

    Whitespace (including newlines) may appear between any two tokens.
    Errors carry 1-based line and column of the offending token.
    """
    toks = _Tokens(text)
    f = _parse_record(toks)
    if toks.peek() is not None:
        toks.fail("end of input")
    return f


def parse_family(text: str) -> OracleFamily:
    """Parse one or more truth-table records into a uniform-prior family."""
    toks = _Tokens(text)
    funcs = [_parse_record(toks)]
    while toks.peek() is not None:
        funcs.append(_parse_record(toks))
    return OracleFamily.uniform(funcs)
