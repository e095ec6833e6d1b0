"""Matrix-blocking message codes over the working matrices G_3 and H_2.

A message is written row-major into a square matrix of side 3m (``fib3``)
or 2m (``lucas2``), cut into 3x3 / 2x2 blocks and each block is sent as its
determinant together with every entry except one (b_5 for ``fib3``, b_2 for
``lucas2``).  The receiver multiplies the known rows by the working matrix
W and solves ``det(W) * d = det(B W)``, which is linear in the withheld
entry.

All arithmetic is on Python integers.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass, field
from enum import Enum

from .circulant import build_G_matrix, build_H_matrix, det_bareiss
from .errors import (
    CorruptPacket,
    DegenerateBlock,
    EmptyMessage,
    InvalidPacket,
    PacketFormatError,
    UnsupportedCharacter,
)
from .polyseq import IntRecurrenceParams

__all__ = [
    "ALPHABET",
    "MODULUS",
    "PACKET_VERSION",
    "Algorithm",
    "CharTable",
    "Block",
    "BlockRecord",
    "CodePacket",
    "BlockSolution",
    "BlockCheck",
    "VerificationReport",
    "working_matrix",
    "normalize_message",
    "char_to_code",
    "code_to_char",
    "choose_n",
    "build_blocks",
    "encode",
    "solve_block",
    "decode",
    "decode_blocks",
    "verify_packet",
    "serialize_packet",
    "deserialize_packet",
]

ALPHABET = string.ascii_uppercase + "0"
MODULUS = 27
PACKET_VERSION = 1
_DEFAULT_PARAMS = IntRecurrenceParams(1, 1)


class Algorithm(str, Enum):
    FIB3 = "fib3"
    LUCAS2 = "lucas2"

    @property
    def size(self) -> int:
        return 3 if self is Algorithm.FIB3 else 2

    @property
    def hidden(self) -> int:
        """0-based row-major position of the withheld entry."""
        return 4 if self is Algorithm.FIB3 else 1

    @property
    def retained_positions(self) -> tuple:
        k = self.size * self.size
        return tuple(i for i in range(k) if i != self.hidden)


def _algorithm(kind) -> Algorithm:
    try:
        return Algorithm(kind)
    except ValueError:
        raise ValueError(f"unknown algorithm {kind!r}; expected 'fib3' or 'lucas2'") from None


@dataclass(frozen=True)
class CharTable:
    """Offset-n bijection between ALPHABET and 1..27."""

    offset: int

    def __post_init__(self):
        if self.offset < 1:
            raise ValueError(f"table offset must be positive, got {self.offset}")

    def code(self, ch: str) -> int:
        if len(ch) != 1 or ch not in ALPHABET:
            raise UnsupportedCharacter(ch, 0)
        rank = ALPHABET.index(ch)
        return (self.offset + rank - 1) % MODULUS + 1

    def char(self, value: int) -> str:
        if not 1 <= value <= MODULUS:
            raise ValueError(f"code {value} outside 1..{MODULUS}")
        return ALPHABET[(value - self.offset) % MODULUS]

    def as_dict(self) -> dict:
        return {ch: self.code(ch) for ch in ALPHABET}


def char_to_code(ch: str, table: CharTable) -> int:
    return table.code(ch)


def code_to_char(value: int, table: CharTable) -> str:
    return table.char(value)


@dataclass(frozen=True)
class Block:
    entries: tuple
    kind: Algorithm

    def __post_init__(self):
        size = self.kind.size
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"{self.kind.value} blocks are {size}x{size}")

    @property
    def flat(self) -> list:
        return [v for row in self.entries for v in row]

    def det(self) -> int:
        return det_bareiss(self.entries)


@dataclass(frozen=True)
class BlockRecord:
    d: int
    retained: tuple


@dataclass(frozen=True)
class CodePacket:
    algorithm: Algorithm
    n: int
    b: int
    original_length: int
    records: tuple

    def __post_init__(self):
        object.__setattr__(self, "algorithm", _algorithm(self.algorithm))
        object.__setattr__(self, "records", tuple(self.records))
        if self.b < 1:
            raise InvalidPacket(f"block count must be positive, got {self.b}")
        if self.b != len(self.records):
            raise InvalidPacket(f"b={self.b} but {len(self.records)} records")
        if math.isqrt(self.b) ** 2 != self.b:
            raise InvalidPacket(f"block count {self.b} is not a perfect square")
        if self.n != choose_n(self.b, self.algorithm):
            raise InvalidPacket(f"n={self.n} does not match b={self.b}")
        side = self.algorithm.size * math.isqrt(self.b)
        if not 0 <= self.original_length <= side * side:
            raise InvalidPacket(f"original_length {self.original_length} exceeds capacity")
        want = len(self.algorithm.retained_positions)
        for i, rec in enumerate(self.records):
            if len(rec.retained) != want:
                raise InvalidPacket(f"record {i + 1} retains {len(rec.retained)} entries, expected {want}")


def working_matrix(kind, params: IntRecurrenceParams = _DEFAULT_PARAMS) -> list:
    """G_3 (fib3) or H_2 (lucas2) as integer rows."""
    kind = _algorithm(kind)
    if kind is Algorithm.FIB3:
        return build_G_matrix(params, 3).to_rows()
    return build_H_matrix(params, 2).to_rows()


def normalize_message(text: str, kind) -> tuple:
    """Uppercase, spaces to "0", pad with "0" to the next square size.

    Returns ``(padded, original_length)``.
    """
    kind = _algorithm(kind)
    if not text:
        raise EmptyMessage("message is empty")
    out = []
    for i, ch in enumerate(text):
        up = ch.upper()
        if ch == " ":
            out.append("0")
        elif len(up) == 1 and up in ALPHABET:
            out.append(up)
        else:
            raise UnsupportedCharacter(ch, i)
    side = kind.size
    while side * side < len(out):
        side += kind.size
    out.extend("0" * (side * side - len(out)))
    return "".join(out), len(text)


def choose_n(b: int, kind) -> int:
    kind = _algorithm(kind)
    if b < 1:
        raise ValueError("block count must be positive")
    return kind.size if b == 1 else kind.size * b


def build_blocks(padded: str, table: CharTable, kind) -> list:
    """Split the row-major message matrix into blocks, row of blocks by row of blocks."""
    kind = _algorithm(kind)
    size = kind.size
    side = math.isqrt(len(padded))
    if side * side != len(padded) or side % size or side == 0:
        raise ValueError(f"padded length {len(padded)} is not a square of a multiple of {size}")
    codes = [table.code(ch) for ch in padded]
    per_row = side // size
    blocks = []
    for br in range(per_row):
        for bc in range(per_row):
            rows = tuple(
                tuple(codes[(br * size + i) * side + bc * size + j] for j in range(size))
                for i in range(size)
            )
            blocks.append(Block(rows, kind))
    return blocks


def encode(message: str, kind) -> CodePacket:
    kind = _algorithm(kind)
    padded, original_length = normalize_message(message, kind)
    side = math.isqrt(len(padded))
    b = (side // kind.size) ** 2
    n = choose_n(b, kind)
    blocks = build_blocks(padded, CharTable(n), kind)
    records = []
    for block in blocks:
        flat = block.flat
        records.append(BlockRecord(block.det(), tuple(flat[k] for k in kind.retained_positions)))
    return CodePacket(kind, n, b, original_length, tuple(records))


@dataclass(frozen=True)
class BlockSolution:
    """Intermediate values of the withheld-entry solve for one block.

    ``e_values`` maps 1-based labels of E = B W entries that do not depend on
    the withheld entry to their values.  ``lhs = det(W) * d`` and the
    equation is ``lhs = c0 + c1 * x``.
    """

    index: int
    e_values: dict
    lhs: int
    c0: int
    c1: int
    x: int


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _linear_coefficients(known_flat, kind, w):
    """(c0, c1, e_values) with det(B W) = c0 + c1 * x, x the withheld entry."""
    size = kind.size
    hid_row, hid_col = divmod(kind.hidden, size)
    base = [known_flat[i * size : (i + 1) * size] for i in range(size)]
    e0 = _matmul(base, w)
    # x enters only row hid_row of E, with coefficients W[hid_col]
    c0 = det_bareiss(e0)
    c1 = 0
    for j in range(size):
        minor = [[e0[r][c] for c in range(size) if c != j] for r in range(size) if r != hid_row]
        cof = (-1) ** (hid_row + j) * det_bareiss(minor)
        c1 += cof * w[hid_col][j]
    e_values = {
        r * size + c + 1: e0[r][c] for r in range(size) for c in range(size) if r != hid_row
    }
    return c0, c1, e_values


def _ratio_text(num, den):
    if den < 0:
        num, den = -num, -den
    return f"{num}/{den}"


def solve_block(
    record: BlockRecord, kind, w=None, det_w=None, index: int = 1, padding_code: int = None
) -> BlockSolution:
    """Recover the withheld entry of one block.

    ``padding_code`` is the table code of "0" when the withheld position is
    known to lie in the padding; it is then used if the equation does not
    involve x, after checking that ``det(W) * d`` still matches.

    Raises DegenerateBlock when the equation does not involve x and no
    padding value applies, CorruptPacket when x is not an integer in 1..27
    or a retained entry is outside that range.
    """
    kind = _algorithm(kind)
    if w is None:
        w = working_matrix(kind)
    if det_w is None:
        det_w = det_bareiss(w)
    for v in record.retained:
        if not 1 <= v <= MODULUS:
            raise CorruptPacket(f"block {index}: retained entry {v} outside 1..{MODULUS}", block=index)
    known = [0] * (kind.size * kind.size)
    for pos, v in zip(kind.retained_positions, record.retained):
        known[pos] = v
    c0, c1, e_values = _linear_coefficients(known, kind, w)
    lhs = det_w * record.d
    if c1 == 0:
        if padding_code is None:
            raise DegenerateBlock(
                f"block {index}: coefficient of the withheld entry is zero, entry undetermined", block=index
            )
        if lhs != c0:
            raise CorruptPacket(f"block {index}: det(W)*d={lhs} but det(BW)={c0}", block=index)
        return BlockSolution(index, e_values, lhs, c0, c1, padding_code)
    x, rem = divmod(lhs - c0, c1)
    if rem:
        raise CorruptPacket(
            f"block {index}: withheld entry {_ratio_text(lhs - c0, c1)} is not an integer", block=index
        )
    if not 1 <= x <= MODULUS:
        raise CorruptPacket(f"block {index}: withheld entry {x} outside 1..{MODULUS}", block=index)
    return BlockSolution(index, e_values, lhs, c0, c1, x)


def _working(kind, params):
    w = working_matrix(kind, params)
    det_w = det_bareiss(w)
    if det_w == 0:
        raise ValueError(f"working matrix for {kind.value} with p={params.p}, q={params.q} is singular")
    return w, det_w


def _padding_codes(packet: CodePacket) -> list:
    """Per block, the code of "0" if its withheld entry sits in the padding, else None."""
    kind = packet.algorithm
    size = kind.size
    per_row = math.isqrt(packet.b)
    side = per_row * size
    zero = CharTable(packet.n).code("0")
    hid_r, hid_c = divmod(kind.hidden, size)
    out = []
    for idx in range(packet.b):
        br, bc = divmod(idx, per_row)
        pos = (br * size + hid_r) * side + bc * size + hid_c
        out.append(zero if pos >= packet.original_length else None)
    return out


def _rebuild(record, kind, x):
    size = kind.size
    flat = [0] * (size * size)
    for pos, v in zip(kind.retained_positions, record.retained):
        flat[pos] = v
    flat[kind.hidden] = x
    return Block(tuple(tuple(flat[r * size : (r + 1) * size]) for r in range(size)), kind)


def decode_blocks(packet: CodePacket, params: IntRecurrenceParams = _DEFAULT_PARAMS) -> list:
    """Reconstructed blocks, in packet order."""
    kind = packet.algorithm
    w, det_w = _working(kind, params)
    blocks = []
    pads = _padding_codes(packet)
    for i, rec in enumerate(packet.records, start=1):
        sol = solve_block(rec, kind, w, det_w, index=i, padding_code=pads[i - 1])
        blocks.append(_rebuild(rec, kind, sol.x))
    return blocks


def _assemble(blocks, kind, b):
    size = kind.size
    per_row = math.isqrt(b)
    side = per_row * size
    grid = [[0] * side for _ in range(side)]
    for idx, block in enumerate(blocks):
        br, bc = divmod(idx, per_row)
        for i in range(size):
            for j in range(size):
                grid[br * size + i][bc * size + j] = block.entries[i][j]
    return [v for row in grid for v in row]


def decode(packet: CodePacket, params: IntRecurrenceParams = _DEFAULT_PARAMS, restore_spaces: bool = True) -> str:
    """Recover the message; "0" separators become spaces unless told otherwise."""
    blocks = decode_blocks(packet, params)
    table = CharTable(packet.n)
    text = "".join(table.char(v) for v in _assemble(blocks, packet.algorithm, packet.b))
    text = text[: packet.original_length]
    return text.replace("0", " ") if restore_spaces else text


@dataclass
class BlockCheck:
    index: int
    solvable: bool = False
    integral: bool = False
    in_range: bool = False
    det_matches: bool = False
    x: int = None
    reasons: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.solvable and self.integral and self.in_range and self.det_matches


@dataclass
class VerificationReport:
    blocks: list

    @property
    def ok(self) -> bool:
        return all(b.ok for b in self.blocks)

    @property
    def failed(self) -> list:
        return [b for b in self.blocks if not b.ok]

    def lines(self) -> list:
        out = []
        for b in self.blocks:
            status = "ok" if b.ok else "FAIL"
            detail = f"x={b.x}" if b.ok else "; ".join(b.reasons)
            out.append(f"block {b.index}: {status} ({detail})")
        return out


def verify_packet(packet: CodePacket, params: IntRecurrenceParams = _DEFAULT_PARAMS) -> VerificationReport:
    """Audit every block without raising.

    Checks per block: the withheld entry is determined (or known padding),
    integral, inside 1..27, and the rebuilt block has determinant d.
    """
    kind = packet.algorithm
    w, det_w = _working(kind, params)
    pads = _padding_codes(packet)
    checks = []
    for i, rec in enumerate(packet.records, start=1):
        chk = BlockCheck(i)
        checks.append(chk)
        bad = [v for v in rec.retained if not 1 <= v <= MODULUS]
        if bad:
            chk.reasons.append(f"retained entries {bad} outside 1..{MODULUS}")
        known = [0] * (kind.size * kind.size)
        for pos, v in zip(kind.retained_positions, rec.retained):
            known[pos] = v
        c0, c1, _ = _linear_coefficients(known, kind, w)
        lhs = det_w * rec.d
        if c1 == 0:
            if pads[i - 1] is None:
                chk.reasons.append("coefficient of withheld entry is zero, entry undetermined")
                continue
            x = pads[i - 1]
        else:
            x, rem = divmod(lhs - c0, c1)
            if rem:
                chk.solvable = True
                chk.reasons.append(f"withheld entry {_ratio_text(lhs - c0, c1)} is not an integer")
                continue
        chk.solvable = chk.integral = True
        chk.x = x
        if not 1 <= x <= MODULUS:
            chk.reasons.append(f"withheld entry {x} outside 1..{MODULUS}")
        elif not bad:
            chk.in_range = True
        if _rebuild(rec, kind, x).det() == rec.d:
            chk.det_matches = True
        else:
            chk.reasons.append("determinant of rebuilt block differs from d")
    return VerificationReport(checks)


_FIELDS = ("version", "algorithm", "n", "b", "original_length", "records")


def serialize_packet(packet: CodePacket) -> str:
    """Canonical compact JSON, fields in fixed order, integers only."""
    obj = {
        "version": PACKET_VERSION,
        "algorithm": packet.algorithm.value,
        "n": packet.n,
        "b": packet.b,
        "original_length": packet.original_length,
        "records": [{"d": r.d, "retained": list(r.retained)} for r in packet.records],
    }
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def _want_int(value, path):
    if type(value) is not int:
        raise PacketFormatError(f"expected an integer, got {type(value).__name__}", path)
    return value


def _reject_float(token):
    raise ValueError(f"non-integer number {token}")


def deserialize_packet(text) -> CodePacket:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as exc:
        raise PacketFormatError(exc.msg, f"line {exc.lineno} column {exc.colno} (char {exc.pos})") from None
    except ValueError as exc:
        raise PacketFormatError(str(exc)) from None
    if not isinstance(obj, dict):
        raise PacketFormatError("packet must be a JSON object", "$")
    for key in _FIELDS:
        if key not in obj:
            raise PacketFormatError(f"missing field {key!r}", "$")
    extra = set(obj) - set(_FIELDS)
    if extra:
        raise PacketFormatError(f"unexpected fields {sorted(extra)}", "$")
    if _want_int(obj["version"], "version") != PACKET_VERSION:
        raise PacketFormatError(f"unsupported version {obj['version']}", "version")
    try:
        algorithm = Algorithm(obj["algorithm"])
    except ValueError:
        raise PacketFormatError(f"unknown algorithm {obj['algorithm']!r}", "algorithm") from None
    records = obj["records"]
    if not isinstance(records, list):
        raise PacketFormatError("records must be an array", "records")
    parsed = []
    for i, rec in enumerate(records):
        path = f"records[{i}]"
        if not isinstance(rec, dict) or set(rec) != {"d", "retained"}:
            raise PacketFormatError('record must be {"d": int, "retained": [int, ...]}', path)
        retained = rec["retained"]
        if not isinstance(retained, list):
            raise PacketFormatError("retained must be an array", f"{path}.retained")
        parsed.append(
            BlockRecord(
                _want_int(rec["d"], f"{path}.d"),
                tuple(_want_int(v, f"{path}.retained[{j}]") for j, v in enumerate(retained)),
            )
        )
    return CodePacket(
        algorithm,
        _want_int(obj["n"], "n"),
        _want_int(obj["b"], "b"),
        _want_int(obj["original_length"], "original_length"),
        tuple(parsed),
    )
