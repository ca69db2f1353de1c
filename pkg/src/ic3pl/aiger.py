"""Reading AIGER circuits (ASCII ``aag`` and binary ``aig``)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


class AigerParseError(ValueError):
    """Malformed AIGER input. ``kind`` names the failure, ``line`` is 1-based."""

    def __init__(self, kind: str, message: str, line: Optional[int] = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{kind}: {message}")


@dataclass(frozen=True)
class Latch:
    lit: int
    next: int
    # 0, 1, or None for an uninitialized latch
    reset: Optional[int] = 0


@dataclass(frozen=True)
class AigerModel:
    max_var: int
    inputs: tuple[int, ...] = ()
    latches: tuple[Latch, ...] = ()
    outputs: tuple[int, ...] = ()
    bads: tuple[int, ...] = ()
    ands: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def bad(self) -> int:
        """The single bad-state literal (a ``B`` entry, else the only output)."""
        if self.bads:
            return self.bads[0]
        return self.outputs[0]

    def simulate(self, latch_values, input_values) -> tuple[list[bool], bool]:
        """One step of the circuit: returns (next latch values, bad value)."""
        val = {0: False, 1: True}

        def get(l):
            return val[l & ~1] ^ bool(l & 1)

        for lit, v in zip(self.inputs, input_values):
            val[lit] = bool(v)
        for latch, v in zip(self.latches, latch_values):
            val[latch.lit] = bool(v)
        for lhs, r0, r1 in self.ands:
            val[lhs] = get(r0) and get(r1)
        return [get(l.next) for l in self.latches], get(self.bad)

    def is_initial(self, latch_values) -> bool:
        return all(l.reset is None or bool(l.reset) == bool(v)
                   for l, v in zip(self.latches, latch_values))


def _ints(tokens, lineno, kind="syntax"):
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise AigerParseError(kind, f"expected unsigned integers, got {' '.join(tokens)!r}",
                              lineno) from None
    if any(v < 0 for v in vals):
        raise AigerParseError(kind, "negative number", lineno)
    return vals


def _parse_header(line: str, magic: str, lineno: int = 1) -> list[int]:
    tokens = line.split()
    if not tokens or tokens[0] != magic:
        raise AigerParseError("header", f"expected '{magic}' header", lineno)
    nums = _ints(tokens[1:], lineno, "header")
    if not 5 <= len(nums) <= 9:
        raise AigerParseError(
            "header", f"expected 5 to 9 counts after '{magic}', got {len(nums)}", lineno)
    nums += [0] * (9 - len(nums))
    m, i, l, o, a, b, c, j, f = nums
    if c or j or f:
        raise AigerParseError("unsupported section",
                              "invariant constraints, justice and fairness are not supported",
                              lineno)
    if b > 1 or (b == 0 and o > 1):
        raise AigerParseError("multiple properties",
                              "multiple properties unsupported", lineno)
    if b == 0 and o == 0:
        raise AigerParseError("no property", "model has no output or bad signal", lineno)
    if i + l + a > m:
        raise AigerParseError("header", f"M={m} smaller than I+L+A={i + l + a}", lineno)
    return nums


def _check_tail(lines: list[str], start: int):
    """Only symbol-table entries and a trailing comment may follow the body."""
    for idx in range(start, len(lines)):
        line = lines[idx]
        if line.startswith("c"):
            return
        if not line.strip():
            if not any(rest.strip() for rest in lines[idx:]):
                return
            raise AigerParseError("trailing garbage", "blank line in symbol table", idx + 1)
        if line[0] in "ilob" and len(line) > 1 and line[1:].split(" ", 1)[0].isdigit():
            continue
        raise AigerParseError("trailing garbage", f"unexpected line {line!r}", idx + 1)


def _validate(model: AigerModel, lines_of: dict):
    maxlit = 2 * model.max_var + 1

    def in_range(lit, what):
        if lit > maxlit:
            raise AigerParseError("literal out of range",
                                  f"{what} literal {lit} exceeds {maxlit}", lines_of.get(what))

    defined = set()
    for idx, lit in enumerate(model.inputs):
        ln = lines_of["inputs"] + idx if "inputs" in lines_of else None
        if lit & 1 or lit < 2:
            raise AigerParseError("invalid input", f"input literal {lit} must be even and > 0", ln)
        in_range(lit, "inputs")
        if lit in defined:
            raise AigerParseError("redefinition", f"literal {lit} defined twice", ln)
        defined.add(lit)
    for idx, latch in enumerate(model.latches):
        ln = lines_of["latches"] + idx if "latches" in lines_of else None
        if latch.lit & 1 or latch.lit < 2:
            raise AigerParseError("invalid latch",
                                  f"latch literal {latch.lit} must be even and > 0", ln)
        in_range(latch.lit, "latches")
        in_range(latch.next, "latches")
        if latch.lit in defined:
            raise AigerParseError("redefinition", f"literal {latch.lit} defined twice", ln)
        defined.add(latch.lit)
    for lit in model.outputs:
        in_range(lit, "outputs")
    for lit in model.bads:
        in_range(lit, "bads")
    prev = 0
    for idx, (lhs, r0, r1) in enumerate(model.ands):
        ln = lines_of["ands"] + idx if "ands" in lines_of else None
        if lhs & 1 or lhs < 2:
            raise AigerParseError("invalid and", f"AND lhs {lhs} must be even and > 0", ln)
        if lhs > maxlit or r0 > maxlit or r1 > maxlit:
            raise AigerParseError("literal out of range", f"AND {lhs} {r0} {r1}", ln)
        if lhs <= prev:
            raise AigerParseError("non-monotone and",
                                  f"AND lhs {lhs} not strictly increasing", ln)
        if r0 >= lhs or r1 >= lhs:
            raise AigerParseError("non-monotone and",
                                  f"AND {lhs} uses a literal defined later", ln)
        if lhs in defined:
            raise AigerParseError("redefinition", f"literal {lhs} defined twice", ln)
        defined.add(lhs)
        prev = lhs
    # every used literal must be defined or constant
    used = [l.next for l in model.latches] + list(model.outputs) + list(model.bads)
    used += [r for _, r0, r1 in model.ands for r in (r0, r1)]
    for lit in used:
        if lit > 1 and lit & ~1 not in defined:
            raise AigerParseError("undefined literal", f"literal {lit} is never defined")


def _parse_latch(nums, lineno, cur=None):
    # ascii: cur next [reset]; binary: next [reset] with implicit cur
    if cur is None:
        cur, rest = nums[0], nums[1:]
    else:
        rest = nums
    nxt = rest[0]
    reset: Optional[int] = 0
    if len(rest) == 2:
        r = rest[1]
        if r in (0, 1):
            reset = r
        elif r == cur:
            reset = None
        else:
            raise AigerParseError("invalid latch", f"reset value {r} must be 0, 1 or {cur}",
                                  lineno)
    return Latch(cur, nxt, reset)


def parse_aag(text: str) -> AigerModel:
    """Parse ASCII AIGER text into an :class:`AigerModel`."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise AigerParseError("header", "empty input", 1)
    m, ni, nl, no, na, nb, *_ = _parse_header(lines[0], "aag")
    pos = 1

    def take(n, arity, what):
        nonlocal pos
        rows = []
        for _ in range(n):
            if pos >= len(lines) or not lines[pos].strip():
                raise AigerParseError("truncated", f"missing {what} line", pos + 1)
            nums = _ints(lines[pos].split(), pos + 1)
            if len(nums) not in arity:
                raise AigerParseError("syntax", f"bad {what} line {lines[pos]!r}", pos + 1)
            rows.append((nums, pos + 1))
            pos += 1
        return rows

    lines_of = {}
    lines_of["inputs"] = pos + 1
    inputs = tuple(n[0] for n, _ in take(ni, (1,), "input"))
    lines_of["latches"] = pos + 1
    latches = tuple(_parse_latch(n, ln) for n, ln in take(nl, (2, 3), "latch"))
    lines_of["outputs"] = pos + 1
    outputs = tuple(n[0] for n, _ in take(no, (1,), "output"))
    lines_of["bads"] = pos + 1
    bads = tuple(n[0] for n, _ in take(nb, (1,), "bad"))
    lines_of["ands"] = pos + 1
    ands = tuple(tuple(n) for n, _ in take(na, (3,), "and"))
    model = AigerModel(m, inputs, latches, outputs, bads, ands)
    _validate(model, lines_of)
    _check_tail(lines, pos)
    return model


def _decode_varint(data: bytes, pos: int) -> tuple[int, int]:
    x, shift = 0, 0
    while True:
        if pos >= len(data):
            raise AigerParseError("truncated", "delta encoding ends early")
        b = data[pos]
        pos += 1
        x |= (b & 0x7F) << shift
        if not b & 0x80:
            return x, pos
        shift += 7


def _encode_varint(x: int) -> bytes:
    out = bytearray()
    while x & ~0x7F:
        out.append((x & 0x7F) | 0x80)
        x >>= 7
    out.append(x)
    return bytes(out)


def parse_aig(data: bytes) -> AigerModel:
    """Parse binary AIGER."""
    if not data:
        raise AigerParseError("header", "empty input", 1)
    pos = 0

    def readline():
        nonlocal pos
        end = data.find(b"\n", pos)
        if end < 0:
            raise AigerParseError("truncated", "unexpected end of file")
        line = data[pos:end].decode("ascii", errors="replace")
        pos = end + 1
        return line

    lineno = 1
    m, ni, nl, no, na, nb, *_ = _parse_header(readline(), "aig")
    if m != ni + nl + na:
        raise AigerParseError("header", "binary format requires M = I+L+A", 1)
    inputs = tuple(2 * (k + 1) for k in range(ni))
    latches = []
    for k in range(nl):
        lineno += 1
        nums = _ints(readline().split(), lineno)
        if len(nums) not in (1, 2):
            raise AigerParseError("syntax", "bad latch line", lineno)
        latches.append(_parse_latch(nums, lineno, cur=2 * (ni + k + 1)))
    outputs, bads = [], []
    for dest, n in ((outputs, no), (bads, nb)):
        for _ in range(n):
            lineno += 1
            nums = _ints(readline().split(), lineno)
            if len(nums) != 1:
                raise AigerParseError("syntax", "expected one literal", lineno)
            dest.append(nums[0])
    ands = []
    for k in range(na):
        lhs = 2 * (ni + nl + k + 1)
        d0, pos = _decode_varint(data, pos)
        d1, pos = _decode_varint(data, pos)
        r0 = lhs - d0
        r1 = r0 - d1
        if d0 == 0 or r0 < 0 or r1 < 0:
            raise AigerParseError("invalid and", f"bad delta for AND {lhs}")
        ands.append((lhs, r0, r1))
    model = AigerModel(m, inputs, tuple(latches), tuple(outputs), tuple(bads), tuple(ands))
    _validate(model, {})
    tail = data[pos:].decode("ascii", errors="replace").split("\n")
    _check_tail(tail, 0)
    return model


def write_aag(model: AigerModel) -> str:
    out = [f"aag {model.max_var} {len(model.inputs)} {len(model.latches)} "
           f"{len(model.outputs)} {len(model.ands)}"
           + (f" {len(model.bads)}" if model.bads else "")]
    out += [str(i) for i in model.inputs]
    for l in model.latches:
        reset = l.lit if l.reset is None else l.reset
        out.append(f"{l.lit} {l.next}" + ("" if reset == 0 else f" {reset}"))
    out += [str(o) for o in model.outputs]
    out += [str(b) for b in model.bads]
    out += [f"{a} {b} {c}" for a, b, c in model.ands]
    return "\n".join(out) + "\n"


def write_aig(model: AigerModel) -> bytes:
    """Binary writer; the model must already use the binary variable order."""
    ni, nl = len(model.inputs), len(model.latches)
    if (tuple(model.inputs) != tuple(2 * (k + 1) for k in range(ni))
            or any(l.lit != 2 * (ni + k + 1) for k, l in enumerate(model.latches))
            or any(a[0] != 2 * (ni + nl + k + 1) for k, a in enumerate(model.ands))):
        raise ValueError("model is not in binary AIGER variable order")
    head = (f"aig {model.max_var} {ni} {nl} {len(model.outputs)} {len(model.ands)}"
            + (f" {len(model.bads)}" if model.bads else "") + "\n")
    body = [head]
    for l in model.latches:
        reset = l.lit if l.reset is None else l.reset
        body.append(f"{l.next}" + ("" if reset == 0 else f" {reset}") + "\n")
    body += [f"{o}\n" for o in model.outputs]
    body += [f"{b}\n" for b in model.bads]
    blob = bytearray("".join(body).encode("ascii"))
    for lhs, r0, r1 in model.ands:
        hi, lo = max(r0, r1), min(r0, r1)
        blob += _encode_varint(lhs - hi) + _encode_varint(hi - lo)
    return bytes(blob)


def load(path) -> AigerModel:
    """Read a ``.aag`` or ``.aig`` file, dispatching on the header magic."""
    data = Path(path).read_bytes()
    if data.startswith(b"aig"):
        return parse_aig(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise AigerParseError("header", "file is not ASCII AIGER", 1) from None
    return parse_aag(text)
