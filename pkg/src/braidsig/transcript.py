"""Protocol messages, transcripts, and the phase discipline shared by sessions.

A transcript is a text file: ``# key=value`` header lines followed by one
line per message::

    <step#> <role> <msg-name> <item> ; <item> ; ...

Items are braids in canonical serialization, lowercase hex for byte
strings, decimal integers, or bare words (verdicts).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .braid import CanonicalForm
from .codec import Commitment, format_braid, parse_braid
from .errors import InvariantViolation, ParseError, PhaseError

_HEX = re.compile(r"[0-9a-f]{64}")
_INT = re.compile(r"-?\d{1,18}")
_WORD = re.compile(r"[a-z][a-z-]*")


def _render(item: Any) -> str:
    if isinstance(item, CanonicalForm):
        return format_braid(item)
    if isinstance(item, Commitment):
        return item.hex()
    if isinstance(item, bytes):
        return item.hex()
    if isinstance(item, bool):
        raise TypeError("booleans are not transcript items")
    if isinstance(item, int):
        return str(item)
    if isinstance(item, str) and _WORD.fullmatch(item):
        return item
    raise TypeError(f"cannot render {item!r}")


def _parse_item(text: str, n: int | None) -> Any:
    if text.startswith("B "):
        try:
            return parse_braid(text, n)
        except InvariantViolation as exc:
            raise ParseError(f"invalid braid in transcript: {exc}") from None
    if _HEX.fullmatch(text):
        return bytes.fromhex(text)
    if _INT.fullmatch(text):
        return int(text)
    if _WORD.fullmatch(text):
        return text
    raise ParseError(f"unrecognised transcript item {text!r}")


@dataclass(frozen=True)
class Message:
    step: int
    role: str
    name: str
    payload: tuple = ()

    def to_line(self) -> str:
        head = f"{self.step} {self.role} {self.name}"
        if not self.payload:
            return head
        return head + " " + " ; ".join(_render(p) for p in self.payload)

    @classmethod
    def from_line(cls, line: str, n: int | None = None) -> Message:
        parts = line.split(" ", 3)
        if len(parts) < 3:
            raise ParseError(f"short transcript line {line!r}")
        try:
            step = int(parts[0])
        except ValueError:
            raise ParseError(f"bad step number in {line!r}") from None
        role, name = parts[1], parts[2]
        if role not in ("P", "V"):
            raise ParseError(f"unknown role {role!r}")
        payload = ()
        if len(parts) == 4:
            payload = tuple(_parse_item(chunk, n) for chunk in parts[3].split(" ; "))
        return cls(step, role, name, payload)


@dataclass
class Transcript:
    header: dict[str, str] = field(default_factory=dict)
    messages: list[Message] = field(default_factory=list)

    def append(self, msg: Message) -> None:
        self.messages.append(msg)

    def to_text(self) -> str:
        lines = [f"# {k}={v}" for k, v in self.header.items()]
        lines += [m.to_line() for m in self.messages]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Transcript:
        header: dict[str, str] = {}
        messages: list[Message] = []
        n = None
        for line in text.splitlines():
            if not line:
                continue
            if line.startswith("# "):
                key, sep, value = line[2:].partition("=")
                if not sep:
                    raise ParseError(f"bad header line {line!r}")
                header[key] = value
                if key == "n":
                    n = int(value)
                continue
            messages.append(Message.from_line(line, n))
        return cls(header, messages)

    def find(self, step: int) -> Message | None:
        for m in self.messages:
            if m.step == step:
                return m
        return None


class Session:
    """Single-owner protocol state machine with a linear phase counter."""

    role = "?"

    def __init__(self, transcript: Transcript | None = None):
        self.phase = 0
        self.transcript = transcript

    def _enter(self, expected: int, action: str) -> None:
        if self.phase != expected:
            raise PhaseError(f"{type(self).__name__}: cannot {action} in phase {self.phase} (needs {expected})")

    def _emit(self, step: int, name: str, *payload: Any) -> Message:
        msg = Message(step, self.role, name, tuple(payload))
        if self.transcript is not None:
            self.transcript.append(msg)
        return msg
