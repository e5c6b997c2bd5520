"""Line-oriented sectioned text documents.

Shared by coloring and certificate files. A document is a sequence of
"[name]" section headers, each followed by "key = value" entries. Blank
lines and full-line "#" comments are ignored. Keys may contain spaces
(row-style entries such as "trans 0 1"). Writers emit a canonical form so
identical inputs produce byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError


@dataclass
class Section:
    name: str
    line: int
    entries: list[tuple[str, str, int]] = field(default_factory=list)

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v, _ in self.entries:
            if k == key:
                return v
        return default

    def require(self, key: str) -> str:
        value = self.get(key)
        if value is None:
            raise ParseError(f"missing key {key!r} in section [{self.name}]",
                             self.line)
        return value

    def rows(self, prefix: str) -> list[tuple[str, str, int]]:
        """Entries whose key starts with ``prefix`` followed by a space."""
        out = []
        for k, v, ln in self.entries:
            if k == prefix or k.startswith(prefix + " "):
                out.append((k[len(prefix):].strip(), v, ln))
        return out


def parse_sections(text: str) -> list[Section]:
    sections: list[Section] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ParseError("malformed section header", line_no)
            sections.append(Section(line[1:-1].strip(), line_no))
            continue
        if not sections:
            raise ParseError("content before the first section header", line_no)
        if "=" not in line:
            raise ParseError("expected 'key = value'", line_no,
                             column=len(raw) - len(raw.lstrip()) + 1)
        key, _, value = line.partition("=")
        sections[-1].entries.append((key.strip(), value.strip(), line_no))
    return sections


def format_sections(sections: Iterable[tuple[str, Iterable[tuple[str, str]]]]) -> str:
    parts = []
    for name, entries in sections:
        parts.append(f"[{name}]")
        for key, value in entries:
            parts.append(f"{key} = {value}")
        parts.append("")
    return "\n".join(parts)
