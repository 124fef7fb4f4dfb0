"""Error types shared across the package."""

from __future__ import annotations


class SortcellError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(SortcellError):
    """An input file violates its documented schema.

    Carries optional location context (path, line) so CLI users can find
    the offending row without re-parsing the file themselves.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{':'.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")
