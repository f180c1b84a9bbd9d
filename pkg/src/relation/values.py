"""Typed values: integers, decimals, timestamps, text and the absent marker."""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import Any, Callable, Union

from src.relation.errors import ValueTypeError

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
MILLIS_PER_DAY = 86_400_000

_CLOCK = re.compile(r"^(\d{1,2}):(\d{2})$")
_INTEGER = re.compile(r"^[-+]?\d+$")
_DECIMAL = re.compile(r"^[-+]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][-+]?\d+)$")


class Domain(Enum):
    """Domain tag of an attribute."""

    INTEGER = "integer"
    DECIMAL = "decimal"
    TIMESTAMP = "timestamp"
    TEXT = "text"

    def parse(self, text: str) -> Value:
        """Parse a cell into a value of this domain.

        Raises:
            ValueError: If the text is not a literal of this domain.
        """
        text = text.strip()
        if self is Domain.INTEGER:
            if not _INTEGER.match(text):
                raise ValueError(f"not an integer: {text!r}")
            return int(text)
        if self is Domain.DECIMAL:
            if not (_DECIMAL.match(text) or _INTEGER.match(text)):
                raise ValueError(f"not a decimal: {text!r}")
            try:
                return Decimal(text)
            except InvalidOperation as e:
                raise ValueError(f"not a decimal: {text!r}") from e
        if self is Domain.TIMESTAMP:
            return Timestamp.parse(text)
        return text


@dataclass(frozen=True, order=True)
class Timestamp:
    """A point in time, UTC milliseconds since the epoch."""

    millis: int

    @classmethod
    def parse(cls, text: str) -> Timestamp:
        """Parse ``HH:MM`` (anchored on 1970-01-01) or an ISO-8601 timestamp."""
        clock = _CLOCK.match(text)
        if clock:
            hours, minutes = int(clock.group(1)), int(clock.group(2))
            if hours > 23 or minutes > 59:
                raise ValueError(f"not a clock time: {text!r}")
            return cls((hours * 60 + minutes) * 60_000)
        iso = text[:-1] + "+00:00" if text.endswith("Z") else text
        try:
            moment = datetime.fromisoformat(iso)
        except ValueError as e:
            raise ValueError(f"not a timestamp: {text!r}") from e
        if moment.tzinfo is None:
            moment = moment.replace(tzinfo=timezone.utc)
        return cls((moment - EPOCH) // timedelta(milliseconds=1))

    def render(self) -> str:
        """Whole minutes of the epoch day print as ``HH:MM``, everything else as ISO."""
        if 0 <= self.millis < MILLIS_PER_DAY and self.millis % 60_000 == 0:
            minutes = self.millis // 60_000
            return f"{minutes // 60:02d}:{minutes % 60:02d}"
        moment = EPOCH + timedelta(milliseconds=self.millis)
        return moment.isoformat(timespec="milliseconds").replace("+00:00", "Z")

    def __str__(self) -> str:
        return self.render()


class _Absent:
    """Marker for an attribute without a value."""

    _instance: _Absent | None = None

    def __new__(cls) -> _Absent:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"

    def __reduce__(self) -> str:
        return "ABSENT"


ABSENT = _Absent()

Value = Union[int, Decimal, Timestamp, str, _Absent]


def is_absent(value: Any) -> bool:
    return value is ABSENT


def domain_of(value: Any) -> Domain | None:
    """Domain of a concrete value; None for ABSENT.

    Raises:
        TypeError: If the object is not a dfq value.
    """
    if value is ABSENT:
        return None
    if isinstance(value, bool):
        raise TypeError(f"booleans are not values: {value!r}")
    if isinstance(value, int):
        return Domain.INTEGER
    if isinstance(value, Decimal):
        return Domain.DECIMAL
    if isinstance(value, Timestamp):
        return Domain.TIMESTAMP
    if isinstance(value, str):
        return Domain.TEXT
    raise TypeError(f"unsupported value type {type(value).__name__}")


class Theta(Enum):
    """Binary comparison operators."""

    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def mirrored(self) -> Theta:
        """Operator obtained by swapping the operands (a < b is b > a)."""
        return _MIRROR[self]

    @property
    def function(self) -> Callable[[Any, Any], bool]:
        return _FUNCTIONS[self]


_MIRROR = {
    Theta.EQ: Theta.EQ,
    Theta.NE: Theta.NE,
    Theta.LT: Theta.GT,
    Theta.LE: Theta.GE,
    Theta.GT: Theta.LT,
    Theta.GE: Theta.LE,
}

_FUNCTIONS: dict[Theta, Callable[[Any, Any], bool]] = {
    Theta.EQ: operator.eq,
    Theta.NE: operator.ne,
    Theta.LT: operator.lt,
    Theta.LE: operator.le,
    Theta.GT: operator.gt,
    Theta.GE: operator.ge,
}


def compare(theta: Theta, left: Value, right: Value) -> bool:
    """Evaluate ``left theta right`` under two-valued logic.

    Any comparison involving ABSENT is false, including ``ABSENT != ABSENT``.

    Raises:
        ValueTypeError: If the operands belong to different domains.
    """
    if left is ABSENT or right is ABSENT:
        return False
    if domain_of(left) is not domain_of(right):
        raise ValueTypeError(left, right)
    return _FUNCTIONS[theta](left, right)


def render_value(value: Value) -> str:
    """Display text for a value; ABSENT displays as the empty string."""
    if value is ABSENT:
        return ""
    if isinstance(value, Decimal):
        return format(value, "f")
    if isinstance(value, Timestamp):
        return value.render()
    return str(value)


def format_literal(value: Value) -> str:
    """Query-language literal for a value."""
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"
    if isinstance(value, Decimal):
        text = format(value, "f")
        return text if "." in text else text + ".0"
    if isinstance(value, Timestamp):
        return value.render()
    if value is ABSENT:
        raise ValueError("ABSENT has no literal form")
    return str(value)


def sort_key(value: Value) -> tuple[int, Any]:
    """Ordering key for display: ABSENT first, then the domain's own order."""
    if value is ABSENT:
        return (0, 0)
    return (1, value)


def json_value(value: Value) -> Any:
    """JSON-compatible form of a value."""
    if value is ABSENT:
        return None
    if isinstance(value, (Decimal, Timestamp)):
        return render_value(value)
    return value
