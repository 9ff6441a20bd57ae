"""Scalar parsing shared across the engine: numbers, dates, ordinals, counts."""
from __future__ import annotations

import re
from datetime import date
from decimal import Decimal

MISSING_TOKENS = {"", "na", "n/a"}

MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4,
    "may": 5, "june": 6, "july": 7, "august": 8,
    "september": 9, "october": 10, "november": 11, "december": 12,
}

# digits with optional sign, currency symbol, and 3-digit grouping
_NUMBER_RE = re.compile(
    r"^(?P<sign>[+-])?\$?(?P<body>(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)$"
)

_ISO_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_MONTH_YEAR_RE = re.compile(r"^([A-Za-z]+)\s+(\d{4})$")
_MDY_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")

_ORDINAL_RE = re.compile(r"^(\d+)(?:st|nd|rd|th)$")

_MAGNITUDES = {
    "thousand": 1e3,
    "million": 1e6,
    "billion": 1e9,
    "trillion": 1e12,
}

_NUMBER_WORDS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
    "nineteen": 19, "twenty": 20,
}


def is_missing(text: str) -> bool:
    return text.strip().lower() in MISSING_TOKENS


def parse_number(text: str) -> float | None:
    """Parse a plain numeric cell, tolerating '$' prefixes and ',' grouping."""
    m = _NUMBER_RE.match(text.strip())
    if m is None:
        return None
    value = float(m.group("body").replace(",", ""))
    return -value if m.group("sign") == "-" else value


def parse_date(text: str) -> date | None:
    """Parse 'YYYY-MM-DD', 'Month YYYY' (day=1), or 'M/D/YYYY'."""
    s = text.strip()
    m = _ISO_RE.match(s)
    if m:
        try:
            return date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        except ValueError:
            return None
    m = _MONTH_YEAR_RE.match(s)
    if m:
        month = MONTHS.get(m.group(1).lower())
        if month is not None:
            return date(int(m.group(2)), month, 1)
        return None
    m = _MDY_RE.match(s)
    if m:
        try:
            return date(int(m.group(3)), int(m.group(1)), int(m.group(2)))
        except ValueError:
            return None
    return None


def parse_ordinal(text: str) -> int | None:
    m = _ORDINAL_RE.match(text.strip())
    return int(m.group(1)) if m else None


def parse_count(text: str) -> int | None:
    """Parse a count written in digits or as a small number word ('seven')."""
    s = text.strip().lower()
    if s in _NUMBER_WORDS:
        return _NUMBER_WORDS[s]
    n = parse_number(s)
    if n is not None and float(n).is_integer() and n >= 0:
        return int(n)
    return None


def parse_quantity(text: str) -> float | None:
    """Parse a claim literal: plain number, '$1,234.5', '300 million', '34.8%'."""
    s = text.strip()
    if s.endswith("%"):
        s = s[:-1].strip()
    parts = s.split()
    if len(parts) == 2 and parts[1].lower() in _MAGNITUDES:
        base = parse_number(parts[0])
        if base is None:
            return None
        return base * _MAGNITUDES[parts[1].lower()]
    return parse_number(s)


def format_number(value: float) -> str:
    """Render a number positionally, without a trailing '.0' on integral values."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    return text


def ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def decimal_places(text: str) -> int:
    """Count decimal places of a numeric claim literal ('6.7' -> 1, '300 million' -> 0)."""
    s = text.strip().rstrip("%").strip()
    s = s.split()[0] if s.split() else s
    s = s.lstrip("+-$")
    if "." in s:
        return len(s.split(".", 1)[1])
    return 0
