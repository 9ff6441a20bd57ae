"""Claim-template grammar shared by the parser and the corpus generator.

A grammar file holds one template per line in the form ``TYPE ::= pattern``
where the pattern mixes literal text with ``{SLOT:kind}`` placeholders. The
same template both renders synthetic claims and matches claim text back into
slots, which is what keeps generation and parsing in exact agreement.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import GrammarError
from .values import parse_count, parse_date, parse_ordinal, parse_quantity

# slot kind -> capture regex (matched case-insensitively)
_SLOT_RES = {
    "attr": r"[A-Za-z][A-Za-z0-9_'/\- ]*?",
    "entity": r"[A-Za-z0-9][A-Za-z0-9_'./\- ]*?",
    "term": r"[A-Za-z0-9][A-Za-z0-9_'./\- ]*?",
    "word": r"[A-Za-z][A-Za-z_\-]*",
    "number": r"\$?-?\d[\d,]*(?:\.\d+)?(?:\s(?:thousand|million|billion|trillion))?",
    "percent": r"\d+(?:\.\d+)?%",
    "count": r"(?:\d+|zero|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve"
             r"|thirteen|fourteen|fifteen|sixteen|seventeen|eighteen|nineteen|twenty)",
    "ordinal": r"\d+(?:st|nd|rd|th)",
    "date": r"(?:\d{4}-\d{2}-\d{2}|[A-Za-z]+ \d{4}|\d{1,2}/\d{1,2}/\d{4})",
    "direction": r"(?:an |a )?(?:increase|decrease)",
    "corr": r"(?:positive|negative)",
    "skew": r"(?:right|left)",
    "mmx": r"(?:highest|largest|greatest|lowest|smallest|fewest)",
    # permissive; the phrase list is validated by parse_filter_phrases afterwards
    "filters": r"(?:[^,]|,(?=\d))+?",
}

_SLOT_TOKEN_RE = re.compile(r"\{([A-Z][A-Z0-9_]*):([a-z]+)\}")

_MAX_FACT_TYPES = {
    "value_mean": "value", "value_median": "value", "value_sum": "value",
    "outlier_1d": "outlier", "outlier_2d": "outlier",
}


def fact_type_of(subtype: str) -> str:
    return _MAX_FACT_TYPES.get(subtype, subtype)


@dataclass(frozen=True)
class RawFilter:
    """A filter phrase before dataset resolution; attribute None means a bare
    value whose column must be looked up."""
    attribute: str | None
    op: str
    literal_text: str


_ARTICLE_RE = re.compile(r"^(?:a|an|the)\s+", re.IGNORECASE)

# connector -> operator, tried in order (longer phrases first)
_FP_CONNECTORS = [
    (r"(?:is|are|was|were)\s+(?:more\s+than|greater\s+than|over|above)", ">"),
    (r"(?:is|are|was|were)\s+at\s+least", ">="),
    (r"(?:is|are|was|were)\s+(?:less\s+than|fewer\s+than|under|below)", "<"),
    (r"(?:is|are|was|were)\s+at\s+most", "<="),
    (r"(?:is|are|was|were)\s+not", "!="),
    (r"(?:is|are|was|were)", "="),
    (r"(?:of\s+)?(?:more|greater)\s+than", ">"),
    (r"(?:of\s+)?(?:less|fewer)\s+than", "<"),
    (r"(?:of\s+)?at\s+least", ">="),
    (r"(?:of\s+)?at\s+most", "<="),
    (r"(?:over|above)", ">"),
    (r"(?:under|below)", "<"),
]
_FP_RES = [
    (re.compile(rf"^(?P<attr>[A-Za-z][A-Za-z0-9_'/\- ]*?)\s+(?:{pat})\s+(?P<lit>.+)$", re.IGNORECASE), op)
    for pat, op in _FP_CONNECTORS
]
_BARE_TERM_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_'./\- ]*$")


def parse_filter_phrases(text: str) -> list[RawFilter]:
    """Parse an 'and'-joined filter phrase list; raises GrammarError when any
    phrase has no recognizable shape."""
    filters = []
    for phrase in re.split(r"\s+and\s+", text.strip()):
        phrase = _ARTICLE_RE.sub("", phrase.strip())
        if not phrase:
            raise GrammarError(f"empty filter phrase in {text!r}")
        for pattern, op in _FP_RES:
            m = pattern.match(phrase)
            if m:
                lit = m.group("lit").strip().strip('"')
                if op != "=" and op != "!=" and parse_quantity(lit) is None and parse_date(lit) is None:
                    continue  # ordering needs a comparable literal; retry laxer patterns
                filters.append(RawFilter(m.group("attr").strip(), op, lit))
                break
        else:
            if _BARE_TERM_RE.match(phrase):
                filters.append(RawFilter(None, "=", phrase))
            else:
                raise GrammarError(f"unparseable filter phrase {phrase!r}")
    return filters


def _validate_slot(kind: str, value: str) -> bool:
    if kind == "filters":
        try:
            parse_filter_phrases(value)
        except GrammarError:
            return False
        return True
    if kind == "number":
        return parse_quantity(value) is not None
    if kind == "percent":
        return parse_quantity(value) is not None
    if kind == "count":
        return parse_count(value) is not None
    if kind == "ordinal":
        return parse_ordinal(value) is not None
    if kind == "date":
        return parse_date(value) is not None
    return True


@dataclass(frozen=True)
class Template:
    subtype: str
    pattern: str
    slots: tuple[tuple[str, str], ...]  # (name, kind) in pattern order
    parse_only: bool
    regex: re.Pattern
    literal_weight: int  # non-slot characters; higher = more specific

    @property
    def fact_type(self) -> str:
        return fact_type_of(self.subtype)


def _compile_template(subtype: str, pattern: str, parse_only: bool) -> Template:
    slots = []
    parts = []
    last = 0
    literal_chars = 0
    for m in _SLOT_TOKEN_RE.finditer(pattern):
        name, kind = m.group(1), m.group(2)
        if kind not in _SLOT_RES:
            raise GrammarError(f"unknown slot kind {kind!r} in {pattern!r}")
        literal = pattern[last:m.start()]
        literal_chars += len(literal)
        parts.append(re.escape(literal))
        parts.append(f"(?P<{name}>{_SLOT_RES[kind]})")
        slots.append((name, kind))
        last = m.end()
    tail = pattern[last:]
    literal_chars += len(tail)
    parts.append(re.escape(tail))
    regex = re.compile("^" + "".join(parts) + "$", re.IGNORECASE)
    return Template(subtype, pattern, tuple(slots), parse_only, regex, literal_chars)


def _normalize_sentence(text: str) -> str:
    text = re.sub(r"\s+", " ", text.strip())
    return re.sub(r"[.!?]+$", "", text).strip()


class TemplateGrammar:
    def __init__(self, templates: list[Template]):
        if not templates:
            raise GrammarError("empty grammar")
        self.templates = tuple(templates)

    @classmethod
    def from_text(cls, text: str) -> "TemplateGrammar":
        templates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "::=" not in line:
                raise GrammarError(f"line {lineno}: missing '::='")
            head, pattern = (part.strip() for part in line.split("::=", 1))
            parse_only = head.startswith("~")
            subtype = head.lstrip("~").strip()
            templates.append(_compile_template(subtype, pattern, parse_only))
        return cls(templates)

    @classmethod
    def load(cls, path: str | None = None) -> "TemplateGrammar":
        if path is None:
            text = resources.files("claimcheck.data").joinpath("templates.grammar").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return cls.from_text(text)

    def match_all(self, sentence: str) -> list[tuple[Template, dict[str, str]]]:
        normalized = _normalize_sentence(sentence)
        hits = []
        for template in self.templates:
            m = template.regex.match(normalized)
            if not m:
                continue
            slots = {name: m.group(name).strip() for name, _ in template.slots}
            if all(_validate_slot(kind, slots[name]) for name, kind in template.slots):
                hits.append((template, slots))
        return hits

    def match(self, sentence: str) -> tuple[Template, dict[str, str]] | None:
        """The most specific match; ambiguity across fact subtypes is a grammar
        defect and raises so it cannot pass silently."""
        hits = self.match_all(sentence)
        if not hits:
            return None
        subtypes = {t.subtype for t, _ in hits}
        best = sorted(hits, key=lambda h: (-h[0].literal_weight, h[0].pattern))[0]
        if len(subtypes) > 1:
            top_weight = best[0].literal_weight
            rivals = {t.subtype for t, _ in hits if t.literal_weight == top_weight}
            if len(rivals) > 1:
                raise GrammarError(
                    f"ambiguous templates {sorted(rivals)} match {sentence!r}"
                )
        return best

    def matches(self, sentence: str) -> bool:
        return bool(self.match_all(sentence))

    def render(self, template: Template, slots: dict[str, str]) -> str:
        out = template.pattern
        for name, _ in template.slots:
            out = out.replace("{%s:%s}" % (name, dict(template.slots)[name]), slots[name])
        return out + "."

    def generatable(self, subtype: str) -> list[Template]:
        return [t for t in self.templates if t.subtype == subtype and not t.parse_only]

    def lint(self) -> list[str]:
        problems = []
        seen = set()
        for t in self.templates:
            if t.pattern in seen:
                problems.append(f"duplicate pattern: {t.pattern!r}")
            seen.add(t.pattern)
            if not t.parse_only and not t.slots:
                problems.append(f"generatable template without slots: {t.pattern!r}")
        return problems


_default: TemplateGrammar | None = None


def default_grammar() -> TemplateGrammar:
    global _default
    if _default is None:
        _default = TemplateGrammar.load()
    return _default
