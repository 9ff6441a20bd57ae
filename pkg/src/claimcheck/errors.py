"""Exception types shared across the engine."""


class ClaimCheckError(Exception):
    """Base class for all engine errors."""


# --- dataset ingestion ---

class IngestError(ClaimCheckError):
    pass


class EmptyInputError(IngestError):
    pass


class RaggedRowError(IngestError):
    def __init__(self, line: int, expected: int, got: int):
        super().__init__(f"line {line}: expected {expected} cells, got {got}")
        self.line = line
        self.expected = expected
        self.got = got


class DuplicateColumnError(IngestError):
    def __init__(self, name: str):
        super().__init__(f"duplicate column name: {name!r}")
        self.name = name


class EmptyTermsError(ClaimCheckError):
    pass


# --- fact spec parsing ---

class SpecParseError(ClaimCheckError):
    pass


class UnknownShapeError(SpecParseError):
    def __init__(self, keys):
        super().__init__(f"no fact type matches keys {sorted(keys)}")
        self.keys = tuple(keys)


class BadLiteralError(SpecParseError):
    def __init__(self, field: str, detail: str = ""):
        msg = f"bad literal for field {field!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.field = field


# --- retrieval / evaluation ---

class UnknownAttributeError(ClaimCheckError):
    def __init__(self, name: str):
        super().__init__(f"attribute {name!r} does not resolve against the dataset")
        self.name = name


class TypeMismatchError(ClaimCheckError):
    def __init__(self, attribute: str, op: str):
        super().__init__(f"operator {op!r} is not valid for categorical attribute {attribute!r}")
        self.attribute = attribute
        self.op = op


class NoMatchingRowsError(ClaimCheckError):
    pass


# --- claim parsing ---

class NoTemplateMatchError(ClaimCheckError):
    pass


class UnresolvedAttributeError(ClaimCheckError):
    def __init__(self, slot: str):
        super().__init__(f"slot {slot!r} does not resolve against the dataset")
        self.slot = slot


class LiteralParseError(ClaimCheckError):
    def __init__(self, slot: str):
        super().__init__(f"slot {slot!r} holds an unparseable literal")
        self.slot = slot


class GrammarError(ClaimCheckError):
    pass


class LLMBackendError(ClaimCheckError):
    pass


# --- corpus ---

class CannotPerturbError(ClaimCheckError):
    pass


class UnsupportedTypeError(ClaimCheckError):
    def __init__(self, fact_type: str, reason: str):
        super().__init__(f"dataset cannot support {fact_type} claims: {reason}")
        self.fact_type = fact_type
        self.reason = reason


# --- evidence ---

class UnsupportedVerdictError(ClaimCheckError):
    pass


class NoTemporalColumnError(ClaimCheckError):
    pass
