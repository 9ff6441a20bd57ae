import pytest

from claimcheck.errors import NoTemplateMatchError, UnresolvedAttributeError
from claimcheck.factspec import normalize_spec_text, serialize_spec
from claimcheck.grammar import TemplateGrammar, default_grammar, parse_filter_phrases
from claimcheck.parsing import COMPOUND, SINGLE, TemplateBackend, split_sentences

from .test_factspec import GOLDEN_SPECS

VALUE_CLAIM = "The average IMDB score for horror movies released in 2020 is 6.7."
EXTREME_CLAIM = "Glenlivet 18 has the highest rating among whiskies originating from Scotland."
ASSOCIATION_CLAIM = "There's a positive correlation between a movie's budget and its gross earnings."
CATEGORIZATION_CLAIM = (
    "There are seven movies that have an IMDb score over 9 and a gross of more than 300 million."
)
TREND_CLAIM = "The unemployment rate experienced a decrease between April 2020 and March 2023."


@pytest.fixture(scope="module")
def backend():
    return TemplateBackend()


# --- sentence splitting -------------------------------------------------------

def test_split_respects_decimals_and_quotes():
    doc = 'The score is 6.7. The movie "E.T. Junior" did well! Done?'
    spans = split_sentences(doc)
    assert [doc[s:e] for s, e in spans] == [
        "The score is 6.7.",
        'The movie "E.T. Junior" did well!',
        "Done?",
    ]


# --- detection -----------------------------------------------------------------

def test_detect_empty_document(backend):
    assert backend.detect_claims("") == []


def test_detect_single_template_sentence(backend):
    doc = "The average points across all players is 23.9."
    records = backend.detect_claims(doc)
    assert len(records) == 1
    start, end = records[0].char_span
    assert doc[start:end] == doc


def test_detect_skips_non_template_sentence(backend):
    doc = (
        "The average points across all players is 23.9. "
        "Basketball is a wonderful sport to watch."
    )
    records = backend.detect_claims(doc)
    assert len(records) == 1
    assert records[0].text.startswith("The average points")


def test_detect_spans_ordered_and_disjoint(backend):
    doc = (
        "The average points across all players is 23.9. Nothing here. "
        "Among all players, Alex Doe is ranked 4th in points."
    )
    records = backend.detect_claims(doc)
    spans = [r.char_span for r in records]
    assert spans == sorted(spans)
    for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
        assert e1 <= s2


# --- compound classification and decomposition ----------------------------------

def test_single_template_sentence_is_single(backend):
    assert backend.classify_compound("The average points across all players is 23.9.") == SINGLE


def test_conjoined_templates_are_compound(backend):
    sentence = (
        "The average points across all players is 23.9 and "
        "Alex Doe is ranked 4th in points."
    )
    assert backend.classify_compound(sentence) == COMPOUND
    facts, diags = backend.decompose(sentence)
    assert len(facts) == 2 and not diags


def test_gerund_tail_compound(backend):
    # a trend claim followed by a ", <gerund>" fragment decomposes in two facts
    sentence = TREND_CLAIM[:-1] + ", logging their first annual decline since June 2020."
    assert backend.classify_compound(sentence) == COMPOUND
    facts, _ = backend.decompose(sentence)
    assert len(facts) == 2
    assert facts[0].startswith("The unemployment rate")
    assert facts[1].startswith("logging")


def test_single_passes_through_decompose(backend):
    facts, diags = backend.decompose(CATEGORIZATION_CLAIM)
    assert facts == [CATEGORIZATION_CLAIM] and not diags


def test_failed_conjunct_drops_with_diagnostic(backend):
    sentence = (
        "The average points across all players is 23.9 and "
        "the weather was lovely that evening."
    )
    facts, diags = backend.decompose(sentence)
    assert len(facts) == 1 and len(diags) == 1
    assert "no template match" in diags[0].message


def test_filters_with_and_stay_single(backend):
    # the conjunction inside the filter list must not split the claim
    assert backend.classify_compound(CATEGORIZATION_CLAIM) == SINGLE


# --- fact type classification ---------------------------------------------------

@pytest.mark.parametrize(
    "claim,fact_type",
    [
        (EXTREME_CLAIM, "extreme"),
        (ASSOCIATION_CLAIM, "association"),
        (VALUE_CLAIM, "value"),
        (CATEGORIZATION_CLAIM, "categorization"),
        (TREND_CLAIM, "trend"),
        ("Among all players, Alex Doe is ranked 4th in points.", "rank"),
        ("The gross of movies follow a right-skew distribution.", "distribution"),
        ("Among all movies, Oppenheimer is an outlier in gross.", "outlier"),
        ("Among all movies, Oppenheimer is an outlier with respect to budget and gross.", "outlier"),
        ("Among all players, Chris Fox exceeds Sam Roe by 12.1 in points.", "difference"),
    ],
)
def test_classify_fact_type(backend, claim, fact_type):
    assert backend.classify_fact_type(claim) == fact_type


def test_classify_no_match(backend):
    with pytest.raises(NoTemplateMatchError):
        backend.classify_fact_type("This sentence matches nothing at all.")


def test_classification_is_order_independent(backend):
    text = default_grammar()
    lines = [
        line for line in open(
            __file__.replace("tests/test_parsing.py", "src/claimcheck/data/templates.grammar")
        ).read().splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    reversed_grammar = TemplateGrammar.from_text("\n".join(reversed(lines)))
    flipped = TemplateBackend(grammar=reversed_grammar)
    for claim in [VALUE_CLAIM, EXTREME_CLAIM, ASSOCIATION_CLAIM, CATEGORIZATION_CLAIM]:
        assert flipped.classify_fact_type(claim) == backend.classify_fact_type(claim)


# --- spec transformation ---------------------------------------------------------

def test_value_row_claim_to_golden_spec(backend, movies):
    spec = backend.to_spec(VALUE_CLAIM, movies)
    assert normalize_spec_text(serialize_spec(spec)) == normalize_spec_text(GOLDEN_SPECS["value"])


def test_extreme_claim_to_golden_spec(backend, whiskies):
    spec = backend.to_spec(EXTREME_CLAIM, whiskies)
    assert normalize_spec_text(serialize_spec(spec)) == normalize_spec_text(GOLDEN_SPECS["extreme"])


def test_categorization_normalizes_large_literal(backend, movies):
    spec = backend.to_spec(CATEGORIZATION_CLAIM, movies)
    assert spec.value == 7
    chips = {p.chip() for p in spec.subspace}
    assert "gross > 300000000" in chips
    assert "IMDb score > 9" in chips


def test_unresolved_attribute(backend, movies):
    with pytest.raises(UnresolvedAttributeError):
        backend.to_spec("The average shoe size across all movies is 11.", movies)


def test_coreference_hook_substitution(movies):
    patched = TemplateBackend(coreference_map={"their gross": "gross"})
    claim = "The average their gross across all movies is 1.0."
    spec = patched.to_spec(patched.resolve_coreference(claim), movies)
    assert spec.measure == "gross"


def test_filter_phrase_shapes():
    raws = parse_filter_phrases("an IMDb score over 9 and a gross of more than 300 million")
    assert [(r.attribute, r.op) for r in raws] == [("IMDb score", ">"), ("gross", ">")]
    raws = parse_filter_phrases("genre is horror")
    assert raws[0].attribute == "genre" and raws[0].op == "="
    raws = parse_filter_phrases("horror")
    assert raws[0].attribute is None


def test_grammar_lint_clean():
    assert default_grammar().lint() == []
