import pytest
from hypothesis import given, settings, strategies as st

from claimcheck.errors import BadLiteralError, UnknownShapeError
from claimcheck.factspec import (
    AssociationFact,
    CategorizationFact,
    DifferenceFact,
    DistributionFact,
    ExtremeFact,
    FilterPredicate,
    Literal,
    OutlierFact,
    ProportionFact,
    RankFact,
    TrendFact,
    ValueFact,
    normalize_spec_text,
    parse_spec_json,
    serialize_spec,
    validate_spec,
)

# The ten published specification examples, one per fact type. The outlier row
# is transcribed with its quoting repaired (the printed source drops a quote
# around the focus attribute and the braces around its subspace entry).
GOLDEN_SPECS = {
    "value": '{"measure": "IMDB score", "value": 6.7, "aggregation": "average", '
             '"subspace": [{"genre"="horror"},{"year"=2020}], "identifier_key": "movies"}',
    "proportion": '{"measure": "gross", "value": "34.8%", '
                  '"focus": [{"director" = "Christopher Nolan"}], '
                  '"subspace": [{"year" = 2013}, {"IMDb_score" > 7}], "identifier_key": "movies"}',
    "trend": '{"measure": "case", "value": "increase", '
             '"subspace": [{"date" >= "March 2020"}, {"date" <= "March 2021"}, {"country" = "US"}]}',
    "extreme": '{"measure": "rating", "value": "max", "focus": [{"brand" = "Glenlivet 18"}], '
               '"subspace": [{"origin" = "Scotland"}], "identifier_key": "whiskies"}',
    "rank": '{"measure": "3PA", "value": 4, "focus": [{"player"="Trae Young"}], '
            '"subspace": [{"position" = "PG"}, {"games_played" > 60}, {"year" = 2023}], '
            '"identifier_key": "players"}',
    "association": '{"measure_x": "budget", "measure_y": "gross", "value": "positive", '
                   '"identifier_key": "movies"}',
    "difference": '{"measure": "points", "value": 6.1, "focus_x": {"player" = "James Harden"}, '
                  '"focus_y": {"player" = "Stephen Curry"}, "subspace": [{"season" = "2019"}]}',
    "categorization": '{"value": 7, "subspace": [{"IMDb_score" > 9}, {"gross">"300,000,000"}], '
                      '"identifier_key": "movies"}',
    "distribution": '{"measure": "acceptance rates", "value": "right-skew distribution", '
                    '"identifier_key": "colleges"}',
    "outlier": '{"measure": "gross", "focus": {"movie" = "Oppenheimer"}, '
               '"subspace": [{"genre" = "historical biopic"}], "identifier_key": "movies"}',
}


@pytest.mark.parametrize("fact_type", sorted(GOLDEN_SPECS))
def test_golden_round_trip(fact_type):
    text = GOLDEN_SPECS[fact_type]
    spec = parse_spec_json(text)
    assert spec.fact_type == fact_type
    assert normalize_spec_text(serialize_spec(spec)) == normalize_spec_text(text)


def test_difference_row_fields():
    spec = parse_spec_json(GOLDEN_SPECS["difference"])
    assert isinstance(spec, DifferenceFact)
    assert spec.measure == "points"
    assert spec.value.as_number() == 6.1
    assert spec.focus_x == FilterPredicate("player", "=", Literal.of_text("James Harden"))
    assert spec.focus_y == FilterPredicate("player", "=", Literal.of_text("Stephen Curry"))
    assert spec.subspace == (FilterPredicate("season", "=", Literal.of_text("2019")),)


def test_value_row_fields():
    spec = parse_spec_json(GOLDEN_SPECS["value"])
    assert isinstance(spec, ValueFact)
    assert spec.aggregation == "average"
    assert spec.value.text == "6.7" and not spec.value.quoted
    assert spec.subspace == (
        FilterPredicate("genre", "=", Literal.of_text("horror")),
        FilterPredicate("year", "=", Literal("2020", quoted=False)),
    )


def test_empty_object_is_unknown_shape():
    with pytest.raises(UnknownShapeError):
        parse_spec_json("{}")


@pytest.mark.parametrize(
    "raw,coerced",
    [
        ('"4"', 4),       # string digits coerce
        ("4", 4),         # plain integer
        ('"12"', 12),
    ],
)
def test_rank_value_coercion(raw, coerced):
    text = ('{"measure": "m", "value": %s, "focus": [{"p"="x"}], '
            '"subspace": [], "identifier_key": "k"}' % raw)
    spec = parse_spec_json(text)
    assert isinstance(spec, RankFact)
    assert spec.value == coerced


def test_rank_value_below_one_rejected():
    text = '{"measure": "m", "value": 0, "focus": [{"p"="x"}], "subspace": [], "identifier_key": "k"}'
    with pytest.raises(BadLiteralError):
        parse_spec_json(text)


def test_proportion_value_out_of_range_rejected():
    text = ('{"measure": "m", "value": "120.5%", "focus": [{"p"="x"}], '
            '"subspace": [], "identifier_key": "k"}')
    with pytest.raises(BadLiteralError):
        parse_spec_json(text)


def test_extra_keys_rejected():
    with pytest.raises(UnknownShapeError):
        parse_spec_json('{"measure": "m", "value": "increase", "subspace": [], "bogus": 1}')


def test_ordering_op_requires_comparable_literal():
    with pytest.raises(BadLiteralError):
        parse_spec_json('{"value": 1, "subspace": [{"a">"not a number"}], "identifier_key": "k"}')
    # dates compare fine
    parse_spec_json('{"value": 1, "subspace": [{"a">="March 2020"}], "identifier_key": "k"}')


def test_bivariate_outlier_extension_round_trips():
    text = ('{"measure":"gross","measure_y":"budget","focus":{"movie"="Tenet"},'
            '"subspace":[],"identifier_key":"movies"}')
    spec = parse_spec_json(text)
    assert isinstance(spec, OutlierFact)
    assert spec.subtype == "outlier_2d"
    assert serialize_spec(spec) == text


# --- randomized round-trip property -----------------------------------------

_attr = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_ 0123456789",
    min_size=1, max_size=12,
).map(lambda s: ("a" + s).strip())

_word = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=10)

_text_literal = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz ABC'-.\\\"0123456789",
    min_size=1, max_size=14,
).map(Literal.of_text)

_num_literal = st.one_of(
    st.integers(-10000, 10000).map(lambda n: Literal.of_number(float(n))),
    st.floats(-1e6, 1e6, allow_nan=False).map(Literal.of_number),
)

_eq_pred = st.builds(
    FilterPredicate, _attr, st.sampled_from(["=", "!="]), st.one_of(_text_literal, _num_literal)
)
_ord_pred = st.builds(
    FilterPredicate, _attr, st.sampled_from([">", ">=", "<", "<="]), _num_literal
)
_pred = st.one_of(_eq_pred, _ord_pred)
_preds = st.lists(_pred, max_size=3).map(tuple)

_pct_literal = st.floats(0, 100, allow_nan=False).map(
    lambda x: Literal.of_text(f"{round(x, 1)}%")
)

_spec = st.one_of(
    st.builds(ValueFact, _attr, _num_literal, st.sampled_from(["average", "median", "sum"]), _preds, _word),
    st.builds(ProportionFact, _attr, _pct_literal, _preds, _preds, _word),
    st.builds(TrendFact, _attr, st.sampled_from(["increase", "decrease"]), _preds),
    st.builds(ExtremeFact, _attr, st.sampled_from(["max", "min"]), _preds, _preds, _word),
    st.builds(RankFact, _attr, st.integers(1, 500), _preds, _preds, _word),
    st.builds(AssociationFact, _attr, _attr, st.sampled_from(["positive", "negative"]), _word,
              st.one_of(st.none(), _preds)),
    st.builds(DifferenceFact, _attr, _num_literal, _eq_pred, _eq_pred, _preds),
    st.builds(CategorizationFact, st.integers(0, 500), _preds, _word),
    st.builds(DistributionFact, _attr,
              st.sampled_from(["right-skew distribution", "left-skew distribution"]), _word,
              st.one_of(st.none(), _preds)),
    st.builds(OutlierFact, _attr, _eq_pred, _preds, _word,
              st.one_of(st.none(), _attr)),
)


@settings(max_examples=60, deadline=None)
@given(_spec)
def test_parse_serialize_round_trip(spec):
    text = serialize_spec(spec)
    # rank literals parsed from text may differ in lexical form only
    again = parse_spec_json(text)
    assert serialize_spec(again) == text
    assert again.fact_type == spec.fact_type


@settings(max_examples=60, deadline=None)
@given(_spec)
def test_serialized_keys_match_arm(spec):
    text = serialize_spec(spec)
    base = {
        "value": ["measure", "value", "aggregation", "subspace", "identifier_key"],
        "proportion": ["measure", "value", "focus", "subspace", "identifier_key"],
        "trend": ["measure", "value", "subspace"],
        "extreme": ["measure", "value", "focus", "subspace", "identifier_key"],
        "rank": ["measure", "value", "focus", "subspace", "identifier_key"],
        "association": ["measure_x", "measure_y", "value", "identifier_key", "subspace"],
        "difference": ["measure", "value", "focus_x", "focus_y", "subspace"],
        "categorization": ["value", "subspace", "identifier_key"],
        "distribution": ["measure", "value", "identifier_key", "subspace"],
        "outlier": ["measure", "measure_y", "focus", "subspace", "identifier_key"],
    }[spec.fact_type]
    import re

    emitted = re.findall(r'"([a-z_]+)":', text)
    assert [k for k in emitted if k in base] == [k for k in base if k in emitted]
    assert set(emitted) <= set(base) | {"identifier_key"}


# --- validation --------------------------------------------------------------

def test_validate_clean_spec(movies):
    spec = parse_spec_json(
        '{"measure":"IMDb_score","value":6.7,"aggregation":"average",'
        '"subspace":[{"genre"="horror"}],"identifier_key":"movies"}'
    )
    assert validate_spec(spec, movies) == []


def test_validate_unknown_attribute(movies):
    spec = parse_spec_json(
        '{"measure":"rating","value":6.7,"aggregation":"average",'
        '"subspace":[],"identifier_key":"movies"}'
    )
    issues = validate_spec(spec, movies)
    assert [i.code for i in issues] == ["UnknownAttribute"]
    assert issues[0].detail == "rating"


def test_validate_ordering_on_categorical(movies):
    spec = parse_spec_json(
        '{"measure":"gross","value":6.7,"aggregation":"average",'
        '"subspace":[{"genre">7}],"identifier_key":"movies"}'
    )
    assert any(i.code == "TypeMismatch" for i in validate_spec(spec, movies))


def test_validate_case_insensitive_attribute(movies):
    spec = parse_spec_json(
        '{"measure":"IMDb score","value":6.7,"aggregation":"average",'
        '"subspace":[],"identifier_key":"movies"}'
    )
    assert validate_spec(spec, movies) == []
