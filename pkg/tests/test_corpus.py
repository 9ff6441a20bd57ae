import pytest

from claimcheck.corpus import (
    eval_parser,
    generate_corpus,
    match_specs,
    perturb_spec,
    read_corpus,
    write_corpus,
)
from claimcheck.factspec import (
    FilterPredicate,
    Literal,
    RankFact,
    TrendFact,
    ValueFact,
    parse_spec_json,
)
from claimcheck.parsing import TemplateBackend
from claimcheck.veracity import ACCURATE, INACCURATE, verify


@pytest.fixture(scope="module")
def small_corpus(movies):
    return generate_corpus(movies, per_type=4, seed=7)


def test_counts_per_type(small_corpus):
    assert len(small_corpus) == 40
    by_type = {}
    for e in small_corpus:
        by_type.setdefault(e.fact_type, []).append(e)
    assert len(by_type) == 10
    assert {len(v) for v in by_type.values()} == {4}


def test_zero_per_type(movies):
    assert generate_corpus(movies, per_type=0, seed=7) == []


def test_value_and_outlier_subtype_cycles(small_corpus):
    value_subtypes = [e.subtype for e in small_corpus if e.fact_type == "value"]
    assert value_subtypes == ["value_mean", "value_median", "value_sum", "value_mean"]
    outlier_subtypes = [e.subtype for e in small_corpus if e.fact_type == "outlier"]
    assert outlier_subtypes == ["outlier_1d", "outlier_2d", "outlier_1d", "outlier_2d"]


def test_generation_soundness(movies, small_corpus):
    for e in small_corpus:
        assert verify(movies, e.truth_spec).verdict == e.intended_verdict


def test_balance_half_inaccurate(small_corpus):
    by_type = {}
    for e in small_corpus:
        by_type.setdefault(e.fact_type, []).append(e.intended_verdict)
    for verdicts in by_type.values():
        assert verdicts.count(ACCURATE) == 2 and verdicts.count(INACCURATE) == 2


def test_odd_count_leans_accurate(movies):
    entries = generate_corpus(movies, per_type=3, seed=3)
    by_type = {}
    for e in entries:
        by_type.setdefault(e.fact_type, []).append(e.intended_verdict)
    for verdicts in by_type.values():
        assert verdicts.count(ACCURATE) == 2 and verdicts.count(INACCURATE) == 1


def test_deterministic_under_seed(movies, tmp_path, small_corpus):
    again = generate_corpus(movies, per_type=4, seed=7)
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_corpus(small_corpus, str(p1), "movies", 4, 7)
    write_corpus(again, str(p2), "movies", 4, 7)
    assert p1.read_bytes() == p2.read_bytes()


def test_corpus_round_trip(movies, tmp_path, small_corpus):
    path = tmp_path / "c.jsonl"
    write_corpus(small_corpus, str(path), "movies", 4, 7)
    header, entries = read_corpus(str(path))
    assert header["format"] == "claimcheck-corpus-v1"
    assert header["entries"] == 40
    assert len(entries) == 40
    for orig, loaded in zip(small_corpus, entries):
        assert loaded.claim_text == orig.claim_text
        assert match_specs(loaded.truth_spec, orig.truth_spec).complete


# --- match_specs ---------------------------------------------------------------

def test_match_reflexive(small_corpus):
    for e in small_corpus[:10]:
        m = match_specs(e.truth_spec, e.truth_spec)
        assert m.complete and m.partial == 1.0 and not m.mismatched_fields


def test_match_different_arm():
    value = parse_spec_json('{"measure":"m","value":1,"aggregation":"sum",'
                            '"subspace":[],"identifier_key":"k"}')
    trend = parse_spec_json('{"measure":"m","value":"increase","subspace":[]}')
    m = match_specs(trend, value)
    assert not m.complete and m.partial == 0.0


def test_match_partial_subspace_fraction():
    # truth has 5 fields; one of two subspace filters found -> (4 + 0.5) / 5
    truth = ValueFact(
        measure="gross", value=Literal("6.7", quoted=False), aggregation="average",
        subspace=(
            FilterPredicate("genre", "=", Literal.of_text("horror")),
            FilterPredicate("year", "=", Literal("2020", quoted=False)),
        ),
        identifier_key="movies",
    )
    predicted = ValueFact(
        measure="gross", value=Literal("6.7", quoted=False), aggregation="average",
        subspace=(FilterPredicate("genre", "=", Literal.of_text("horror")),),
        identifier_key="movies",
    )
    m = match_specs(predicted, truth)
    assert not m.complete
    assert m.partial == pytest.approx(0.9)
    assert m.mismatched_fields == ("subspace",)


def test_match_folds_attribute_names():
    a = parse_spec_json('{"measure":"IMDb score","value":6.7,"aggregation":"average",'
                        '"subspace":[],"identifier_key":"movies"}')
    b = parse_spec_json('{"measure":"imdb_score","value":6.70,"aggregation":"average",'
                        '"subspace":[],"identifier_key":"Movies"}')
    assert match_specs(a, b).complete


# --- perturbation -----------------------------------------------------------------

def test_perturb_numeric_value(movies):
    spec = ValueFact(
        measure="IMDb_score", value=Literal("6.7", quoted=False), aggregation="average",
        subspace=(
            FilterPredicate("genre", "=", Literal.of_text("horror")),
            FilterPredicate("year", "=", Literal("2020", quoted=False)),
        ),
        identifier_key="movies",
    )
    assert verify(movies, spec).verdict == ACCURATE
    wrong = perturb_spec(spec, movies, seed=5)
    assert verify(movies, wrong).verdict == INACCURATE


def test_perturb_direction_flip(unemployment):
    spec = TrendFact(
        measure="unemployment_rate", value="decrease",
        subspace=(
            FilterPredicate("month", ">=", Literal.of_text("April 2020")),
            FilterPredicate("month", "<=", Literal.of_text("March 2023")),
        ),
    )
    wrong = perturb_spec(spec, unemployment, seed=1)
    assert wrong.value == "increase"
    assert verify(unemployment, wrong).verdict == INACCURATE


def test_perturb_rank(players):
    spec = RankFact(
        measure="points", value=1,
        focus=(FilterPredicate("player", "=", Literal.of_text("Chris Fox")),),
        subspace=(), identifier_key="players",
    )
    assert verify(players, spec).verdict == ACCURATE
    wrong = perturb_spec(spec, players, seed=2)
    assert wrong.value != 1
    assert verify(players, wrong).verdict == INACCURATE


# --- parser evaluation ----------------------------------------------------------------

def test_template_backend_scores_perfectly(movies, small_corpus):
    report = eval_parser(TemplateBackend(), small_corpus, movies)
    assert report["overall"]["classification_accuracy"] == 1.0
    assert report["overall"]["complete_rate"] == 1.0
    assert report["overall"]["partial_mean"] == 1.0
    assert not report["diagnostics"]
    assert set(report["per_type"]) == {
        "value", "proportion", "trend", "extreme", "rank",
        "association", "difference", "categorization", "distribution", "outlier",
    }


class _EmptyBackend:
    def classify_fact_type(self, fact):
        from claimcheck.errors import NoTemplateMatchError

        raise NoTemplateMatchError(fact)

    def to_spec(self, fact, dataset):
        from claimcheck.errors import NoTemplateMatchError

        raise NoTemplateMatchError(fact)


def test_empty_backend_scores_zero(movies, small_corpus):
    report = eval_parser(_EmptyBackend(), small_corpus, movies)
    assert report["overall"]["complete_rate"] == 0.0
    assert report["overall"]["classification_accuracy"] == 0.0
