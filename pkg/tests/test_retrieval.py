import datetime

import pytest

from claimcheck.errors import NoMatchingRowsError, TypeMismatchError
from claimcheck.factspec import FilterPredicate, Literal, parse_spec_json
from claimcheck.retrieval import evaluate_predicate, retrieve


def spec_of(text):
    return parse_spec_json(text)


def test_equality_on_numeric(movies):
    pred = FilterPredicate("year", "=", Literal("2020", quoted=False))
    hits = [i for i in range(movies.n_rows) if evaluate_predicate(i, pred, movies)]
    # brute force over raw cells
    want = [i for i, row in enumerate(movies.rows) if row[3] == "2020"]
    assert hits == want and len(hits) == 4


def test_temporal_month_literal(movies):
    # date >= "March 2020" means calendar day 2020-03-01
    pred = FilterPredicate("release_date", ">=", Literal.of_text("March 2020"))
    hits = [i for i in range(movies.n_rows) if evaluate_predicate(i, pred, movies)]
    j = movies.column_index("release_date")
    want = [
        i for i in range(movies.n_rows)
        if movies.date_at(i, j) is not None
        and movies.date_at(i, j) >= datetime.date(2020, 3, 1)
    ]
    assert hits == want and hits


def test_missing_never_satisfies():
    from claimcheck.dataset import ingest_csv

    ds = ingest_csv(b"a,b\n1,x\nNA,y\n", "t")
    pred_eq = FilterPredicate("a", "=", Literal("1", quoted=False))
    pred_ne = FilterPredicate("a", "!=", Literal("1", quoted=False))
    assert not evaluate_predicate(1, pred_eq, ds)
    assert not evaluate_predicate(1, pred_ne, ds)


def test_ordering_on_categorical_raises(movies):
    pred = FilterPredicate("genre", ">", Literal("5", quoted=False))
    with pytest.raises(TypeMismatchError):
        evaluate_predicate(0, pred, movies)


def test_empty_subspace_returns_all_rows(movies):
    spec = spec_of('{"measure":"gross","value":1,"aggregation":"average",'
                   '"subspace":[],"identifier_key":"movies"}')
    slice_ = retrieve(movies, spec)
    assert slice_.subspace_rows == tuple(range(movies.n_rows))


def test_conjunction_against_row_scan(movies):
    spec = spec_of('{"measure":"IMDb_score","value":6.7,"aggregation":"average",'
                   '"subspace":[{"genre"="horror"},{"year"=2020}],"identifier_key":"movies"}')
    slice_ = retrieve(movies, spec)
    want = [
        i for i, row in enumerate(movies.rows)
        if row[1].lower() == "horror" and row[3] == "2020"
    ]
    assert list(slice_.subspace_rows) == want
    assert len(want) == 3


def test_trend_sorted_ascending(unemployment):
    spec = spec_of('{"measure":"unemployment_rate","value":"decrease",'
                   '"subspace":[{"month">="April 2020"},{"month"<="March 2023"}]}')
    slice_ = retrieve(unemployment, spec)
    dates = [d for _, d in slice_.temporal]
    assert dates == sorted(dates)
    assert dates[0] == datetime.date(2020, 4, 1)
    assert dates[-1] == datetime.date(2023, 3, 1)


def test_focus_subset_of_subspace(movies):
    spec = spec_of('{"measure":"gross","value":"max",'
                   '"focus":[{"movie"="Oppenheimer"}],'
                   '"subspace":[{"genre"="historical biopic"}],"identifier_key":"movies"}')
    slice_ = retrieve(movies, spec)
    assert set(slice_.focus_rows) <= set(slice_.subspace_rows)
    assert len(slice_.focus_rows) == 1


def test_trace_replay_reproduces_subspace(movies):
    spec = spec_of('{"value":7,"subspace":[{"IMDb_score">7},{"gross">100000000}],'
                   '"identifier_key":"movies"}')
    slice_ = retrieve(movies, spec)
    replayed = [
        i for i in range(movies.n_rows)
        if all(evaluate_predicate(i, p, movies) for p in slice_.trace)
    ]
    assert list(slice_.subspace_rows) == replayed


def test_conjunction_monotone(movies):
    base = spec_of('{"value":0,"subspace":[{"IMDb_score">6}],"identifier_key":"movies"}')
    tighter = spec_of('{"value":0,"subspace":[{"IMDb_score">6},{"year">=2019}],'
                      '"identifier_key":"movies"}')
    assert set(retrieve(movies, tighter).subspace_rows) <= set(retrieve(movies, base).subspace_rows)


def test_no_matching_rows_raises_for_measured_types(movies):
    spec = spec_of('{"measure":"gross","value":1,"aggregation":"average",'
                   '"subspace":[{"genre"="opera"}],"identifier_key":"movies"}')
    with pytest.raises(NoMatchingRowsError):
        retrieve(movies, spec)


def test_categorization_tolerates_empty_subspace(movies):
    spec = spec_of('{"value":0,"subspace":[{"genre"="opera"}],"identifier_key":"movies"}')
    slice_ = retrieve(movies, spec)
    assert slice_.subspace_rows == ()


def test_missing_measure_values_counted():
    from claimcheck.dataset import ingest_csv

    ds = ingest_csv(b"name,m\na,1\nb,NA\nc,3\n", "t")
    spec = spec_of('{"measure":"m","value":2,"aggregation":"average",'
                   '"subspace":[],"identifier_key":"t"}')
    slice_ = retrieve(ds, spec)
    assert slice_.dropped["m"] == 1
    assert [v for _, v in slice_.measures["m"]] == [1.0, 3.0]


def test_retrieve_pure(movies):
    spec = spec_of('{"measure":"gross","value":1,"aggregation":"sum",'
                   '"subspace":[{"genre"="drama"}],"identifier_key":"movies"}')
    assert retrieve(movies, spec) == retrieve(movies, spec)
