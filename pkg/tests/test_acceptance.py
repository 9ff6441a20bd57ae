"""Acceptance suite: one test per release criterion, each printing a PASS
line with its measured budget. Run with `pytest tests/test_acceptance.py -s`.
"""
import json
import random
import time
from pathlib import Path

from fastapi.testclient import TestClient

from claimcheck.corpus import eval_parser, generate_corpus
from claimcheck.dataset import ingest_csv
from claimcheck.evidence import validate_bundle, validate_chart, validate_table
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
    SUBTYPES,
    TrendFact,
    ValueFact,
    normalize_spec_text,
    parse_spec_json,
    serialize_spec,
)
from claimcheck.parsing import TemplateBackend
from claimcheck.service import ServiceConfig, create_app
from claimcheck.values import format_number, parse_ordinal
from claimcheck.veracity import (
    ACCURATE,
    INACCURATE,
    UNVERIFIABLE,
    mahalanobis_sq,
    pearson,
    skewness,
    verify,
)

from .conftest import DATA_DIR
from .oracle import oracle_verify
from .test_factspec import GOLDEN_SPECS


def _report(name: str, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE PASS: {name}{suffix}")


# -----------------------------------------------------------------------------
# Criterion 1: golden-spec fidelity

def test_golden_spec_fidelity():
    start = time.monotonic()
    for fact_type, text in GOLDEN_SPECS.items():
        spec = parse_spec_json(text)
        assert normalize_spec_text(serialize_spec(spec)) == normalize_spec_text(text), fact_type
        again = parse_spec_json(serialize_spec(spec))
        assert serialize_spec(again) == serialize_spec(spec)
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _report("golden-spec fidelity", f"10 specs round-tripped in {elapsed:.3f}s")


# -----------------------------------------------------------------------------
# Criterion 2: grammar closure at full corpus scale

def test_grammar_closure_400_claims():
    start = time.monotonic()
    movies = ingest_csv((DATA_DIR / "movies.csv").read_bytes(), "movies")
    entries = generate_corpus(movies, per_type=40, seed=7)
    assert len(entries) == 400
    report = eval_parser(TemplateBackend(), entries, movies)
    assert report["overall"]["classification_accuracy"] == 1.0
    assert report["overall"]["complete_rate"] == 1.0
    for row in report["per_type"].values():
        assert row["classification_accuracy"] == 1.0
        assert row["complete_rate"] == 1.0
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    _report("grammar closure", f"400/400 complete matches in {elapsed:.2f}s")


# -----------------------------------------------------------------------------
# Criterion 3 + 5: randomized veracity oracle suite and rectification fixed point

_CATS = ["alpha", "beta", "gamma", "delta"]


def _random_dataset(rng: random.Random):
    n = rng.randint(6, 50)
    lines = ["name,cat,x,y,d"]
    base = rng.randint(0, 2000)
    slope = rng.choice([-3, -1, 0.5, 1, 2, 4])
    for i in range(n):
        x = rng.randint(-100, 100) / 2.0
        if rng.random() < 0.5:
            y = slope * x + rng.randint(-20, 20) / 2.0
        else:
            y = rng.randint(-100, 100) / 2.0
        cat = rng.choice(_CATS)
        day = f"202{rng.randint(0, 3)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        x_cell = "" if rng.random() < 0.04 else format_number(x)
        y_cell = "NA" if rng.random() < 0.04 else format_number(y)
        lines.append(f"e{i},{cat},{x_cell},{y_cell},{day}")
    return ingest_csv(("\n".join(lines) + "\n").encode(), f"rows{base}")


def _random_subspace(rng, dataset):
    preds = []
    if rng.random() < 0.5:
        preds.append(FilterPredicate("cat", "=", Literal.of_text(rng.choice(_CATS))))
    if rng.random() < 0.3:
        cut = rng.randint(-40, 40)
        preds.append(FilterPredicate("x", rng.choice([">", ">=", "<", "<="]),
                                     Literal.of_number(cut)))
    return tuple(preds)


def _random_focus(rng, dataset):
    i = rng.randrange(dataset.n_rows)
    return FilterPredicate("name", "=", Literal.of_text(f"e{i}"))


def _random_spec(rng, dataset, subtype):
    subspace = _random_subspace(rng, dataset)
    measure = rng.choice(["x", "y"])
    if subtype == "value_mean":
        claimed = Literal(format_number(rng.randint(-200, 200) / 4.0), quoted=False)
        return ValueFact(measure, claimed, "average", subspace, "rows")
    if subtype == "value_median":
        claimed = Literal(format_number(rng.randint(-200, 200) / 4.0), quoted=False)
        return ValueFact(measure, claimed, "median", subspace, "rows")
    if subtype == "value_sum":
        claimed = Literal(format_number(rng.randint(-2000, 2000) / 2.0), quoted=False)
        return ValueFact(measure, claimed, "sum", subspace, "rows")
    if subtype == "proportion":
        focus = (FilterPredicate("cat", "=", Literal.of_text(rng.choice(_CATS))),)
        claimed = Literal.of_text(f"{rng.randint(0, 1000) / 10.0}%")
        return ProportionFact(measure, claimed, focus, subspace, "rows")
    if subtype == "trend":
        a = f"202{rng.randint(0, 1)}-{rng.randint(1, 12):02d}-01"
        b = f"202{rng.randint(2, 3)}-{rng.randint(1, 12):02d}-28"
        window = (FilterPredicate("d", ">=", Literal.of_text(a)),
                  FilterPredicate("d", "<=", Literal.of_text(b)))
        return TrendFact(measure, rng.choice(["increase", "decrease"]), window + subspace)
    if subtype == "extreme":
        return ExtremeFact(measure, rng.choice(["max", "min"]),
                           (_random_focus(rng, dataset),), subspace, "rows")
    if subtype == "rank":
        return RankFact(measure, rng.randint(1, dataset.n_rows),
                        (_random_focus(rng, dataset),), subspace, "rows")
    if subtype == "association":
        return AssociationFact("x", "y", rng.choice(["positive", "negative"]), "rows",
                               subspace if subspace else None)
    if subtype == "difference":
        claimed = Literal(format_number(rng.randint(-100, 100) / 2.0), quoted=False)
        return DifferenceFact(measure, claimed, _random_focus(rng, dataset),
                              _random_focus(rng, dataset), subspace)
    if subtype == "categorization":
        return CategorizationFact(rng.randint(0, dataset.n_rows), subspace, "rows")
    if subtype == "distribution":
        direction = rng.choice(["right-skew distribution", "left-skew distribution"])
        return DistributionFact(measure, direction, "rows", subspace if subspace else None)
    if subtype == "outlier_1d":
        return OutlierFact(measure, _random_focus(rng, dataset), subspace, "rows")
    if subtype == "outlier_2d":
        return OutlierFact("x", _random_focus(rng, dataset), subspace, "rows", measure_y="y")
    raise AssertionError(subtype)


def _close(a, b):
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(b)))
    return a == b


def _substitute_rectification(spec, rectification):
    if isinstance(spec, ValueFact):
        return ValueFact(spec.measure, Literal(rectification, quoted=False),
                         spec.aggregation, spec.subspace, spec.identifier_key)
    if isinstance(spec, DifferenceFact):
        return DifferenceFact(spec.measure, Literal(rectification, quoted=False),
                              spec.focus_x, spec.focus_y, spec.subspace)
    if isinstance(spec, ProportionFact):
        return ProportionFact(spec.measure, Literal.of_text(rectification),
                              spec.focus, spec.subspace, spec.identifier_key)
    if isinstance(spec, RankFact):
        return RankFact(spec.measure, parse_ordinal(rectification),
                        spec.focus, spec.subspace, spec.identifier_key)
    if isinstance(spec, CategorizationFact):
        return CategorizationFact(int(rectification), spec.subspace, spec.identifier_key)
    return None


def test_randomized_oracle_agreement_and_rectification_fixed_point():
    start = time.monotonic()
    rng = random.Random(20240521)
    cases = 0
    verdict_counts = {ACCURATE: 0, INACCURATE: 0, UNVERIFIABLE: 0}
    rectified = 0
    dataset = _random_dataset(rng)
    while cases < 1000:
        if cases % 10 == 0:
            dataset = _random_dataset(rng)
        subtype = SUBTYPES[cases % len(SUBTYPES)]
        spec = _random_spec(rng, dataset, subtype)
        mine = verify(dataset, spec)
        want_verdict, want_actual = oracle_verify(dataset, spec)
        assert mine.verdict == want_verdict, (subtype, serialize_spec(spec))
        if mine.verdict == UNVERIFIABLE:
            assert mine.actual is None and want_actual is None
        else:
            assert _close(mine.actual, want_actual), (subtype, mine.actual, want_actual)
        verdict_counts[mine.verdict] += 1

        # rectification fixed point for value-like inaccurate verdicts
        if mine.verdict == INACCURATE and mine.rectification is not None:
            fixed = _substitute_rectification(spec, mine.rectification)
            if fixed is not None:
                again = verify(dataset, fixed)
                assert again.verdict == ACCURATE, (subtype, mine.rectification)
                rectified += 1
        cases += 1
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    assert verdict_counts[ACCURATE] > 0 and verdict_counts[INACCURATE] > 0
    assert rectified > 50
    _report(
        "veracity oracle suite + rectification fixed point",
        f"1000 cases, verdicts {verdict_counts}, {rectified} rectifications, {elapsed:.2f}s",
    )


# -----------------------------------------------------------------------------
# Criterion 4: statistical unit pins

def test_statistical_unit_pins():
    # Pearson of perfectly linear data is exactly +/-1
    xs = [float(i) for i in range(1, 21)]
    assert abs(pearson(xs, [2 * x + 3 for x in xs]) - 1.0) < 1e-12
    assert abs(pearson(xs, [-0.5 * x + 9 for x in xs]) + 1.0) < 1e-12
    # skewness of symmetric data is exactly 0
    sym = [-3.0, -1.0, 0.0, 1.0, 3.0]
    assert abs(skewness(sym)) < 1e-12
    # the IQR rule flags 100 among {1..10, 100}
    values = [float(v) for v in range(1, 11)] + [100.0]
    lines = ["name,m"] + [f"e{i},{v}" for i, v in enumerate(values)]
    ds = ingest_csv(("\n".join(lines) + "\n").encode(), "things")
    spec = OutlierFact("m", FilterPredicate("name", "=", Literal.of_text("e10")), (), "things")
    result = verify(ds, spec)
    assert result.verdict == ACCURATE and result.actual is True
    # Mahalanobis distance of the sample mean is 0
    pts = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0), (1.0, 1.0)]
    assert mahalanobis_sq(pts, (1.0, 1.0)) == 0.0
    # a collinear cloud has a singular covariance matrix
    lines = ["name,x,y"] + [f"e{i},{i},{2 * i}" for i in range(6)]
    collinear = ingest_csv(("\n".join(lines) + "\n").encode(), "things")
    spec = OutlierFact("x", FilterPredicate("name", "=", Literal.of_text("e0")),
                       (), "things", measure_y="y")
    assert verify(collinear, spec).verdict == UNVERIFIABLE
    _report("statistical unit pins")


# -----------------------------------------------------------------------------
# Criterion 6: evidence conformance

def test_evidence_conformance():
    golden = json.loads((DATA_DIR / "golden_bundles.json").read_text())
    assert len(golden) == 13
    table_kinds = set()
    chart_kinds = set()
    for subtype, bundle in golden.items():
        validate_bundle(bundle)
        validate_table(bundle["table"])
        validate_chart(bundle["chart"])
        table_kinds.add(bundle["table"]["kind"])
        chart_kinds.add(bundle["chart"]["kind"])
    assert len(table_kinds) == 13 and len(chart_kinds) == 13

    # every summary/annotation value equals a verification statistic bit-for-bit
    import sys

    sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))
    try:
        from make_golden_bundles import golden_specs, load
    finally:
        sys.path.pop(0)
    movies, players = load("movies"), load("players")
    whiskies, unemployment = load("whiskies"), load("unemployment")
    for subtype, dataset, spec in golden_specs(movies, players, whiskies, unemployment):
        result = verify(dataset, spec)
        stats = set(result.statistics.values())
        bundle = golden[subtype]
        for row in bundle["table"]["sticky_summary_rows"]:
            assert row["value"] in stats, (subtype, row)
        for annotation in bundle["chart"]["annotations"]:
            if "value" in annotation and annotation.get("role") != "claimed":
                assert annotation["value"] in stats, (subtype, annotation)

    # trend bundles carry the full-extent overview with the claim window shaded
    trend = golden["trend"]
    assert trend["context"] is not None
    region = [a for a in trend["context"]["annotations"] if a["type"] == "region"]
    assert region and region[0]["start"] == "2020-04-01" and region[0]["end"] == "2023-03-01"
    assert len(trend["context"]["data"]) > len(trend["chart"]["data"])
    _report("evidence conformance", "26 layouts/specs schema-valid, statistics bit-exact")


# -----------------------------------------------------------------------------
# Criterion 7: service end-to-end review scenario

def test_service_end_to_end(tmp_path):
    start = time.monotonic()
    data_dir = str(tmp_path / "data")
    doc = (
        "Among all players, Alex Doe is ranked 4th in points. "
        "Sam Roe has the highest rebounds among all players. "
        "The average assists across all players is 5.1. "
        "The average rating across all whiskies is 91.3."
    )
    app = create_app(ServiceConfig(data_dir=data_dir))
    with TestClient(app) as client:
        players = client.post(
            "/datasets?name=players", content=(DATA_DIR / "players.csv").read_bytes()
        ).json()
        whiskies = client.post(
            "/datasets?name=whiskies", content=(DATA_DIR / "whiskies.csv").read_bytes()
        ).json()
        session = client.post("/sessions", json={
            "text": doc, "dataset_id": players["dataset_id"],
        }).json()
        claims = session["claims"]
        assert [c["verdict"] for c in claims] == [
            "inaccurate", "inaccurate", "accurate", "unverifiable",
        ]

        # inaccurate rank 4th rectified to 8th
        assert claims[0]["rectification"] == "8th"
        rectified = client.post(f"/claims/{claims[0]['id']}/rectify").json()
        assert "ranked 8th" in rectified["revised_text"]
        assert rectified["claim"]["verdict"] == "accurate"

        # chip edit adding the missing position filter flips the verdict
        patched = client.patch(f"/claims/{claims[1]['id']}/spec", json={
            "subspace": [{"attribute": "position", "op": "=", "value": "C"}],
        }).json()
        assert patched["verdict_flipped"] is True
        assert patched["claim"]["verdict"] == "accurate"

        # claim-local dataset binding resolves the unverifiable claim only
        others_before = {
            c["id"]: c["verdict"]
            for c in client.get(f"/sessions/{session['session_id']}/claims").json()["claims"]
            if c["id"] != claims[3]["id"]
        }
        bound = client.post(f"/claims/{claims[3]['id']}/dataset", json={
            "dataset_id": whiskies["dataset_id"],
        }).json()
        assert bound["claim"]["verdict"] == "accurate"
        after = client.get(f"/sessions/{session['session_id']}/claims").json()["claims"]
        for claim in after:
            if claim["id"] in others_before:
                assert claim["verdict"] == others_before[claim["id"]]

        snapshot_claims = client.get(f"/sessions/{session['session_id']}/claims").content
        snapshot_session = client.get(f"/sessions/{session['session_id']}").content

    # restart from the persisted snapshot: byte-identical reads
    app2 = create_app(ServiceConfig(data_dir=data_dir))
    with TestClient(app2) as client2:
        assert client2.get(f"/sessions/{session['session_id']}/claims").content == snapshot_claims
        assert client2.get(f"/sessions/{session['session_id']}").content == snapshot_session

    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    _report("service end-to-end", f"review scenario in {elapsed:.2f}s")


# -----------------------------------------------------------------------------
# Criterion 8: CLI exit-code contract

def test_cli_exit_code_contract(tmp_path):
    from claimcheck.cli import main

    players = str(DATA_DIR / "players.csv")
    accurate = "The average assists across all players is 5.1."
    inaccurate = "Among all players, Alex Doe is ranked 4th in points."
    unverifiable = "The average rating across all whiskies is 91.3."

    def run(sentences, dataset=players):
        doc = tmp_path / "doc.txt"
        doc.write_text(" ".join(sentences), "utf-8")
        return main(["verify", "--dataset", dataset, "--text", str(doc)])

    matrix = [
        ([accurate], 0),
        ([accurate, accurate], 0),
        ([inaccurate], 1),
        ([accurate, inaccurate], 1),
        ([unverifiable], 2),
        ([accurate, unverifiable], 2),
        ([inaccurate, unverifiable], 2),
        ([accurate, inaccurate, unverifiable], 2),
    ]
    for sentences, want in matrix:
        assert run(sentences) == want, sentences
    assert run([accurate], dataset=str(tmp_path / "missing.csv")) == 3
    _report("CLI exit-code contract", "worst-wins matrix of 9 cases")
