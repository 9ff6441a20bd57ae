#!/usr/bin/env python3
"""Regenerate fixtures/golden_bundles.json: one evidence bundle per fact
subtype, built from the bundled fixture datasets. The review frontend and the
conformance tests both consume this file.

Usage: python scripts/make_golden_bundles.py [--check]
"""
import argparse
import json
import sys
from pathlib import Path

from claimcheck.dataset import ingest_csv
from claimcheck.evidence import build_bundle
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
)
from claimcheck.veracity import verify

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def load(name):
    return ingest_csv((FIXTURES / f"{name}.csv").read_bytes(), name)


def eq(attr, value):
    return FilterPredicate(attr, "=", Literal.of_text(value))


def num(attr, op, value):
    return FilterPredicate(attr, op, Literal.of_number(value))


def flagged_2d_focus(dataset, measure_x, measure_y, label_col):
    """First row whose (x, y) point is a bivariate outlier over the full table."""
    for i in range(dataset.n_rows):
        j = dataset.column_index(label_col)
        if dataset.is_missing_at(i, j):
            continue
        focus = eq(label_col, dataset.cell(i, j))
        spec = OutlierFact(measure_x, focus, (), dataset.name, measure_y=measure_y)
        result = verify(dataset, spec)
        if result.actual is True:
            return spec
    raise SystemExit("no bivariate outlier in the fixture")


def golden_specs(movies, players, whiskies, unemployment):
    window = (
        FilterPredicate("month", ">=", Literal.of_text("April 2020")),
        FilterPredicate("month", "<=", Literal.of_text("March 2023")),
    )
    return [
        # claimed 7.0 disagrees with the computed mean, so the chart carries a
        # claimed-value reference line
        ("value_mean", movies, ValueFact(
            "IMDb_score", Literal("7.0", quoted=False), "average",
            (eq("genre", "horror"),), "movies")),
        ("value_median", movies, ValueFact(
            "gross", Literal("75000000", quoted=False), "median", (), "movies")),
        ("value_sum", movies, ValueFact(
            "gross", Literal("1216000000", quoted=False), "sum",
            (eq("genre", "historical biopic"),), "movies")),
        ("proportion", movies, ProportionFact(
            "gross", Literal.of_text("49.7%"),
            (eq("director", "Christopher Nolan"),), (), "movies")),
        ("trend", unemployment, TrendFact("unemployment_rate", "decrease", window)),
        ("extreme", whiskies, ExtremeFact(
            "rating", "max", (eq("brand", "Glenlivet 18"),),
            (eq("origin", "Scotland"),), "whiskies")),
        ("rank", players, RankFact(
            "points", 8, (eq("player", "Alex Doe"),), (), "players")),
        ("association", movies, AssociationFact("budget", "gross", "positive", "movies")),
        ("difference", players, DifferenceFact(
            "points", Literal("12.1", quoted=False),
            eq("player", "Chris Fox"), eq("player", "Sam Roe"), ())),
        ("categorization", movies, CategorizationFact(
            6, (num("IMDb_score", ">", 7), num("gross", ">", 100000000)), "movies")),
        ("distribution", movies, DistributionFact(
            "gross", "right-skew distribution", "movies")),
        ("outlier_1d", movies, OutlierFact(
            "gross", eq("movie", "Oppenheimer"),
            (eq("genre", "historical biopic"),), "movies")),
        ("outlier_2d", movies, flagged_2d_focus(movies, "budget", "gross", "movie")),
    ]


def build_all():
    movies, players = load("movies"), load("players")
    whiskies, unemployment = load("whiskies"), load("unemployment")
    bundles = {}
    for subtype, dataset, spec in golden_specs(movies, players, whiskies, unemployment):
        result = verify(dataset, spec)
        if result.verdict == "unverifiable":
            raise SystemExit(f"golden spec for {subtype} is unverifiable: {result.explanation}")
        bundles[subtype] = build_bundle(dataset, spec, result)
    return bundles


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true",
                        help="verify the committed file is current, do not write")
    args = parser.parse_args(argv)
    out = FIXTURES / "golden_bundles.json"
    text = json.dumps(build_all(), indent=1, sort_keys=False) + "\n"
    if args.check:
        if not out.exists() or out.read_text() != text:
            print("fixtures/golden_bundles.json is stale; rerun scripts/make_golden_bundles.py",
                  file=sys.stderr)
            return 1
        print("golden bundles are current")
        return 0
    out.write_text(text)
    print(f"wrote {out} ({len(text)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
