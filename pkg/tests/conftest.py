from pathlib import Path

import pytest

from claimcheck.dataset import ingest_csv

DATA_DIR = Path(__file__).parent.parent / "fixtures"


def load_fixture(name: str):
    path = DATA_DIR / f"{name}.csv"
    return ingest_csv(path.read_bytes(), name)


@pytest.fixture(scope="session")
def movies():
    return load_fixture("movies")


@pytest.fixture(scope="session")
def players():
    return load_fixture("players")


@pytest.fixture(scope="session")
def whiskies():
    return load_fixture("whiskies")


@pytest.fixture(scope="session")
def unemployment():
    return load_fixture("unemployment")
