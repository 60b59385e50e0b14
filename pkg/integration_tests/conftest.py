from pathlib import Path

import pytest
from click.testing import CliRunner

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("POWERGRAPH_CAP", raising=False)
    return CliRunner()


@pytest.fixture
def data_dir():
    return DATA_DIR
