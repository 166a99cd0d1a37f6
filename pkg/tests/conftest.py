import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


@pytest.fixture
def db_path(tmp_path, monkeypatch):
    """Results database in a temporary directory."""
    path = str(tmp_path / "results.db")
    monkeypatch.setenv("HASHLAB_DB_PATH", path)
    return path
