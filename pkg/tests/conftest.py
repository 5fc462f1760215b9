"""
Fixtures comuns: cada teste roda com um banco sqlite próprio e com as
configurações relidas do ambiente.
"""

import pytest

from denomkit.config import reset_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv('DENOMKIT_DB_PATH', str(tmp_path / 'denomkit.db'))
    monkeypatch.delenv('DENOMKIT_TABLES_PATH', raising=False)
    monkeypatch.delenv('DENOMKIT_COPRODUCT', raising=False)
    monkeypatch.setenv('SQLITE_SECURE', 'false')
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def seeded_db():
    from denomkit import database

    database.init_db()
    count = database.seed_denominators()
    assert count, "falha ao carregar as tabelas no sqlite"
    return count
