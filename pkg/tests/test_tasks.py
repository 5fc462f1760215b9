"""
Tarefas Celery executadas localmente (sem broker)
"""

import pytest

from denomkit import tasks


@pytest.fixture
def eager(monkeypatch):
    monkeypatch.setattr(tasks, 'verificar_redis', lambda url=None: False)
    monkeypatch.setattr(tasks, '_progresso', lambda task, meta: None)
    yield
    tasks.celery_app.conf.task_always_eager = False
    tasks.celery_app.conf.task_eager_propagates = False


def test_configurar_modo_turns_on_eager(eager):
    assert tasks.configurar_modo() is True
    assert tasks.celery_app.conf.task_always_eager


def test_verify_cell_task(eager):
    row = tasks.verify_cell.apply(args=['G2~1', 'qdisk', 2, 2]).get()
    assert row['passed'] is True
    assert row['suite'] == 'qdisk'
    assert list(row['cell']) == [2, 2]


def test_verify_cell_task_reports_errors(eager):
    row = tasks.verify_cell.apply(args=['G2~1', 'bogus', 1, 1]).get()
    assert row['passed'] is False
    assert 'bogus' in row['detail']


def test_verify_suite_task(eager):
    result = tasks.verify_suite.apply(args=['D4~1', 'symmetry']).get()
    assert result['failed'] == 0
    assert len(result['rows']) == 10


def test_dispatch_suite_runs_locally(eager):
    result = tasks.dispatch_suite('G2~1', 'symmetry')
    assert result['tag'] == 'G2~1'
    assert [tuple(r['cell']) for r in result['rows']] == [(1, 1), (1, 2), (2, 2)]


def test_dispatch_unknown_suite_returns_error(eager):
    result = tasks.dispatch_suite('G2~1', 'bogus')
    assert result['failed'] == -1
    assert 'error' in result
