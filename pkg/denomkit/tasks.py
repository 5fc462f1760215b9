from celery import Celery
from dataclasses import asdict
import logging
import redis

from denomkit.config import get_settings

logger = logging.getLogger(__name__)

# Configuração do Celery
settings = get_settings()

celery_app = Celery('denomkit')
celery_app.conf.update(
    broker_url=settings.redis_url,
    result_backend=settings.redis_url,
    task_serializer='json',
    result_serializer='json',
    accept_content=['json'],
    task_track_started=True,
    worker_pool='solo',
    broker_connection_retry_on_startup=True
)


def verificar_redis(url=None):
    """Ping no broker; sem Redis as tarefas rodam localmente (modo eager)"""
    url = url or get_settings().redis_url
    try:
        r = redis.Redis.from_url(url, socket_connect_timeout=1)
        r.ping()
        logger.info(f"Conexão com Redis estabelecida com sucesso em {url}!")
        return True
    except Exception as e:
        logger.warning(f"Redis indisponível em {url}, executando tarefas localmente: {e}")
        return False


def configurar_modo(url=None):
    """Liga task_always_eager quando o broker não responde"""
    eager = not verificar_redis(url)
    celery_app.conf.task_always_eager = eager
    celery_app.conf.task_eager_propagates = eager
    return eager


def _progresso(task, meta):
    try:
        task.update_state(state='PROGRESS', meta=meta)
    except Exception as e:
        logger.debug(f"Progresso não publicado: {e}")


@celery_app.task(bind=True)
def verify_cell(self, tag, suite, i, j):
    from denomkit.services.denomlab import verify_cell as run_cell

    try:
        _progresso(self, {'status': f'{suite} {tag} ({i},{j})'})
        row = run_cell(tag, suite, (i, j))
        return asdict(row)
    except Exception as e:
        logger.error(f"Erro ao verificar célula ({i},{j}) de {tag}: {str(e)}")
        return {'suite': suite, 'cell': [i, j], 'passed': False, 'detail': str(e)}


@celery_app.task(bind=True)
def verify_suite(self, tag, suite):
    from denomkit.services.denomlab import suite_cells, verify_cell as run_cell

    try:
        cells = suite_cells(tag, suite)
        rows = []
        for n, cell in enumerate(cells, start=1):
            rows.append(asdict(run_cell(tag, suite, cell)))
            _progresso(self, {'status': f'{n}/{len(cells)} células', 'suite': suite})
        failed = sum(1 for r in rows if not r['passed'])
        logger.info(f"Suíte {suite} de {tag}: {len(rows)} células, {failed} falhas")
        return {'tag': tag, 'suite': suite, 'rows': rows, 'failed': failed}
    except Exception as e:
        logger.error(f"Erro na suíte {suite} de {tag}: {str(e)}")
        return {'tag': tag, 'suite': suite, 'rows': [], 'failed': -1, 'error': str(e)}


def dispatch_suite(tag, suite):
    """Enfileira a suíte (ou executa na hora sem Redis) e devolve o resultado"""
    configurar_modo()
    result = verify_suite.apply_async(args=[tag, suite])
    return result.get()
