import sqlite3
import os
import json
import logging
from datetime import datetime

from denomkit.config import get_settings
from denomkit.security import SQLiteSecurityManager
from denomkit.services.cartan import affine_type, normalize_affine_tag

logger = logging.getLogger(__name__)

STORE_TABLES = ('affine_types', 'denominators', 'computations', 'verification_runs')


def get_db_path():
    """Caminho do banco, lido das configurações a cada chamada"""
    return get_settings().db_path


def _security_manager():
    settings = get_settings()
    return SQLiteSecurityManager(settings.db_path, backup_enabled=settings.backup_enabled)


def get_db_connection():
    """Conexão com o armazenamento; no modo seguro passa pelo gerenciador de segurança"""
    db_path = get_db_path()
    os.makedirs(os.path.dirname(os.path.abspath(db_path)), exist_ok=True)
    if get_settings().sqlite_secure:
        return _security_manager().get_secure_connection()
    conn = sqlite3.connect(db_path)
    conn.row_factory = sqlite3.Row
    conn.execute("PRAGMA foreign_keys = ON;")
    return conn


def create_backup():
    """
    Snapshot do banco. No modo seguro respeita DB_BACKUP_ENABLED e grava o
    hash; fora dele é um VACUUM INTO simples.
    """
    if get_settings().sqlite_secure:
        return _security_manager().create_backup()
    try:
        db_path = get_db_path()
        backup_dir = os.path.join(os.path.dirname(os.path.abspath(db_path)), 'backups')
        os.makedirs(backup_dir, exist_ok=True)
        backup_path = os.path.join(backup_dir, f"denomkit_{datetime.now().strftime('%Y%m%d_%H%M%S')}.db")
        conn = get_db_connection()
        conn.execute("VACUUM INTO ?", (backup_path,))
        conn.close()
        logger.info(f"Cópia do banco criada: {backup_path}")
        return backup_path
    except Exception as e:
        logger.error(f"Erro ao criar cópia do banco: {str(e)}")
        return False


def verify_backup(backup_path):
    """Confere o snapshot contra o hash gravado ao lado dele"""
    return _security_manager().verify_backup(backup_path)


def check_database_integrity():
    """Auditoria do arquivo e das linhas de denominadores (nos dois modos)"""
    if not os.path.exists(get_db_path()):
        logger.error("Banco de dados inexistente")
        return False
    return _security_manager().check_integrity()


def optimize_database():
    if get_settings().sqlite_secure:
        return _security_manager().optimize_database()
    try:
        conn = get_db_connection()
        conn.execute("PRAGMA optimize;")
        conn.execute("ANALYZE;")
        conn.close()
        return True
    except Exception as e:
        logger.error(f"Erro na otimização: {str(e)}")
        return False


def get_database_stats():
    """Contagens por tabela, mais os dados de página no modo seguro"""
    db_path = get_db_path()
    if get_settings().sqlite_secure:
        stats = _security_manager().get_database_stats()
    else:
        stats = {
            'file_size': os.path.getsize(db_path) if os.path.exists(db_path) else 0,
            'security_enabled': False,
        }
    try:
        conn = get_db_connection()
        present = {r[0] for r in conn.execute("SELECT name FROM sqlite_master WHERE type='table'")}
        for table in STORE_TABLES:
            stats[table] = conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0] if table in present else 0
        conn.close()
        return stats
    except Exception as e:
        logger.error(f"Erro ao obter estatísticas: {str(e)}")
        return {}


def _create_tables(cursor):
    # Tipos afins conhecidos
    cursor.execute('''
    CREATE TABLE IF NOT EXISTS affine_types (
        tag TEXT PRIMARY KEY,
        scale INTEGER NOT NULL,
        pstar_exp INTEGER NOT NULL,
        pstar_unit INTEGER NOT NULL,
        period INTEGER NOT NULL
    )
    ''')

    # Denominadores d_{i,j} com i <= j
    cursor.execute('''
    CREATE TABLE IF NOT EXISTS denominators (
        type TEXT NOT NULL,
        i INTEGER NOT NULL,
        j INTEGER NOT NULL,
        factors TEXT NOT NULL,
        provenance TEXT DEFAULT 'derived',
        PRIMARY KEY (type, i, j),
        FOREIGN KEY (type) REFERENCES affine_types(tag) ON DELETE CASCADE
    )
    ''')

    # Cache de resultados pesados (autossistemas)
    cursor.execute('''
    CREATE TABLE IF NOT EXISTS computations (
        cache_key TEXT PRIMARY KEY,
        kind TEXT NOT NULL,
        payload TEXT NOT NULL,
        created_at INTEGER
    )
    ''')

    cursor.execute('''
    CREATE TABLE IF NOT EXISTS verification_runs (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        suite TEXT NOT NULL,
        type TEXT NOT NULL,
        passed INTEGER DEFAULT 0,
        failed INTEGER DEFAULT 0,
        details TEXT,
        created_at INTEGER
    )
    ''')


def init_db():
    """Inicializa o banco de dados criando as tabelas necessárias se não existirem"""
    conn = get_db_connection()
    cursor = conn.cursor()
    _create_tables(cursor)
    conn.commit()
    conn.close()
    logger.info(f"Banco de dados inicializado em {get_db_path()}")


def seed_denominators(tables_path=None):
    """
    Carrega a base JSON versionada no SQLite. Retorna o número de entradas
    gravadas, ou False em caso de erro.
    """
    tables_path = tables_path or get_settings().tables_path
    try:
        with open(tables_path, 'r', encoding='utf-8') as f:
            data = json.load(f)

        conn = get_db_connection()
        cursor = conn.cursor()
        _create_tables(cursor)
        count = 0
        for block in data['types']:
            aff = affine_type(block['type'])
            cursor.execute('''
            INSERT OR REPLACE INTO affine_types (tag, scale, pstar_exp, pstar_unit, period)
            VALUES (?, ?, ?, ?, ?)
            ''', (aff.tag, aff.scale, int(aff.pstar.exp), aff.pstar.unit, aff.period))
            for entry in block['entries']:
                i, j = sorted((int(entry['i']), int(entry['j'])))
                cursor.execute('''
                INSERT OR REPLACE INTO denominators (type, i, j, factors, provenance)
                VALUES (?, ?, ?, ?, ?)
                ''', (aff.tag, i, j, json.dumps(entry['factors'], sort_keys=True),
                      entry.get('provenance', 'derived')))
                count += 1
        conn.commit()
        conn.close()
        logger.info(f"{count} denominadores gravados a partir de {os.path.basename(tables_path)}")
        return count
    except Exception as e:
        logger.error(f"Erro ao carregar denominadores: {str(e)}")
        return False


def fetch_denominator(tag, i, j):
    """Linha de d_{i,j} como dicionário, ou None"""
    try:
        i, j = sorted((i, j))
        conn = get_db_connection()
        cursor = conn.cursor()
        cursor.execute('''
        SELECT type, i, j, factors, provenance FROM denominators
        WHERE type = ? AND i = ? AND j = ?
        ''', (normalize_affine_tag(tag), i, j))
        row = cursor.fetchone()
        conn.close()
        return dict(row) if row else None
    except Exception as e:
        logger.error(f"Erro ao buscar denominador: {str(e)}")
        return None


def cache_get(cache_key):
    try:
        conn = get_db_connection()
        cursor = conn.cursor()
        cursor.execute("SELECT payload FROM computations WHERE cache_key = ?", (cache_key,))
        row = cursor.fetchone()
        conn.close()
        return row['payload'] if row else None
    except Exception as e:
        logger.debug(f"Cache indisponível: {str(e)}")
        return None


def cache_put(cache_key, kind, payload):
    try:
        conn = get_db_connection()
        cursor = conn.cursor()
        _create_tables(cursor)
        cursor.execute('''
        INSERT OR REPLACE INTO computations (cache_key, kind, payload, created_at)
        VALUES (?, ?, ?, ?)
        ''', (cache_key, kind, payload, int(datetime.now().timestamp())))
        conn.commit()
        conn.close()
        return True
    except Exception as e:
        logger.error(f"Erro ao gravar cache: {str(e)}")
        return False


def record_verification(suite, tag, passed, failed, details=None):
    """Registra uma execução de suíte de verificação"""
    try:
        conn = get_db_connection()
        cursor = conn.cursor()
        _create_tables(cursor)
        cursor.execute('''
        INSERT INTO verification_runs (suite, type, passed, failed, details, created_at)
        VALUES (?, ?, ?, ?, ?, ?)
        ''', (suite, tag, passed, failed, json.dumps(details or [], ensure_ascii=False),
              int(datetime.now().timestamp())))
        conn.commit()
        conn.close()
        return True
    except Exception as e:
        logger.error(f"Erro ao registrar verificação: {str(e)}")
        return False


def list_verification_runs(tag=None, limit=20):
    try:
        conn = get_db_connection()
        try:
            cursor = conn.cursor()
            if tag:
                cursor.execute('''
                SELECT * FROM verification_runs WHERE type = ? ORDER BY id DESC LIMIT ?
                ''', (normalize_affine_tag(tag), limit))
            else:
                cursor.execute("SELECT * FROM verification_runs ORDER BY id DESC LIMIT ?", (limit,))
            rows = [dict(row) for row in cursor.fetchall()]
        finally:
            conn.close()
        for row in rows:
            row['details'] = json.loads(row['details'] or '[]')
        return rows
    except Exception as e:
        logger.error(f"Erro ao listar verificações: {str(e)}")
        return []
