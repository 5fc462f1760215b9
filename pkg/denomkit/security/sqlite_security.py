import sqlite3
import os
import json
import hashlib
import hmac
from datetime import datetime
import logging

logger = logging.getLogger(__name__)

# Aplicados em toda conexão do modo seguro
STORE_PRAGMAS = (
    ('foreign_keys', 'ON'),
    ('journal_mode', 'WAL'),
    ('synchronous', 'FULL'),
    ('secure_delete', 'ON'),
    ('temp_store', 'MEMORY'),
)

PROVENANCES = ('derived', 'resolved', 'computed')


class SQLiteSecurityManager:
    """
    Modo seguro do armazenamento de denominadores: conexões com PRAGMAs
    rígidos, auditoria das linhas e snapshots com hash SHA-256.
    """

    def __init__(self, db_path, backup_enabled=False):
        self.db_path = db_path
        self.backup_enabled = backup_enabled

    def get_secure_connection(self, read_only=False):
        conn = sqlite3.connect(self.db_path, timeout=30.0, check_same_thread=False)
        conn.row_factory = sqlite3.Row
        for name, value in STORE_PRAGMAS:
            if read_only and name == 'journal_mode':
                continue
            conn.execute(f"PRAGMA {name} = {value};")
        if read_only:
            conn.execute("PRAGMA query_only = ON;")
        logger.debug(f"Conexão segura aberta ({'leitura' if read_only else 'escrita'})")
        return conn

    # -- auditoria ---------------------------------------------------------

    def audit(self):
        """
        Lista de problemas encontrados: integridade do arquivo, chaves
        estrangeiras órfãs e linhas de denominadores fora do formato
        (i > j, proveniência desconhecida, fatores que não são JSON).
        """
        problems = []
        conn = self.get_secure_connection(read_only=True)
        try:
            for row in conn.execute("PRAGMA integrity_check;"):
                if row[0] != 'ok':
                    problems.append(f"integridade: {row[0]}")
            for row in conn.execute("PRAGMA foreign_key_check;"):
                problems.append(f"chave estrangeira órfã em {row[0]} (rowid {row[1]})")

            tables = {r[0] for r in conn.execute("SELECT name FROM sqlite_master WHERE type='table'")}
            if 'denominators' in tables:
                for row in conn.execute("SELECT type, i, j, factors, provenance FROM denominators"):
                    cell = f"{row['type']} ({row['i']},{row['j']})"
                    if row['i'] > row['j']:
                        problems.append(f"{cell}: índices fora de ordem")
                    if row['provenance'] not in PROVENANCES:
                        problems.append(f"{cell}: proveniência {row['provenance']!r}")
                    try:
                        json.loads(row['factors'])
                    except ValueError:
                        problems.append(f"{cell}: fatores ilegíveis")
        finally:
            conn.close()
        return problems

    def check_integrity(self):
        try:
            problems = self.audit()
        except Exception as e:
            logger.error(f"Erro na auditoria do banco: {str(e)}")
            return False
        for problem in problems:
            logger.error(f"Auditoria: {problem}")
        if not problems:
            logger.info("Auditoria do banco: OK")
        return not problems

    # -- snapshots ---------------------------------------------------------

    def create_backup(self, backup_path=None):
        """
        Snapshot pela API de backup do SQLite. O arquivo `.sha256` ao lado
        guarda o hash e a contagem de denominadores no momento da cópia.
        """
        if not self.backup_enabled:
            logger.warning("Backup desabilitado (DB_BACKUP_ENABLED=false)")
            return False
        try:
            if not backup_path:
                backup_dir = os.path.join(os.path.dirname(os.path.abspath(self.db_path)), 'backups')
                os.makedirs(backup_dir, exist_ok=True)
                stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
                backup_path = os.path.join(backup_dir, f'denomkit_{stamp}.db')

            source = sqlite3.connect(self.db_path)
            target = sqlite3.connect(backup_path)
            try:
                source.backup(target, pages=256)
                try:
                    count = target.execute("SELECT COUNT(*) FROM denominators").fetchone()[0]
                except sqlite3.OperationalError:
                    count = 0
            finally:
                target.close()
                source.close()

            digest = self._sha256(backup_path)
            with open(f"{backup_path}.sha256", 'w') as f:
                f.write(f"{digest}  {os.path.basename(backup_path)}\n")
                f.write(f"# denominators={count}\n")
            logger.info(f"Snapshot criado: {backup_path} ({count} denominadores)")
            return backup_path
        except Exception as e:
            logger.error(f"Erro ao criar snapshot: {str(e)}")
            return False

    def verify_backup(self, backup_path):
        sidecar = f"{backup_path}.sha256"
        try:
            if not os.path.exists(sidecar):
                logger.warning(f"Snapshot sem hash: {backup_path}")
                return False
            with open(sidecar, 'r') as f:
                expected = f.readline().split()[0]
            return hmac.compare_digest(expected, self._sha256(backup_path))
        except Exception as e:
            logger.error(f"Erro ao conferir snapshot: {str(e)}")
            return False

    @staticmethod
    def _sha256(path):
        digest = hashlib.sha256()
        with open(path, 'rb') as f:
            for chunk in iter(lambda: f.read(65536), b''):
                digest.update(chunk)
        return digest.hexdigest()

    # -- manutenção --------------------------------------------------------

    def optimize_database(self):
        try:
            conn = self.get_secure_connection()
            conn.execute("PRAGMA optimize;")
            conn.execute("VACUUM;")
            conn.close()
            logger.info("Banco compactado")
            return True
        except Exception as e:
            logger.error(f"Erro na otimização: {str(e)}")
            return False

    def get_database_stats(self):
        try:
            conn = self.get_secure_connection(read_only=True)
            page_count = conn.execute("PRAGMA page_count;").fetchone()[0]
            page_size = conn.execute("PRAGMA page_size;").fetchone()[0]
            free_pages = conn.execute("PRAGMA freelist_count;").fetchone()[0]
            conn.close()
            return {
                'file_size': os.path.getsize(self.db_path),
                'security_enabled': True,
                'page_count': page_count,
                'page_size': page_size,
                'free_pages': free_pages,
            }
        except Exception as e:
            logger.error(f"Erro ao obter estatísticas: {str(e)}")
            return {}
