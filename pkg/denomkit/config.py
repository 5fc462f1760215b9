import os
import logging
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

# Carregar variáveis de ambiente
load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_DB_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'denomkit.db')
DEFAULT_TABLES_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'denominators.json')


class Settings(BaseModel):
    """
    Configuração do laboratório de denominadores, lida do ambiente (.env)
    """

    coproduct: Literal['A', 'B'] = 'A'
    qs_sample: int = Field(2, ge=2)
    qs_crosscheck: int = Field(3, ge=2)
    search_budget: int = Field(200000, gt=0)
    orbit_cap: int = Field(5000, gt=0)
    extension_cap: int = Field(100000, gt=0)
    allow_multiplicity: bool = False
    db_path: str = DEFAULT_DB_PATH
    tables_path: str = DEFAULT_TABLES_PATH
    sqlite_secure: bool = False
    backup_enabled: bool = False
    redis_url: str = 'redis://localhost:6379/0'
    threads: int = Field(1, ge=1)
    log_level: str = 'INFO'

    def with_overrides(self, **changes) -> 'Settings':
        """Cópia com os valores não nulos substituídos (flags da CLI)"""
        updates = {k: v for k, v in changes.items() if v is not None}
        return self.model_copy(update=updates)


def _env_bool(name: str, default: str = 'false') -> bool:
    return os.getenv(name, default).lower() == 'true'


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"Variável {name} inválida: {value!r}")


def load_settings() -> Settings:
    """Monta as configurações a partir das variáveis de ambiente"""
    redis_host = os.getenv('REDIS_HOST', 'localhost')
    redis_port = os.getenv('REDIS_PORT', '6379')
    try:
        return Settings(
            coproduct=os.getenv('DENOMKIT_COPRODUCT', 'A'),
            qs_sample=_env_int('DENOMKIT_QS_SAMPLE', 2),
            qs_crosscheck=_env_int('DENOMKIT_QS_CROSSCHECK', 3),
            search_budget=_env_int('DENOMKIT_SEARCH_BUDGET', 200000),
            orbit_cap=_env_int('DENOMKIT_ORBIT_CAP', 5000),
            extension_cap=_env_int('DENOMKIT_EXTENSION_CAP', 100000),
            allow_multiplicity=_env_bool('DENOMKIT_ALLOW_MULTIPLICITY'),
            db_path=os.getenv('DENOMKIT_DB_PATH', DEFAULT_DB_PATH),
            tables_path=os.getenv('DENOMKIT_TABLES_PATH', DEFAULT_TABLES_PATH),
            sqlite_secure=_env_bool('SQLITE_SECURE'),
            backup_enabled=_env_bool('DB_BACKUP_ENABLED'),
            redis_url=os.getenv('REDIS_URL', f'redis://{redis_host}:{redis_port}/0'),
            threads=_env_int('DENOMKIT_THREADS', 1),
            log_level=os.getenv('LOG_LEVEL', 'INFO').upper(),
        )
    except ValidationError as e:
        raise ValueError(f"Configuração inválida: {e}")


_current: Optional[Settings] = None


def get_settings() -> Settings:
    """Configurações do processo, montadas na primeira chamada"""
    global _current
    if _current is None:
        _current = load_settings()
    return _current


def override_settings(**changes) -> Settings:
    """Aplica as flags da CLI (valores None são ignorados) ao processo inteiro"""
    global _current
    _current = get_settings().with_overrides(**changes)
    return _current


def reset_settings() -> None:
    """Descarta as configurações atuais; a próxima chamada relê o ambiente"""
    global _current
    _current = None


def configure_logging(level: Optional[str] = None) -> None:
    """Configura o logging no formato padrão do projeto (stderr)"""
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.INFO),
        format=LOG_FORMAT
    )
