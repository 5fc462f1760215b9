from dataclasses import dataclass
from typing import Dict

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Lab:
    """Configurações do processo mais as tabelas de denominadores carregadas"""
    settings: object
    tables: Dict[str, object]

    def lookup(self, tag, i, j):
        from denomkit.services.cartan import normalize_affine_tag
        return self.tables[normalize_affine_tag(tag)].get(i, j)


def create_lab(**overrides):
    from denomkit.config import configure_logging, override_settings
    from denomkit.services.denomlab import load_tables

    settings = override_settings(**overrides)
    configure_logging()
    return Lab(settings, load_tables())
