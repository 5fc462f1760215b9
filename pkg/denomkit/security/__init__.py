"""
Módulo de segurança do denomkit
Contém o endurecimento das conexões SQLite e os backups verificados
"""

from .sqlite_security import SQLiteSecurityManager

__all__ = ['SQLiteSecurityManager']
