#!/usr/bin/env python3
"""
Cria o banco de denominadores, carrega denominators.json e audita o resultado
"""

import sys
import os

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from denomkit import database as db
from denomkit.config import configure_logging, get_settings


def main():
    configure_logging()
    settings = get_settings()
    print("=== BANCO DE DENOMINADORES ===\n")

    try:
        db.init_db()
        count = db.seed_denominators()
        if count is False:
            print(f"❌ Falha ao carregar {settings.tables_path}")
            return 1
        print(f"✅ {count} denominadores gravados em {db.get_db_path()}")

        conn = db.get_db_connection()
        rows = conn.execute("""
            SELECT type, provenance, COUNT(*) AS total
            FROM denominators GROUP BY type, provenance ORDER BY type, provenance
        """).fetchall()
        conn.close()

        print("\n📐 Entradas por tipo afim e proveniência:")
        by_type = {}
        for row in rows:
            by_type.setdefault(row['type'], []).append(f"{row['provenance']}={row['total']}")
        for tag, parts in by_type.items():
            print(f"   - {tag}: {', '.join(parts)}")

        print("\n🔍 Auditoria:")
        if not db.check_database_integrity():
            print("   ❌ O banco tem problemas (ver log)")
            return 1
        stats = db.get_database_stats()
        print(f"   ✅ ok ({stats.get('file_size', 0)} bytes, modo seguro: {settings.sqlite_secure})")

    except Exception as e:
        print(f"❌ Erro durante a inicialização: {e}")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
