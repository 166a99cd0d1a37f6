import json
import sqlite3

import pandas as pd

from config.lab_config import get_lab_config
from hashlab.errors import UsageError
from utils.report_utils import create_stored_document, verify_document

# Stored document kind -> table
TABLE_FOR_KIND = {
    "verification_report": "verification_reports",
    "witness": "witnesses",
    "bound_rows": "bound_rows",
    "gp_table": "bound_rows",
    "divisor_table": "bound_rows",
    "ht_table": "bound_rows",
    "reproduction": "bound_rows",
}
TABLES = ("verification_reports", "witnesses", "bound_rows")


def _db_path(db_path=None):
    return db_path or get_lab_config()["db_path"]


def init_db(db_path=None):
    """Initialize the SQLite database and create tables."""
    path = _db_path(db_path)
    conn = sqlite3.connect(path)
    c = conn.cursor()
    for table in TABLES:
        c.execute(f'''
            CREATE TABLE IF NOT EXISTS {table} (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                kind TEXT NOT NULL,
                label TEXT,
                document TEXT NOT NULL,
                digest TEXT NOT NULL,
                argv TEXT,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        ''')
    conn.commit()
    conn.close()
    return path


def get_db_connection(db_path=None):
    """Get a connection to the SQLite database."""
    conn = sqlite3.connect(_db_path(db_path))
    conn.row_factory = sqlite3.Row
    return conn


def _label(kind, payload):
    if isinstance(payload, dict):
        for key in ("family", "kind", "status"):
            if key in payload:
                return str(payload[key])
    return kind


def save_document(kind, payload, argv=None, db_path=None):
    """Store a result with its digest; returns the new row id."""
    table = TABLE_FOR_KIND.get(kind)
    if table is None:
        raise UsageError(f"{kind} results cannot be saved")
    init_db(db_path)
    document = create_stored_document(kind, payload, argv)
    conn = get_db_connection(db_path)
    c = conn.cursor()
    c.execute(
        f"INSERT INTO {table} (kind, label, document, digest, argv) VALUES (?, ?, ?, ?, ?)",
        (
            kind,
            _label(kind, document["payload"]),
            json.dumps(document, sort_keys=True),
            document["digest"],
            json.dumps(document["metadata"]["argv"]),
        ),
    )
    row_id = c.lastrowid
    conn.commit()
    conn.close()
    return row_id


def load_document(table, row_id, db_path=None):
    """Stored document by id, or None; a digest mismatch raises ValueError."""
    if table not in TABLES:
        raise UsageError(f"unknown table {table!r}")
    conn = get_db_connection(db_path)
    row = conn.execute(f"SELECT document FROM {table} WHERE id = ?", (row_id,)).fetchone()
    conn.close()
    if row is None:
        return None
    document = json.loads(row["document"])
    if not verify_document(document):
        raise ValueError(f"{table} row {row_id} does not match its digest")
    return document


def list_documents(table, db_path=None):
    """Rows of one table without the document bodies, newest first."""
    if table not in TABLES:
        raise UsageError(f"unknown table {table!r}")
    init_db(db_path)
    conn = get_db_connection(db_path)
    frame = pd.read_sql(f"SELECT id, kind, label, digest, created_at FROM {table} ORDER BY id DESC", conn)
    conn.close()
    return frame


if __name__ == "__main__":
    print(f"Database initialized at {init_db()}")
