"""Run-record repository."""

from pathlib import Path
from typing import Any

import aiosqlite

from petrisynth.db.migrate import MigrationManager
from petrisynth.harness.records import RECORD_COLUMNS, RunRecord


class RunRepository:
    """Stores :class:`RunRecord` rows in the ``runs`` table."""

    def __init__(self, db_path: Path) -> None:
        """Initialize the repository.

        Args:
            db_path: Path to the SQLite database file.
        """
        self.db_path = db_path

    async def ensure_schema(self) -> list[str]:
        """Apply pending migrations and return their versions."""
        return await MigrationManager(self.db_path).migrate_all()

    async def insert_run(self, record: RunRecord) -> int:
        """Insert a record.

        Returns:
            The run ID.
        """
        row = record.as_row()
        columns = ", ".join(RECORD_COLUMNS)
        placeholders = ", ".join("?" for _ in RECORD_COLUMNS)
        async with aiosqlite.connect(self.db_path) as db:
            cursor = await db.execute(
                f"INSERT INTO runs ({columns}) VALUES ({placeholders})",
                tuple(row[c] for c in RECORD_COLUMNS),
            )
            await db.commit()
            if cursor.lastrowid is None:
                raise RuntimeError("Failed to insert run - no ID returned")
            return cursor.lastrowid

    async def list_runs(self, benchmark: str | None = None) -> list[dict[str, Any]]:
        """Runs in insertion order, optionally for one benchmark only."""
        async with aiosqlite.connect(self.db_path) as db:
            db.row_factory = aiosqlite.Row
            if benchmark is None:
                cursor = await db.execute("SELECT * FROM runs ORDER BY id")
            else:
                cursor = await db.execute(
                    "SELECT * FROM runs WHERE benchmark = ? ORDER BY id", (benchmark,)
                )
            rows = await cursor.fetchall()
            return [dict(row) for row in rows]

    async def get_run(self, run_id: int) -> RunRecord | None:
        async with aiosqlite.connect(self.db_path) as db:
            db.row_factory = aiosqlite.Row
            cursor = await db.execute("SELECT * FROM runs WHERE id = ?", (run_id,))
            row = await cursor.fetchone()
            return RunRecord.from_row(dict(row)) if row else None
