"""File-backed workspace: datasets as raw CSV plus a schema sidecar, sessions
as one JSON snapshot rewritten atomically (write-temp, rename) after every
mutation. A fresh Workspace over the same directory reproduces all reads."""
from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from pathlib import Path

from ..dataset import Dataset, ingest_csv, schema


class NotFound(KeyError):
    pass


class Workspace:
    def __init__(self, data_dir: str):
        self.root = Path(data_dir)
        self.datasets_dir = self.root / "datasets"
        self.sessions_dir = self.root / "sessions"
        self.datasets_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._datasets: dict[str, Dataset] = {}
        self._sessions: dict[str, dict] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # --- datasets -----------------------------------------------------------

    def add_dataset(self, data: bytes, name: str) -> Dataset:
        dataset_id = f"ds-{uuid.uuid4().hex[:12]}"
        dataset = ingest_csv(data, name, dataset_id=dataset_id)
        self._atomic_write(self.datasets_dir / f"{dataset_id}.csv", data)
        sidecar = {
            "id": dataset_id,
            "name": name,
            "schema": [{"name": n, "kind": k} for n, k in schema(dataset)],
        }
        self._atomic_write(
            self.datasets_dir / f"{dataset_id}.schema.json",
            json.dumps(sidecar, indent=1).encode(),
        )
        with self._registry_lock:
            self._datasets[dataset_id] = dataset
        return dataset

    def get_dataset(self, dataset_id: str) -> Dataset:
        with self._registry_lock:
            if dataset_id in self._datasets:
                return self._datasets[dataset_id]
        csv_path = self.datasets_dir / f"{dataset_id}.csv"
        sidecar_path = self.datasets_dir / f"{dataset_id}.schema.json"
        if not csv_path.exists() or not sidecar_path.exists():
            raise NotFound(dataset_id)
        sidecar = json.loads(sidecar_path.read_text("utf-8"))
        dataset = ingest_csv(csv_path.read_bytes(), sidecar["name"], dataset_id=dataset_id)
        with self._registry_lock:
            self._datasets[dataset_id] = dataset
        return dataset

    def list_datasets(self) -> list[dict]:
        out = []
        for sidecar_path in sorted(self.datasets_dir.glob("*.schema.json")):
            out.append(json.loads(sidecar_path.read_text("utf-8")))
        return out

    # --- sessions -------------------------------------------------------------

    def new_session(self, session: dict) -> dict:
        session_id = f"s-{uuid.uuid4().hex[:12]}"
        session = {"id": session_id, **session}
        self.save_session(session)
        return session

    def get_session(self, session_id: str) -> dict:
        with self._registry_lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            raise NotFound(session_id)
        session = json.loads(path.read_text("utf-8"))
        with self._registry_lock:
            self._sessions[session_id] = session
        return session

    def save_session(self, session: dict) -> None:
        payload = json.dumps(session, indent=1).encode()
        self._atomic_write(self.sessions_dir / f"{session['id']}.json", payload)
        with self._registry_lock:
            self._sessions[session["id"]] = session

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    # --- plumbing ---------------------------------------------------------------

    @staticmethod
    def _atomic_write(path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
