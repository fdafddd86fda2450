# core/file_manager.py

import json
import os
import tempfile
from typing import Any, Dict, Iterable, Optional

from core.errors import ConfigError


class FileManager:
    """
    Handles all artifact file operations for osmoflow
    - Atomic JSON / JSON-lines / text writes (temp file + rename)
    - Key -> path table for every run artifact
    - Per-task key=value result files
    """

    RESULT_HEADER = "# osmoflow state point result v1 (key=value, one per line)"

    def __init__(self, base_dir: str = "results"):
        self.base_dir = base_dir

        self.files = {
            'campaign_report': os.path.join(self.base_dir, 'campaign_report.json'),
            'run_report': os.path.join(self.base_dir, 'run_report.jsonl'),
            'run_summary': os.path.join(self.base_dir, 'run_summary.json'),
            'workflow_ttl': os.path.join(self.base_dir, 'eos-parameterization.ttl'),
            'perf_model': os.path.join(self.base_dir, 'perf_model.json'),
        }

    def init_directories(self):
        """Create the output directory if it doesn't exist"""
        os.makedirs(self.base_dir, exist_ok=True)
        return True

    def get_file_path(self, file_key: str) -> str:
        """Get file path by key"""
        path = self.files.get(file_key)
        if path is None:
            raise ConfigError(f"Unknown file key: {file_key}")
        return path

    def file_exists(self, file_key: str) -> bool:
        return os.path.exists(self.get_file_path(file_key))

    # ========== ATOMIC WRITES ==========

    @staticmethod
    def write_atomic(path: str, text: str):
        """
        Write text to path via a temp file in the same directory

        A failure leaves any previous file untouched and no partial output behind.
        """
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(prefix='.tmp-', dir=directory)
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise

    def save_json(self, file_key: str, data: Any) -> str:
        path = self.get_file_path(file_key)
        self.write_atomic(path, json.dumps(data, indent=2, sort_keys=True) + "\n")
        return path

    def save_jsonl(self, file_key: str, records: Iterable[Dict]) -> str:
        path = self.get_file_path(file_key)
        lines = [json.dumps(record, sort_keys=True) for record in records]
        self.write_atomic(path, "".join(line + "\n" for line in lines))
        return path

    def save_text(self, file_key: str, text: str) -> str:
        path = self.get_file_path(file_key)
        self.write_atomic(path, text)
        return path

    @staticmethod
    def load_json_path(path: str) -> Any:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)

    def load_json(self, file_key: str, default: Any = None) -> Any:
        path = self.get_file_path(file_key)
        if not os.path.exists(path):
            return default
        return self.load_json_path(path)

    # ========== TASK DIRECTORIES ==========

    def task_path(self, taskdir: str, filename: str) -> str:
        """Resolve a file inside a task directory below the base directory"""
        return os.path.join(self.base_dir, taskdir, filename)

    def write_key_values(self, path: str, values: Dict[str, Any], header: Optional[str] = None):
        lines = [header or self.RESULT_HEADER]
        for key in sorted(values):
            lines.append(f"{key}={values[key]!r}" if isinstance(values[key], float) else f"{key}={values[key]}")
        self.write_atomic(path, "\n".join(lines) + "\n")

    @staticmethod
    def read_key_values(path: str) -> Dict[str, str]:
        values = {}
        with open(path, 'r', encoding='utf-8') as f:
            for raw in f:
                line = raw.strip()
                if not line or line.startswith('#'):
                    continue
                key, _, value = line.partition('=')
                values[key.strip()] = value.strip()
        return values
