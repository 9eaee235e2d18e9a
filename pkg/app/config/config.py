import logging
import os
from dotenv import load_dotenv
from app.models.errors import ConfigError
from app.models.singleton import SingletonMeta


class Config(metaclass=SingletonMeta):
    _is_initialized = False

    def __init__(self):
        load_dotenv()  # Load environment variables from .env file
        if not self._is_initialized:
            self.logger = logging.getLogger(__name__)

            # Reproducibility
            self._seed = self._get_int('FOGE_SEED', 1)

            # Codebook geometry
            self._dimension = self._get_int('FOGE_DIMENSION', 2048)
            self._max_nodes = self._get_int('FOGE_MAX_NODES', 512)
            self._max_edges = self._get_int('FOGE_MAX_EDGES', 64)
            self._unitary = self._get_bool('FOGE_UNITARY', False)

            # Decoding
            self._threshold = self._get_float('FOGE_THRESHOLD', 0.5)
            self._inverse_floor = self._get_float('FOGE_INVERSE_FLOOR', 1e-8)

            # Runtime
            self._workers = self._get_int('FOGE_WORKERS', 1)
            self._log_level = self._get_log_level('FOGE_LOG_LEVEL', 'INFO')

            self._is_initialized = True

    @classmethod
    def initialize(cls):
        # Convenience method to explicitly initialize the Config
        cls()

    @classmethod
    def reset(cls):
        # Drop the cached instance so the environment is read again
        SingletonMeta._instances.pop(cls, None)

    @staticmethod
    def get(key, default=None):
        return os.getenv(key, default)

    def _get_int(self, key: str, default: int) -> int:
        raw = self.get(key, default)
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {raw!r}")

    def _get_float(self, key: str, default: float) -> float:
        raw = self.get(key, default)
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {raw!r}")

    def _get_bool(self, key: str, default: bool) -> bool:
        raw = self.get(key)
        if raw is None:
            return default
        value = raw.strip().lower()
        if value in ('1', 'true', 'yes', 'on'):
            return True
        if value in ('0', 'false', 'no', 'off'):
            return False
        raise ConfigError(f"{key} must be a boolean, got {raw!r}")

    def _get_log_level(self, key: str, default: str) -> str:
        raw = self.get(key, default)
        level = raw.strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"{key} must be a logging level name, got {raw!r}")
        return level

    @property
    def SEED(self):
        return self._seed

    @property
    def DIMENSION(self):
        return self._dimension

    @property
    def MAX_NODES(self):
        return self._max_nodes

    @property
    def MAX_EDGES(self):
        return self._max_edges

    @property
    def UNITARY(self):
        return self._unitary

    @property
    def THRESHOLD(self):
        return self._threshold

    @property
    def INVERSE_FLOOR(self):
        return self._inverse_floor

    @property
    def WORKERS(self):
        return self._workers

    @property
    def LOG_LEVEL(self):
        return self._log_level
