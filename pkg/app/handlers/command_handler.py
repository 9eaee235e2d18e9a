import logging
from abc import ABC, abstractmethod
from typing import Optional

from app.models.command_line_args import CommandLineArgs
from app.models.errors import FingerprintMismatchError, UsageError
from app.models.run_config import RunConfig
from app.services import codebook as codebook_service
from app.services.codebook import Codebook
from app.utils.json_utils import JsonUtils


class CommandHandler(ABC):
    """
    Abstract base class for CLI command handlers. Every handler names the
    command it serves and implements `handle`.
    """

    command: str = ""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__module__)

    def can_handle(self, command: str) -> bool:
        """
        Returns whether this handler serves the given command.
        """
        return command == self.command

    @abstractmethod
    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        """
        Executes the command.

        Parameters:
        - run_config (RunConfig): The resolved configuration of this invocation.
        - args (CommandLineArgs): The raw command-line values, for command-specific options.
        """
        pass

    @staticmethod
    def require(value, flag: str):
        if value is None or value == []:
            raise UsageError(f"Missing required option {flag}.")
        return value

    def load_codebook(self, run_config: RunConfig) -> Codebook:
        return codebook_service.load(self.require(run_config.codebook_path, "--cb"))

    @staticmethod
    def check_fingerprint(expected: str, codebook: Codebook) -> None:
        if expected != codebook.fingerprint:
            raise FingerprintMismatchError(
                f"Embedding was encoded with codebook {expected[:12]}, "
                f"got codebook {codebook.fingerprint[:12]}."
            )

    @staticmethod
    def emit(document: dict, run_config: RunConfig, path: Optional[str] = None) -> None:
        """Print a JSON document (with the resolved config embedded) and optionally save it."""
        document = {**document, "config": run_config.model_dump(mode="json")}
        if path:
            JsonUtils.write_json_file(document, path)
        print(JsonUtils.dumps(document))
