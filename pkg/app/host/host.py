import importlib
import inspect
import logging
import os
import sys

from pydantic import ValidationError

from app.config import Config
from app.handlers.command_handler import CommandHandler
from app.models import CommandLineArgs
from app.models.errors import ConfigError, FogeError, UsageError
from app.models.run_config import RunConfig

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Host:
    def __init__(self, args: CommandLineArgs):
        """
        Initialize the Host with parsed command line arguments and discover the
        command handlers.

        Parameters:
        args (CommandLineArgs): Command line arguments passed to the script.
        """
        self.args = args
        self.logger = logging.getLogger(__name__)
        self.handler_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "handlers")
        self.handlers = self.load_handlers()

    def load_handlers(self) -> list[CommandHandler]:
        """
        Import every module of the 'handlers' package and instantiate each class
        implementing the CommandHandler interface.
        """
        handlers = []
        for file_name in sorted(os.listdir(self.handler_dir)):
            if not file_name.endswith('.py') or file_name.startswith('__'):
                continue
            module = importlib.import_module(f"app.handlers.{file_name[:-3]}")
            for name, obj in inspect.getmembers(module, inspect.isclass):
                if (issubclass(obj, CommandHandler) and obj is not CommandHandler
                        and not inspect.isabstract(obj) and obj.__module__ == module.__name__):
                    self.logger.debug("Loaded handler: %s", name)
                    handlers.append(obj())
        return handlers

    def resolve_config(self) -> RunConfig:
        """
        Layer the command line over Config. Values given on the command line win.
        """
        config = Config()
        logging.getLogger().setLevel(config.LOG_LEVEL)
        args = self.args

        def pick(value, default):
            return default if value is None else value

        try:
            return RunConfig(
                command=args.command,
                action=args.action,
                d=pick(args.d, config.DIMENSION),
                seed=pick(args.seed, config.SEED),
                max_nodes=pick(args.nodes, config.MAX_NODES),
                max_edges=pick(args.edges, config.MAX_EDGES),
                unitary=pick(args.unitary, config.UNITARY),
                threshold=pick(args.threshold, config.THRESHOLD),
                inverse_floor=config.INVERSE_FLOOR,
                workers=pick(args.workers, config.WORKERS),
                codebook_path=args.codebook_path,
                input_path=args.input_path,
                output_path=args.output_path,
                csv_path=args.csv_path,
            )
        except ValidationError as e:
            error = e.errors()[0]
            raise ConfigError(f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}")

    def attach_log_sidecar(self):
        """Send log records to '<out>.log' so timestamps never reach the primary output."""
        if not self.args.output_path:
            return None
        handler = logging.FileHandler(f"{self.args.output_path}.log", mode="w", encoding="utf-8")
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(handler)
        return handler

    @staticmethod
    def report_error(kind: str, code: int, message: str) -> None:
        text = message.replace('"', "'").replace("\n", " ")
        print(f'foge-error kind={kind} code={code} message="{text}"', file=sys.stderr)

    def run(self) -> int:
        """
        Execute the requested command and return the process exit code.
        """
        sidecar = self.attach_log_sidecar()
        try:
            run_config = self.resolve_config()
            self.logger.info("Resolved configuration: %s", run_config.model_dump_json())
            handler = next((h for h in self.handlers if h.can_handle(run_config.command)), None)
            if handler is None:
                raise UsageError(f"Unknown command {run_config.command!r}.")
            handler.handle(run_config, self.args)
            return 0
        except FogeError as e:
            self.logger.error("%s failed: %s", self.args.command, e.message)
            self.report_error(e.kind, e.exit_code, e.message)
            return e.exit_code
        except OSError as e:
            self.logger.error("%s failed: %s", self.args.command, e)
            self.report_error("io", 2, str(e))
            return 2
        finally:
            if sidecar is not None:
                logging.getLogger().removeHandler(sidecar)
                sidecar.close()
