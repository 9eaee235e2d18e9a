from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.run_config import RunConfig
from app.services import decoder
from app.utils.csv_utils import CAPACITY_HEADER, CsvUtils


class CapacityHandler(CommandHandler):
    """Key-value capacity sweep; one CSV row per (n, trial)."""

    command = "capacity"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        result = decoder.capacity_sweep(
            run_config.d,
            self.require(args.n_values, "--n"),
            args.trials,
            run_config.seed,
            unitary=run_config.unitary,
            floor=run_config.inverse_floor,
        )
        rows = [
            (t.n, t.d, t.trial, t.min_correct_cosine, t.max_wrong_cosine, t.separation)
            for t in result.trials
        ]
        for record in result.records:
            self.logger.info("n=%d separation=%s", record.n, record.separation)
        if run_config.output_path:
            CsvUtils.write(run_config.output_path, CAPACITY_HEADER, rows)
        else:
            print(CsvUtils.render(CAPACITY_HEADER, rows), end="")
