from pydantic import ValidationError

from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.errors import InvalidParameterError
from app.models.run_config import RunConfig
from app.services import probe, readout
from app.services.codebook import build_codebook
from app.utils.csv_utils import DIM_SWEEP_HEADER, METRICS_HEADER, CsvUtils

DEFAULT_SWEEP_DIMENSIONS = (128, 256, 512, 1024, 2048)


def generator_params(args: CommandLineArgs) -> probe.GeneratorParams:
    values = {"family": args.family or "er"}
    if args.n_min is not None:
        values["n_min"] = args.n_min
    if args.n_max is not None:
        values["n_max"] = args.n_max
    try:
        return probe.GeneratorParams(**values)
    except ValidationError as e:
        raise InvalidParameterError(f"Invalid generator parameters: {e.errors()[0]['msg']}")


def run_probe(run_config: RunConfig, args: CommandLineArgs, d: int) -> tuple:
    """Build a dataset at dimension d, fit the chosen head and return one metrics row."""
    params = generator_params(args)
    task = probe.Task(CommandHandler.require(args.task, "--task"))
    codebook = build_codebook(
        d,
        run_config.seed,
        max(run_config.max_nodes, params.n_max),
        max(run_config.max_edges, params.m_max),
        unitary=run_config.unitary,
    )
    dataset = probe.build_dataset(
        task, params, codebook, args.size, run_config.seed, workers=run_config.workers
    )
    model = readout.fit_model(
        dataset,
        args.model,
        ridge_lambda=args.ridge_lambda,
        hidden=args.hidden,
        epochs=args.epochs,
        lr=args.lr,
        seed=run_config.seed,
    )
    metric_name, metric_value = readout.evaluate(model, dataset)
    return task.value, d, args.model, model.parameter_count, metric_name, metric_value, run_config.seed


class ProbeHandler(CommandHandler):
    """Fit a readout head on a synthetic task and emit one metrics row."""

    command = "probe"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        row = run_probe(run_config, args, run_config.d)
        self.logger.info("%s at d=%d: %s=%.4f", row[0], row[1], row[4], row[5])
        if run_config.output_path:
            CsvUtils.write(run_config.output_path, METRICS_HEADER, [row])
        else:
            print(CsvUtils.render(METRICS_HEADER, [row]), end="")


class DimSweepHandler(CommandHandler):
    """Repeat the probe across dimensions and add each metric relative to the best one."""

    command = "dim-sweep"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        dims = args.dims or list(DEFAULT_SWEEP_DIMENSIONS)
        rows = [run_probe(run_config, args, d) for d in dims]
        relative = readout.relative_metrics(rows[0][4], [row[5] for row in rows])
        rows = [(*row[:6], rel, row[6]) for row, rel in zip(rows, relative)]
        if run_config.output_path:
            CsvUtils.write(run_config.output_path, DIM_SWEEP_HEADER, rows)
        else:
            print(CsvUtils.render(DIM_SWEEP_HEADER, rows), end="")
