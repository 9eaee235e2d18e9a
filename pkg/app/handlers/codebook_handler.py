from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.errors import UsageError
from app.models.run_config import RunConfig
from app.services import codebook as codebook_service
from app.services.codebook import Codebook


def describe(codebook: Codebook) -> dict:
    return {
        "d": codebook.dimension,
        "seed": codebook.seed,
        "nodes": codebook.n_max,
        "edge_ids": codebook.m_max,
        "attributes": sorted(codebook.attribute_vectors),
        "unitary": codebook.unitary,
        "fingerprint": codebook.fingerprint,
    }


class CodebookHandler(CommandHandler):
    """codebook gen | import | inspect"""

    command = "codebook"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        if run_config.action == "gen":
            codebook = codebook_service.build_codebook(
                run_config.d,
                run_config.seed,
                run_config.max_nodes,
                run_config.max_edges,
                unitary=run_config.unitary,
                attributes=args.attrs,
            )
            codebook_service.save(codebook, self.require(run_config.output_path, "--out"))
        elif run_config.action == "import":
            existing = codebook_service.load(run_config.codebook_path) if run_config.codebook_path else None
            codebook = codebook_service.import_concept_vectors(
                self.require(run_config.input_path, "--in"),
                args.key_column,
                existing,
                seed=run_config.seed,
                n_max_nodes=run_config.max_nodes,
                m_max_edges=run_config.max_edges,
                unitary=run_config.unitary,
            )
            codebook_service.save(codebook, self.require(run_config.output_path, "--out"))
        elif run_config.action == "inspect":
            codebook = codebook_service.load(
                run_config.input_path or self.require(run_config.codebook_path, "--in")
            )
        else:
            raise UsageError(f"Unknown codebook action {run_config.action!r}.")

        self.emit({"command": "codebook", "action": run_config.action, **describe(codebook)}, run_config)
