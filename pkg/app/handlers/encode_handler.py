from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.errors import MalformedDocumentError, UsageError
from app.models.graph import AttributedGraph, HyperGraph
from app.models.run_config import RunConfig
from app.services import encoder, graph_io


class EncodeHandler(CommandHandler):
    """encode graph | attributed | hypergraph | hyper-product | neighborhood"""

    command = "encode"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        codebook = self.load_codebook(run_config)
        path = self.require(run_config.input_path, "--in")
        structure = graph_io.load_structure(path)
        action = run_config.action

        if action in ("hypergraph", "hyper-product"):
            if not isinstance(structure, HyperGraph):
                raise MalformedDocumentError(f"{path}: {action} encoding needs a hypergraph document.")
            if action == "hypergraph":
                embedding = encoder.encode_hypergraph(structure, codebook)
            else:
                embedding = encoder.encode_hypergraph_product(structure, codebook)
        elif isinstance(structure, HyperGraph):
            raise MalformedDocumentError(f"{path}: {action} encoding needs a graph, got a hypergraph.")
        elif action == "attributed":
            if not isinstance(structure, AttributedGraph):
                raise MalformedDocumentError(f"{path}: attributed encoding needs an 'attrs' list.")
            embedding = encoder.encode_attributed(structure, codebook)
        else:
            graph = structure.graph if isinstance(structure, AttributedGraph) else structure
            if action == "graph":
                embedding = encoder.encode_graph(graph, codebook)
            elif action == "neighborhood":
                vertex = self.require(args.vertex, "--vertex")
                embedding = encoder.encode_node_neighborhood(graph, vertex, codebook, relabel=args.relabel)
            else:
                raise UsageError(f"Unknown encode action {action!r}.")

        encoder.save_embedding(embedding, self.require(run_config.output_path, "--out"))
        self.emit(
            {
                "command": "encode",
                "mode": embedding.mode.value,
                "d": embedding.d,
                "n_declared": embedding.n_declared,
                "codebook_fingerprint": embedding.codebook_fingerprint,
                "embedding_sha256": encoder.embedding_digest(embedding),
            },
            run_config,
        )
