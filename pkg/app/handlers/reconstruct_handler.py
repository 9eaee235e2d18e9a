from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.embedding import EncodingMode
from app.models.run_config import RunConfig
from app.services import decoder, encoder
from app.utils.csv_utils import RECONSTRUCTION_HEADER, CsvUtils


class ReconstructHandler(CommandHandler):
    """
    Decode an embedding file.

    Graph and neighborhood embeddings are fully reconstructed; keyed hypergraph
    embeddings report the membership of every edge id that decodes to a
    non-empty vertex set.
    """

    command = "reconstruct"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        codebook = self.load_codebook(run_config)
        embedding = encoder.load_embedding(self.require(run_config.input_path, "--in"))
        self.check_fingerprint(embedding.codebook_fingerprint, codebook)

        if embedding.mode is EncodingMode.HYPER_KEYED:
            self._hyperedges(run_config, args, embedding, codebook)
            return

        report = decoder.reconstruct_graph(
            embedding,
            codebook,
            run_config.threshold,
            vertices=args.vertices or None,
            floor=run_config.inverse_floor,
        )
        if run_config.csv_path:
            rows = [
                (i, j, score, (i, j) in report.accepted_edges)
                for (i, j), score in sorted(report.edge_scores.items())
            ]
            CsvUtils.write(run_config.csv_path, RECONSTRUCTION_HEADER, rows)
        self.emit(
            {
                "command": "reconstruct",
                "mode": embedding.mode.value,
                "recovered_n": report.recovered_n,
                "edges": [list(edge) for edge in sorted(report.accepted_edges)],
                "threshold_used": report.threshold_used,
                "size_low_confidence": report.size_low_confidence,
                "ambiguous": report.ambiguous,
                "clamped": any(report.clamping_flags),
                "codebook_fingerprint": codebook.fingerprint,
            },
            run_config,
            run_config.output_path,
        )

    def _hyperedges(self, run_config, args, embedding, codebook) -> None:
        edge_count = min(args.edges or codebook.m_max, codebook.m_max)
        hyperedges = []
        for index in range(1, edge_count + 1):
            membership = decoder.recover_hyperedge_members(
                embedding, index, codebook, run_config.threshold, run_config.inverse_floor
            )
            if membership.members:
                hyperedges.append(
                    {
                        "edge": index,
                        "members": sorted(membership.members),
                        "low_confidence": membership.low_confidence,
                    }
                )
        self.emit(
            {
                "command": "reconstruct",
                "mode": embedding.mode.value,
                "recovered_n": decoder.recover_size(embedding, codebook, run_config.inverse_floor),
                "hyperedges": hyperedges,
                "codebook_fingerprint": codebook.fingerprint,
            },
            run_config,
            run_config.output_path,
        )
