import numpy as np

from app.handlers.command_handler import CommandHandler
from app.models.command_line_args import CommandLineArgs
from app.models.errors import MalformedDocumentError, NumericalFailureError
from app.models.graph import AttributedGraph, Graph
from app.models.run_config import RunConfig
from app.services import graph_io, graph_oracles, spectral

DIRAC_TOLERANCE = 1e-8
COEFFICIENT_TOLERANCE = 1e-12


class DiracCheckHandler(CommandHandler):
    """
    Build the Laplacian and Dirac operator of a graph and verify D^2 = L,
    sum_k E_k = D, and that the zero eigenvalue count matches the number of
    connected components.
    """

    command = "dirac-check"

    def handle(self, run_config: RunConfig, args: CommandLineArgs) -> None:
        path = self.require(run_config.input_path, "--in")
        structure = graph_io.load_structure(path)
        if isinstance(structure, AttributedGraph):
            structure = structure.graph
        if not isinstance(structure, Graph):
            raise MalformedDocumentError(f"{path}: dirac-check needs a graph.")

        bundle = spectral.spectral_bundle(structure)
        residual = spectral.dirac_residual(bundle)
        coefficient_error = float(np.max(np.abs(sum(bundle.coefficients) - bundle.dirac), initial=0.0))
        zero_multiplicity = spectral.zero_eigenvalue_multiplicity(bundle.eigenvalues)
        components = graph_oracles.connected_components(structure)

        self.emit(
            {
                "command": "dirac-check",
                "n": structure.n,
                "edges": len(structure.edges),
                "dirac_residual": residual,
                "coefficient_sum_error": coefficient_error,
                "min_eigenvalue": float(bundle.eigenvalues.min()),
                "zero_eigenvalues": zero_multiplicity,
                "components": components,
            },
            run_config,
            run_config.output_path,
        )
        if residual > DIRAC_TOLERANCE or coefficient_error > COEFFICIENT_TOLERANCE:
            raise NumericalFailureError(
                f"Dirac check failed: residual {residual:.3e}, coefficient error {coefficient_error:.3e}."
            )
        if zero_multiplicity != components:
            raise NumericalFailureError(
                f"Laplacian has {zero_multiplicity} zero eigenvalues but the graph has {components} components."
            )
