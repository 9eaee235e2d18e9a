import argparse
from dataclasses import fields
from typing import Optional, Sequence

from app.models import CommandLineArgs
from app.models.errors import UsageError


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_geometry(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--d', type=int, help='Vector dimension (default: FOGE_DIMENSION).')
    parser.add_argument('--seed', type=int, help='Master seed (default: FOGE_SEED).')
    parser.add_argument('--unitary', action='store_true', default=None,
                        help='Use unit-spectral-magnitude vectors.')


def _add_paths(parser: argparse.ArgumentParser, *names: str) -> None:
    if 'in' in names:
        parser.add_argument('--in', dest='input_path', help='Input file.')
    if 'cb' in names:
        parser.add_argument('--cb', dest='codebook_path', help='Codebook file.')
    if 'out' in names:
        parser.add_argument('--out', dest='output_path', help='Output file.')


def _add_readout(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--task', required=True,
                        choices=['num_nodes', 'num_edges', 'has_cycle', 'num_triangles',
                                 'node_degree', 'hyper_num_nodes', 'hyper_num_edges'])
    parser.add_argument('--family', choices=['er', 'tree', 'ba'], default='er')
    parser.add_argument('--n-min', dest='n_min', type=int)
    parser.add_argument('--n-max', dest='n_max', type=int)
    parser.add_argument('--size', type=int, default=2000, help='Number of generated structures.')
    parser.add_argument('--model', choices=['ridge', 'mlp'], default='ridge')
    parser.add_argument('--lambda', dest='ridge_lambda', type=float, default=1e-3)
    parser.add_argument('--hidden', type=int, default=16)
    parser.add_argument('--epochs', type=int, default=1000)
    parser.add_argument('--lr', type=float, default=1e-3)
    parser.add_argument('--workers', type=int, help='Dataset threads (default: FOGE_WORKERS).')


class CommandLine:
    @staticmethod
    def build_parser() -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            prog='foge',
            description='Fock-space graph embeddings: encode, decode and probe graphs as hypervectors.')
        commands = parser.add_subparsers(dest='command', required=True)

        codebook = commands.add_parser('codebook', help='Generate, import or inspect a codebook.')
        codebook.add_argument('action', choices=['gen', 'import', 'inspect'])
        codebook.add_argument('path', nargs='?', help='Codebook or vector file; same as --in.')
        _add_geometry(codebook)
        _add_paths(codebook, 'in', 'cb', 'out')
        codebook.add_argument('--nodes', type=int, help='Number of node vectors.')
        codebook.add_argument('--edges', type=int, help='Number of hyperedge-id vectors.')
        codebook.add_argument('--attrs', type=_str_list, default=[], help='Comma-separated attribute keys.')
        codebook.add_argument('--key-column', dest='key_column', default='key')

        encode = commands.add_parser('encode', help='Encode a structure into an embedding file.')
        encode.add_argument('action', choices=['graph', 'attributed', 'hypergraph', 'hyper-product', 'neighborhood'])
        _add_paths(encode, 'in', 'cb', 'out')
        encode.add_argument('--vertex', type=int, help='Center vertex for neighborhood encoding.')
        encode.add_argument('--relabel', action='store_true', help='Map the neighborhood onto 1..k.')

        reconstruct = commands.add_parser('reconstruct', help='Decode an embedding file.')
        _add_paths(reconstruct, 'in', 'cb', 'out')
        reconstruct.add_argument('--threshold', help="Acceptance threshold or 'auto'.")
        reconstruct.add_argument('--csv', dest='csv_path', help='Write every pair score as CSV.')
        reconstruct.add_argument('--vertices', type=_int_list, default=[],
                                 help='Candidate vertex labels (e.g. global labels of a neighborhood).')
        reconstruct.add_argument('--edges', type=int, help='Hyperedge ids to query for keyed hypergraphs.')

        capacity = commands.add_parser('capacity', help='Key-value capacity sweep.')
        _add_geometry(capacity)
        _add_paths(capacity, 'out')
        capacity.add_argument('--n', dest='n_values', type=_int_list, required=True,
                              help='Comma-separated pair counts.')
        capacity.add_argument('--trials', type=int, default=20)

        probe = commands.add_parser('probe', help='Fit a readout head on a synthetic task.')
        _add_geometry(probe)
        _add_paths(probe, 'out')
        _add_readout(probe)

        dirac = commands.add_parser('dirac-check', help='Verify the Dirac operator of a graph.')
        _add_paths(dirac, 'in', 'out')

        sweep = commands.add_parser('dim-sweep', help='Probe across vector dimensions.')
        _add_geometry(sweep)
        _add_paths(sweep, 'out')
        _add_readout(sweep)
        sweep.add_argument('--dims', type=_int_list, default=[],
                           help='Comma-separated dimensions (default: 128,256,512,1024,2048).')
        return parser

    @staticmethod
    def parse_arguments(argv: Optional[Sequence[str]] = None) -> CommandLineArgs:
        parser = CommandLine.build_parser()
        namespace = vars(parser.parse_args(argv))
        positional = namespace.pop('path', None)
        if positional is not None:
            if namespace.get('input_path') not in (None, positional):
                raise UsageError('Give the input either as a positional path or with --in, not both.')
            namespace['input_path'] = positional
        known = {f.name for f in fields(CommandLineArgs)}
        return CommandLineArgs(**{key: value for key, value in namespace.items() if key in known})
