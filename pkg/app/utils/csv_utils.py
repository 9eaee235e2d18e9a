import csv
import io
from typing import Iterable, Sequence

RECONSTRUCTION_HEADER = ("i", "j", "score", "accepted")
CAPACITY_HEADER = ("n", "d", "trial", "min_correct_cs", "max_wrong_cs", "separation")
METRICS_HEADER = ("task", "d", "model", "params", "metric_name", "metric_value", "seed")
DIM_SWEEP_HEADER = (
    "task", "d", "model", "params", "metric_name", "metric_value", "relative_metric", "seed",
)


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CsvUtils:
    @staticmethod
    def render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
        """Render rows under a fixed header; booleans as true/false, floats via repr."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"Row {row!r} does not match header {header!r}.")
            writer.writerow([_format(value) for value in row])
        return buffer.getvalue()

    @staticmethod
    def write(file_path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
        with open(file_path, "w", encoding="utf-8", newline="") as file:
            file.write(CsvUtils.render(header, rows))
