import csv
import io
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from src.formatting import format_ns
from src.fp_arith import OpCounter

CSV_HEADER = ("routine", "mul", "sqr", "add_sub", "inv", "wall_ns_mean")

CostRow = namedtuple("CostRow", CSV_HEADER)

FOOTNOTES = (
    "counts are per-call means over all trials; wall_ns_mean is machine dependent",
    "curve setup (Montgomery a24, doubles tables, memo precomputation) is not counted",
    "operation-unit and parallel-level columns are not reported",
)


def _mean_count(values: Sequence[int]):
    mean = float(np.mean(values)) if len(values) else 0.0
    return int(mean) if mean.is_integer() else round(mean, 3)


@dataclass
class CostReport:
    curve_name: str
    trials: int
    rows: List[CostRow] = field(default_factory=list)

    def add(self, routine: str, counters: Sequence[OpCounter], wall_ns: Sequence[int]) -> CostRow:
        row = CostRow(
            routine,
            _mean_count([c.mul for c in counters]),
            _mean_count([c.sqr for c in counters]),
            _mean_count([c.add_sub for c in counters]),
            _mean_count([c.inv for c in counters]),
            float(np.mean(wall_ns)) if len(wall_ns) else 0.0,
        )
        self.rows.append(row)
        return row

    def row(self, routine: str) -> CostRow:
        for row in self.rows:
            if row.routine == routine:
                return row
        raise KeyError(routine)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow([*row[:-1], f"{row.wall_ns_mean:.0f}"])
        return out.getvalue()

    def write_csv(self, path: str):
        with open(path, "w", newline="") as f:
            f.write(self.to_csv())

    def summary_lines(self) -> List[str]:
        lines = [f"curve={self.curve_name} trials={self.trials}"]
        width = max((len(row.routine) for row in self.rows), default=0)
        for row in self.rows:
            lines.append(
                f"{row.routine:<{width}}  mul={row.mul} sqr={row.sqr} add_sub={row.add_sub} inv={row.inv}"
                f" wall={format_ns(row.wall_ns_mean)}"
            )
        lines.extend(f"# {note}" for note in FOOTNOTES)
        return lines
