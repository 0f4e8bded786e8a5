"""Sweep result container and deterministic CSV/JSON emission.

Every output file embeds the fully resolved configuration as a leading comment
block (CSV) or a "config" object (JSON) for provenance.  Formatting is fixed
(floats via %.12g) so identical seeds reproduce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


@dataclass
class SweepResult:
    columns: list
    rows: list = field(default_factory=list)  # list of dicts
    config: dict = field(default_factory=dict)

    def add(self, **row):
        self.rows.append(row)

    def quantile_summary(self, values, quantiles=(0.25, 0.5, 0.75)):
        import numpy as np

        q = np.quantile(np.asarray(values, dtype=float), quantiles)
        return {"q25": float(q[0]), "median": float(q[1]), "q75": float(q[2])}

    def to_csv(self) -> str:
        lines = []
        for key in sorted(self.config):
            lines.append(f"# {key} = {fmt_value(self.config[key])}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(fmt_value(row.get(c, "")) for c in self.columns))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"config": self.config, "columns": self.columns, "rows": self.rows},
            sort_keys=True,
            indent=2,
        ) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
