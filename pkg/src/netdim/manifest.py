"""Run manifests and the CSV/JSON emission helpers used by the CLI.

Every output file carries (or accompanies) a manifest echoing the fully
resolved parameter set, the tool version and the seed, so the run can be
reproduced exactly from the file alone.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import __version__


@dataclass
class RunManifest:
    subcommand: str
    config_echo: dict
    tool_version: str = __version__
    seed: int | None = None
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def comment_lines(self) -> list[str]:
        blob = json.dumps(asdict(self), sort_keys=True)
        return [f"# netdim {self.subcommand} v{self.tool_version}", f"# manifest: {blob}"]


def render_csv(manifest: RunManifest, columns: list[str], rows: list[tuple]) -> str:
    """CSV text: '.' decimals, ',' separator, '#' manifest comment lines."""
    buf = io.StringIO()
    for line in manifest.comment_lines():
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return v


def render_json(manifest: RunManifest, columns: list[str], rows: list[tuple]) -> str:
    doc = {
        "manifest": asdict(manifest),
        "columns": columns,
        "rows": [list(r) for r in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
