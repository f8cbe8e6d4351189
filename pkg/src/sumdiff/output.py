"""Result envelopes and their serialization.

The payload part of an envelope is deterministic: keys are sorted, no
timestamps, and set listings are capped. Wall-clock timing and resume
lineage live in the separate ``run`` header.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .errors import SumdiffError
from .intset import IntSet

FORMAT_VERSION = "sumdiff-envelope/1"
SET_CAP = 10_000


class OutputError(SumdiffError, OSError):
    pass


def set_payload(A: IntSet, cap: int = SET_CAP) -> dict:
    elems = list(A.elements)
    return {"elements": elems[:cap], "cardinality": len(elems), "truncated": len(elems) > cap}


@dataclass
class ResultEnvelope:
    command: str
    config: dict
    payload: dict
    exhaustive: Optional[bool] = None
    run: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "format_version": FORMAT_VERSION,
            "command": self.command,
            "config": self.config,
            "exhaustive": self.exhaustive,
            "payload": self.payload,
            "run": self.run,
        }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def payload_bytes(env: ResultEnvelope) -> bytes:
    """The part of an envelope that must be byte-identical across identical runs."""
    d = env.to_dict()
    d.pop("run")
    return dumps(d).encode()


def to_csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_text(env: ResultEnvelope) -> str:
    lines = [f"# {env.command}"]

    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, dict):
            if set(value) == {"elements", "cardinality", "truncated"}:
                tail = ",..." if value["truncated"] else ""
                body = ",".join(map(str, value["elements"]))
                lines.append(f"{prefix}: {{{body}{tail}}}  (|.| = {value['cardinality']})")
                return
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        else:
            lines.append(f"{prefix}: {value}")

    walk("", env.payload)
    if env.run:
        walk("run", env.run)
    return "\n".join(lines) + "\n"


def render(env: ResultEnvelope, fmt: str, csv_table: Optional[tuple[list[str], list[list]]] = None) -> str:
    if fmt == "json":
        return dumps(env.to_dict())
    if fmt == "csv":
        if csv_table is None:
            raise OutputError(f"command {env.command!r} has no CSV form; use --format json")
        header, rows = csv_table
        return to_csv(rows, header)
    return to_text(env)


def write_text(text: str, path: Optional[os.PathLike]) -> None:
    if path is None:
        return
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from None
