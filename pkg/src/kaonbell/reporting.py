"""Delimited / JSON output with reproducibility headers.

Every file starts with '#'-prefixed metadata lines (tool version,
effective constants, seed) so any number in it can be traced back to a
configuration.  Numbers are written with 12 significant digits.
"""

from __future__ import annotations

import json
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Iterable, Sequence

from .params import MesonParameters

try:
    TOOL_VERSION = version("kaonbell")
except PackageNotFoundError:  # running from a source tree
    TOOL_VERSION = "0.1.0"


def fmt(x: float) -> str:
    return f"{x:.12g}"


def metadata_lines(
    params: MesonParameters, seed: int | None = None, **extra: object
) -> list[str]:
    lines = [
        f"# kaonbell {TOOL_VERSION}",
        f"# preset = {params.label}",
        f"# gamma_S = {fmt(params.gamma_s)}",
        f"# gamma_L = {fmt(params.gamma_l)}",
        f"# delta_m = {fmt(params.delta_m)}",
    ]
    if seed is not None:
        lines.append(f"# seed = {seed}")
    for key, value in extra.items():
        lines.append(f"# {key} = {value}")
    return lines


def write_csv(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence[float]],
    params: MesonParameters,
    seed: int | None = None,
    **extra: object,
) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for line in metadata_lines(params, seed, **extra):
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(float(v)) for v in row) + "\n")
    return path


def json_payload(
    data: dict, params: MesonParameters, seed: int | None = None, **extra: object
) -> dict:
    meta = {
        "tool": f"kaonbell {TOOL_VERSION}",
        "preset": params.label,
        "gamma_S": params.gamma_s,
        "gamma_L": params.gamma_l,
        "delta_m": params.delta_m,
    }
    if seed is not None:
        meta["seed"] = seed
    meta.update(extra)
    return {"meta": meta, **data}


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, default=_default)


def _default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)!r}")
