"""Deterministic table and figure output.

CSV tables use a fixed 16-column header, floats printed with 17 significant
digits so parse(emit(table)) reproduces every value bit-for-bit, and '#'
comment lines (skipped on parse) for sweep summaries.  Gnuplot scripts are
emitted as plain text referencing the data file by path.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .riemann import KineticSample

CSV_HEADER = ("model,profile_id,q,alpha,eps,h,c,u_minus,u_plus,speed,"
              "dissipation,exact_u_plus,abs_error,structure,t_end,status")
CSV_COLUMNS = tuple(CSV_HEADER.split(","))

FIGURE_KINDS = ("kinetic", "dissipation_vs_speed", "wave_structure")


def format_float(value: float | None) -> str:
    """17-significant-digit text; empty for missing values."""
    if value is None:
        return ""
    return "%.17g" % float(value)


def _parse_float(text: str) -> float | None:
    return None if text == "" else float(text)


def emit_csv(samples: list[KineticSample], comments: tuple[str, ...] | list[str] = ()) -> str:
    lines = [CSV_HEADER]
    for s in samples:
        fields = (s.model, s.profile_id, str(s.q), format_float(s.alpha),
                  format_float(s.eps), format_float(s.h), format_float(s.c),
                  format_float(s.u_minus), format_float(s.u_plus),
                  format_float(s.speed), format_float(s.dissipation),
                  format_float(s.exact_u_plus), format_float(s.abs_error),
                  s.structure, format_float(s.t_end), s.status)
        for f in fields[:3] + fields[13:]:
            if "," in f or "\n" in f:
                raise ConfigurationError(f"field {f!r} would corrupt the CSV")
        lines.append(",".join(fields))
    for comment in comments:
        lines.append("# " + str(comment).replace("\n", " "))
    return "\n".join(lines) + "\n"


def write_csv(path: str | Path, samples: list[KineticSample],
              comments: tuple[str, ...] | list[str] = ()) -> None:
    Path(path).write_text(emit_csv(samples, comments))


def parse_csv(text: str) -> list[KineticSample]:
    """Inverse of emit_csv: exact float round-trip, comments skipped."""
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ConfigurationError("empty table")
    if lines[0].strip() != CSV_HEADER:
        raise ConfigurationError(f"unexpected header {lines[0]!r}")
    samples = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ConfigurationError(f"row has {len(parts)} fields: {ln!r}")
        samples.append(KineticSample(
            model=parts[0], profile_id=parts[1], q=int(parts[2]),
            alpha=float(parts[3]), eps=float(parts[4]), h=float(parts[5]),
            c=float(parts[6]), u_minus=float(parts[7]), u_plus=float(parts[8]),
            speed=float(parts[9]), dissipation=_parse_float(parts[10]),
            exact_u_plus=_parse_float(parts[11]),
            abs_error=_parse_float(parts[12]), structure=parts[13],
            t_end=float(parts[14]), status=parts[15]))
    return samples


def read_csv(path: str | Path) -> list[KineticSample]:
    return parse_csv(Path(path).read_text())


# ---------------------------------------------------------------------------
# field dumps (whitespace-separated columns for gnuplot)

def format_field(x: np.ndarray, field: np.ndarray) -> str:
    """Two columns (x value), or three (x tau u) for a two-field state."""
    x = np.asarray(x, dtype=float)
    field = np.asarray(field, dtype=float)
    cols = [x] + ([field] if field.ndim == 1 else list(field))
    if any(col.shape != x.shape for col in cols):
        raise ConfigurationError("field and coordinate shapes disagree")
    lines = [" ".join(format_float(c[i]) for c in cols) for i in range(x.size)]
    return "\n".join(lines) + "\n"


def dump_field(path: str | Path, x: np.ndarray, field: np.ndarray) -> None:
    Path(path).write_text(format_field(x, field))


# ---------------------------------------------------------------------------
# gnuplot scripts

def emit_gnuplot(samples: list[KineticSample], figure_kind: str,
                 data_path: str = "kinetic.csv") -> str:
    """Gnuplot script text for one figure kind.

    kinetic and dissipation_vs_speed plot columns of the CSV written for
    `samples`; wave_structure plots a whitespace field dump (pass its path
    as data_path, samples may be empty).
    """
    if figure_kind not in FIGURE_KINDS:
        raise ConfigurationError(
            f"unknown figure kind {figure_kind!r}; expected one of {FIGURE_KINDS}")
    if figure_kind == "wave_structure":
        return "\n".join([
            "set xlabel 'x'",
            "set ylabel 'field value'",
            "set grid",
            f"plot '{data_path}' using 1:2 with lines title 'snapshot'",
            "",
        ])
    if not samples:
        raise ConfigurationError(f"figure kind {figure_kind!r} needs a non-empty table")
    if figure_kind == "kinetic":
        plots = [f"'{data_path}' using 8:9 with points pointtype 7 title 'measured'"]
        if any(s.exact_u_plus is not None for s in samples):
            plots.append(f"'{data_path}' using 8:12 with lines dashtype 2 "
                         "title 'closed form'")
        return "\n".join([
            "set datafile separator ','",
            "set xlabel 'upstream state'",
            "set ylabel 'downstream state'",
            "set grid",
            "plot " + ", \\\n     ".join(plots),
            "",
        ])
    # dissipation_vs_speed: entropy dissipation scaled by speed^2 against speed
    if all(s.dissipation is None for s in samples):
        raise ConfigurationError("no dissipation values in the table")
    return "\n".join([
        "set datafile separator ','",
        "set xlabel 'front speed'",
        "set ylabel 'entropy dissipation / speed^2'",
        "set grid",
        f"plot '{data_path}' using 10:($11/($10*$10)) "
        "with points pointtype 7 title 'measured'",
        "",
    ])
