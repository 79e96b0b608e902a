"""Diagnostic time series as CSV, one row per record, 17 significant digits."""

from __future__ import annotations

import csv
import math

from ..hall import DiagnosticsRecord

COLUMNS = ("t", "energy_paper", "energy_sym", "energy_u", "energy_B", "dissipation",
           "hall_power", "helicity", "current_helicity", "div_u_max", "div_B_max")


class StreamError(ValueError):
    """Records were not emitted in increasing time order."""


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return "%.17g" % v


class DiagnosticsWriter:
    """Stream records to a text file; unused fields are written empty."""

    def __init__(self, fh, unused=()):
        self._blank = [c in unused for c in COLUMNS]
        self._w = csv.writer(fh, lineterminator="\n")
        self._w.writerow(COLUMNS)
        self._last = -math.inf

    def __call__(self, rec):
        self.write(rec)

    def write(self, rec):
        row = rec.as_row() if isinstance(rec, DiagnosticsRecord) else [
            rec.get(c) if isinstance(rec, dict) else getattr(rec, c, None) for c in COLUMNS]
        t = row[0]
        if not t > self._last:
            raise StreamError(f"non-monotone time: {t!r} after {self._last!r}")
        self._last = t
        self._w.writerow(["" if blank else _fmt(v) for v, blank in zip(row, self._blank)])


def emit_diagnostics(records, fh, unused=()):
    w = DiagnosticsWriter(fh, unused)
    for r in records:
        w.write(r)


def read_diagnostics(fh):
    """Inverse of ``emit_diagnostics``: list of dicts, empty cells as None."""
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected header {header}")
    return [{k: (float(v) if v else None) for k, v in zip(COLUMNS, row)} for row in reader]
