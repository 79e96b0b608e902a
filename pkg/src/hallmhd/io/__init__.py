from .config import RunConfig, parse_config
from .diagcsv import COLUMNS, DiagnosticsWriter, emit_diagnostics, read_diagnostics
from .snapshot import Snapshot, load_snapshot, save_snapshot

__all__ = ["RunConfig", "parse_config", "COLUMNS", "DiagnosticsWriter", "emit_diagnostics",
           "read_diagnostics", "Snapshot", "load_snapshot", "save_snapshot"]
