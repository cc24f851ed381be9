from .campaign import run_campaign
from .friis import fspl, path_gain
from .observation import (
    channel_transfer,
    direct_connection_record,
    pattern_gains_db,
    record_rng,
    sound,
    synthesize_observation,
    system_response,
    system_transfer,
    tx_boresight,
)
from .paths import (
    PathKind,
    PropagationPath,
    has_line_of_sight,
    is_obstructed,
    trace_all,
    trace_paths,
)
from .storage import (
    StorageError,
    read_cir_container,
    read_cir_csv,
    write_cir_container,
    write_cir_csv,
)

__all__ = [
    "run_campaign",
    "fspl",
    "path_gain",
    "channel_transfer",
    "direct_connection_record",
    "pattern_gains_db",
    "record_rng",
    "sound",
    "synthesize_observation",
    "system_response",
    "system_transfer",
    "tx_boresight",
    "PathKind",
    "PropagationPath",
    "has_line_of_sight",
    "is_obstructed",
    "trace_all",
    "trace_paths",
    "StorageError",
    "read_cir_container",
    "read_cir_csv",
    "write_cir_container",
    "write_cir_csv",
]
