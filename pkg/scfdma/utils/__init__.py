"""Init utils."""
from .csv_utils import format_value, write_csv_item, write_table
from .errors import ConfigError, ScfdmaError
from .rng_utils import default_workers, ordered_map, substream

__all__ = [
    "ConfigError", "ScfdmaError", "default_workers", "format_value",
    "ordered_map", "substream", "write_csv_item", "write_table",
]
