from stringqfi.io.read_write import (
    csv_header,
    read_cache_file,
    read_config_file,
    read_csv,
    read_record,
    write_cache_file,
    write_csv,
    write_manifest,
    write_record,
)

__all__ = [
    "csv_header",
    "read_cache_file",
    "read_config_file",
    "read_csv",
    "read_record",
    "write_cache_file",
    "write_csv",
    "write_manifest",
    "write_record",
]
