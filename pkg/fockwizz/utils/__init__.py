from .environ import (
    CliConfig,
    load_env_variables,
    resolve_config,
    is_verbose,
)

from .parsing import (
    ParseError,
    parse_complex,
    parse_range,
    parse_dims,
)

from .records import (
    to_serializable,
    write_json,
    read_json,
    write_table,
)

__all__ = [
    'CliConfig',
    'load_env_variables',
    'resolve_config',
    'is_verbose',
    'ParseError',
    'parse_complex',
    'parse_range',
    'parse_dims',
    'to_serializable',
    'write_json',
    'read_json',
    'write_table',
]
