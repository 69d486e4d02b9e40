"""
Configuration loading for fockwizz.

Configuration files are dotenv-style KEY=VALUE text files. This module finds
them, parses them, and merges them with command-line flags into a CliConfig.

Key features:
- Config discovery: --config flag, FOCKWIZZ_CONFIG, or a .fockwizz /
  .fockwizz.local file in the current or parent directories
- Tolerant .env parsing (quotes, inline comments, malformed lines skipped)
- Typed CliConfig with total precedence: flag > config file > default
- FOCKWIZZ_VERBOSE switch for package-wide notes

Example:
    ```python
    from fockwizz.utils.environ import resolve_config

    # flags that were not given on the command line are None
    config = resolve_config({'dim': 256, 'tolerance': None})
    print(config.dim, config.interior_dim)  # 256 128
    ```
"""

import os
from dataclasses import dataclass, field, fields
from typing import Dict, Optional

__all__ = [
    'CliConfig',
    'search_for_config_file',
    'load_env_variables',
    'load_config',
    'resolve_config',
    'is_verbose',
]

CONFIG_ENV_VAR = 'FOCKWIZZ_CONFIG'
VERBOSE_ENV_VAR = 'FOCKWIZZ_VERBOSE'
CONFIG_FILE_OPTS = ['.fockwizz', '.fockwizz.local']
OUTPUT_FORMATS = ('rows', 'structured')
TOLERANCE_PREFIX = 'TOLERANCE.'


def is_verbose():
    """True when FOCKWIZZ_VERBOSE is set to 1, true or yes."""
    return os.getenv(VERBOSE_ENV_VAR, '').lower() in ('1', 'true', 'yes')


# Configuration file discovery ----------------------------------------

def search_for_config_file(config_file='auto', max_parents=3, abspath=False, verbose=False):
    """
    Search for a configuration file in the current and parent directories.

    Args:
        config_file (str, optional): Specific file name, or 'auto' to search for
            .fockwizz and .fockwizz.local. Defaults to 'auto'.
        max_parents (int, optional): Number of directory levels to search,
            starting with the current one. Defaults to 3.
        abspath (bool, optional): Return an absolute path. Defaults to False.
        verbose (bool, optional): Print the path of the file found.

    Returns:
        str or None: Path to the first file found, or None.
    """
    file_opts = CONFIG_FILE_OPTS
    if config_file != 'auto' and config_file is not None:
        file_opts = [config_file]

    config_path = None
    for i in range(max_parents):
        for file_opt in file_opts:
            candidate = os.path.join(os.getcwd(), *['..'] * i, file_opt)
            if os.path.isfile(candidate):
                config_path = candidate
                break
        if config_path is not None:
            break

    if config_path is not None:
        if verbose or is_verbose():
            print(f"Found config file at {config_path}")
        if abspath:
            config_path = os.path.abspath(config_path)
    return config_path


def load_env_variables(env_file, update_environ=False, verbose=False):
    """
    Read KEY=VALUE pairs from a dotenv-style file.

    Args:
        env_file (str): Path to the file.
        update_environ (bool, optional): Also copy the pairs into os.environ.
            Defaults to False.
        verbose (bool, optional): Print a warning for each malformed line.

    Returns:
        dict: The parsed key-value pairs.

    Raises:
        FileNotFoundError: If env_file does not exist.

    Note:
        - Quoted values have their quotes removed
        - Text after '#' is dropped from unquoted values
        - Empty lines and comment lines are skipped
        - Values may contain '='
    """
    if not os.path.isfile(env_file):
        raise FileNotFoundError(f"Config file not found: {env_file}")

    env_vars = {}
    with open(env_file, 'r') as file:
        for line_num, line in enumerate(file, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                if verbose or is_verbose():
                    print(f"Warning: Skipping malformed line {line_num} in {env_file}: {line}")
                continue

            key, _, value = line.partition('=')
            key = key.strip()
            value = value.strip()
            if value and value[0] in ('"', "'") and value[-1] == value[0] and len(value) > 1:
                value = value[1:-1]
            elif '#' in value:
                value = value.split('#')[0].strip()
            env_vars[key] = value

    if update_environ:
        os.environ.update(env_vars)
    return env_vars


# Typed configuration ----------------------------------------

@dataclass
class CliConfig:
    """
    Settings shared by the fockwizz commands.

    Attributes:
        dim (int): Truncation dimension N.
        interior_dim (int or None): Interior dimension K; None means dim // 2.
        tail_tol (float): Tail-mass tolerance.
        safe_radius (float): Admissible |z| for m >= 3 constructions.
        tolerance (float): Default per-check residual tolerance.
        tolerances (dict): Per-check tolerance overrides keyed by check id.
        threshold (float): Convergence threshold on consecutive infidelity.
        output_dir (str): Directory for relative output paths.
        format (str): 'rows' (CSV tables) or 'structured' (JSON documents).
    """
    dim: int = 128
    interior_dim: Optional[int] = None
    tail_tol: float = 1e-10
    safe_radius: float = 0.25
    tolerance: float = 1e-8
    tolerances: Dict[str, float] = field(default_factory=dict)
    threshold: float = 1e-8
    output_dir: str = '.'
    format: str = 'rows'

    def __post_init__(self):
        if self.interior_dim is None:
            self.interior_dim = self.dim // 2
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {OUTPUT_FORMATS}, got '{self.format}'")
        if self.interior_dim > self.dim:
            raise ValueError(f"interior_dim ({self.interior_dim}) cannot exceed dim ({self.dim})")

    def output_path(self, path):
        if path is None or os.path.isabs(path):
            return path
        return os.path.join(self.output_dir, path)


_KEY_TYPES = {
    'DIM': ('dim', int),
    'INTERIOR_DIM': ('interior_dim', int),
    'TAIL_TOL': ('tail_tol', float),
    'SAFE_RADIUS': ('safe_radius', float),
    'TOLERANCE': ('tolerance', float),
    'THRESHOLD': ('threshold', float),
    'OUTPUT_DIR': ('output_dir', str),
    'FORMAT': ('format', str),
}


def load_config(path, verbose=False):
    """
    Parse a config file into CliConfig field values.

    Args:
        path (str): Config file path.
        verbose (bool, optional): Warn about unknown keys.

    Returns:
        dict: Field name to typed value; per-check tolerances under 'tolerances'.

    Raises:
        ValueError: If a value cannot be converted to its field type.
    """
    raw = load_env_variables(path, update_environ=False, verbose=verbose)
    values = {}
    tolerances = {}
    for key, text in raw.items():
        upper = key.upper()
        if upper.startswith(TOLERANCE_PREFIX):
            check_id = key[len(TOLERANCE_PREFIX):]
            tolerances[check_id] = _convert(key, text, float)
        elif upper in _KEY_TYPES:
            name, kind = _KEY_TYPES[upper]
            values[name] = _convert(key, text, kind)
        elif verbose or is_verbose():
            print(f"Warning: Ignoring unknown config key '{key}' in {path}")
    if tolerances:
        values['tolerances'] = tolerances
    return values


def _convert(key, text, kind):
    try:
        return kind(text)
    except ValueError:
        raise ValueError(f"Config key '{key}' has invalid value '{text}' "
                         f"(expected {kind.__name__})")


def resolve_config(flags=None, config_path=None, verbose=False):
    """
    Merge defaults, a config file and command-line flags into a CliConfig.

    Args:
        flags (dict or argparse.Namespace, optional): Flag values; entries that
            are None were not given and do not override anything.
        config_path (str, optional): Explicit config file. If None, the
            FOCKWIZZ_CONFIG variable is consulted, then the auto-search.
        verbose (bool, optional): Print where the configuration came from.

    Returns:
        CliConfig: The merged configuration.

    Raises:
        FileNotFoundError: If an explicitly named config file does not exist.
        ValueError: If a config value is malformed.

    Examples:
        ```python
        # .fockwizz contains DIM=64
        resolve_config({'dim': None}).dim   # 64
        resolve_config({'dim': 256}).dim    # 256
        ```
    """
    if config_path is None:
        config_path = os.getenv(CONFIG_ENV_VAR) or search_for_config_file(verbose=verbose)

    merged = {}
    if config_path is not None:
        merged.update(load_config(config_path, verbose=verbose))
        if verbose or is_verbose():
            print(f"Loaded configuration from {config_path}")

    if flags is not None:
        flag_values = flags if isinstance(flags, dict) else vars(flags)
        names = {f.name for f in fields(CliConfig)}
        for name, value in flag_values.items():
            if name not in names or value is None:
                continue
            if name == 'tolerances':
                merged.setdefault('tolerances', {}).update(value)
            else:
                merged[name] = value
        # a new dim without a new K keeps K = dim // 2
        if flag_values.get('dim') is not None and flag_values.get('interior_dim') is None:
            merged.pop('interior_dim', None)
    return CliConfig(**merged)
