"""
Pytest configuration and fixtures for fockwizz tests
"""

import os
import shutil
import tempfile
from pathlib import Path

import pytest

from fockwizz.core import ladder_ops, make_space
from fockwizz.operators import clear_operator_cache


def pytest_configure(config):
    """Register markers and keep user configuration out of the test run."""
    config.addinivalue_line(
        "markers", "slow: mark test as slow (N = 256 truncations, full default suite)"
    )
    os.environ.pop('FOCKWIZZ_CONFIG', None)
    os.environ.pop('FOCKWIZZ_VERBOSE', None)


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test outputs."""
    tmpdir = tempfile.mkdtemp()
    yield Path(tmpdir)
    shutil.rmtree(tmpdir, ignore_errors=True)


@pytest.fixture
def space32():
    return make_space(32)


@pytest.fixture
def space64():
    return make_space(64)


@pytest.fixture
def space128():
    return make_space(128)


@pytest.fixture
def space256():
    return make_space(256)


@pytest.fixture
def ladder(space64):
    """(a, a_dag, number) on the 64-level space."""
    return ladder_ops(space64)


@pytest.fixture
def fresh_operator_cache():
    """Empty the D_m(z) cache before and after a test that perturbs constructors."""
    clear_operator_cache()
    yield
    clear_operator_cache()


@pytest.fixture
def mock_config_file(temp_dir):
    """Create a config file with typed values and a per-check tolerance."""
    content = """# fockwizz test configuration
DIM=48
TAIL_TOL=1e-9
SAFE_RADIUS="0.3"
THRESHOLD=1e-7 # inline comment
FORMAT=structured
TOLERANCE.eq29a-composition=1e-6
"""
    path = temp_dir / ".fockwizz"
    path.write_text(content)
    return str(path)
