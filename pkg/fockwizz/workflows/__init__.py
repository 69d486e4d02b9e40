from . import batch

from .batch import run_sweep

__all__ = ['batch', 'run_sweep']
