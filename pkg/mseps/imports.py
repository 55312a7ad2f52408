"""Common imports for the mseps package.

Centralizes typing aliases and third-party modules so every module imports
them from one place.
"""

from __future__ import annotations

# Standard library imports
from pathlib import Path
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

# Third-party imports
import mpmath
import numpy as np
import pandas as pd

__all__ = [
    # Standard library
    "Any",
    "Callable",
    "Dict",
    "Iterable",
    "Iterator",
    "List",
    "Mapping",
    "Optional",
    "Path",
    "Sequence",
    "Tuple",
    "Union",
    # Third-party
    "mpmath",
    "np",
    "pd",
]
