"""Constants for the mseps package.

Centralized defaults and thresholds so no module carries magic numbers.
"""

from __future__ import annotations

# Step parameter and table size
DEFAULT_M = 1
DEFAULT_MAX_K = 8

# Float mode
DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 53  # IEEE double

# Determinants up to this size are also expanded by cofactors in self-tests
COFACTOR_MAX_SIZE = 4

# Randomized sweeps
DEFAULT_SEED = 42
DEFAULT_SWEEP_SEQUENCES = 10
DEFAULT_SWEEP_LENGTH = 10
SWEEP_LENGTH_RANGE = (8, 14)
SWEEP_M_VALUES = (1, 2, 3)
SWEEP_MAX_SHIFT = 2
RANDOM_NUMERATOR_BOUND = 9
RANDOM_DENOMINATOR_BOUND = 9

# Builtin series names understood by the CLI
BUILTIN_LN2 = "ln2"
BUILTIN_GEOMETRIC = "geometric"
BUILTIN_POWER = "power"

# Sequence files
CSV_COMMENT_PREFIX = "#"
CSV_FIELD_SEPARATOR = "\t"  # single column; comment lines may contain commas
JSON_LABEL_KEY = "label"
JSON_TERMS_KEY = "terms"

# Table JSON schema
JSON_M_KEY = "m"
JSON_CELLS_KEY = "cells"
STATUS_VALID = "valid"
STATUS_BREAKDOWN = "breakdown"
STATUS_UNSET = "unset"
STATUS_INFINITY = "infinity"

# Text rendering of non-finite cells in `table` output
TABLE_MISSING = "--"
TABLE_BREAKDOWN = "BRK"
TABLE_INFINITY = "inf"

# Lotka-Volterra boundary flavours
BOUNDARY_PRINTED = "printed"
BOUNDARY_SUBSTITUTED = "substituted"

# CLI exit codes
EXIT_OK = 0
EXIT_BREAKDOWN = 1
EXIT_CONFIG = 2
