"""Shared constants for the tensor-extremal toolkit."""

# Environment variable prefix for every setting in config.py
ENV_PREFIX = "TENSOR_EXTREMAL_"

# Dense (numpy) form is only materialised up to this many cells
DENSE_CELL_LIMIT = 2**16

# Exhaustive full-division sets are stored per block up to this side length
EXACT_PIGEONHOLE_MAX_SIDE = 6

# Latin enumeration reach: largest order enumerated without an override, per t
LATIN_REACH = {2: 6, 3: 4, 4: 3, 5: 2}

# Exit codes of the command-line interface
EXIT_OK = 0
EXIT_PROPERTY_VIOLATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE_CAP = 3

# Output formats accepted by --format
OUTPUT_FORMATS = ("json", "csv")

# The full shadow sweep enumerates every 3- and 4-dimensional tensor up to this many cells
SHADOW_SWEEP_MAX_CELLS = 12
