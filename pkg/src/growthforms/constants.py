"""Constants and default values."""

from pathlib import Path

# Application info
APP_NAME = "growthforms"

# Default paths
DEFAULT_USER_CONFIG_DIR = Path.home() / ".config" / APP_NAME
DEFAULT_OUT_DIR = Path("growthforms-out")

# Finite differences (relative step, scaled by max(1, |coordinate|))
DEFAULT_FD_STEP = 1e-5

# Quadrature
DEFAULT_QUAD_ORDER = 8
DEFAULT_SUBCELLS = 32
DEFAULT_SUPPORT_BOXES = 1728
MAX_BATCH_NODES = 250_000

# Worldlines
DEFAULT_ODE_STEP = 1e-3
DEFAULT_MAX_STEPS = 100_000

# Sampling and test forms
DEFAULT_SAMPLES = 200
DEFAULT_RNG_SEED = 20240601
DEFAULT_BUMPS = 20
DEFAULT_BUMP_RADIUS = 0.1
DEFAULT_BUMP_AMPLITUDE = 1.0

# Tolerances
POINTWISE_TOLERANCE = 1e-9
POINTWISE_FD_TOLERANCE = 1e-5
QUADRATURE_TOLERANCE = 1e-4
CURRENT_TOLERANCE = 1e-4
INTERIOR_TOLERANCE = 1e-6
MEMBERSHIP_TOLERANCE = 1e-6

# Output
FLOAT_FORMAT = ".17g"

# Logging defaults
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_LOG_MAX_SIZE = "10MB"
DEFAULT_LOG_BACKUPS = 3

# Scenario registry names, in listing order
SCENARIO_NAMES = ("example1", "example2", "example3", "example5", "surface-growth", "zero")
DEFAULT_SCENARIO = "example1"
