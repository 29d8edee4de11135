"""Central defaults, echoed verbatim into every CLI report."""

TOL = 1e-9                # PSD verdict tolerance
TRIALS = 200              # violation-search trials
PAIRS = 1000              # point pairs per sweep
RANDOM_POINTS = 8         # points per random Pick matrix
BOUNDARY_BIAS = 0.3       # fraction of points pushed near the torus
TRUNC_DEGREE = 16         # per-variable degree of the truncated Hardy space
MAX_TRUNC_DEGREE = 32     # CLI cap on the truncation degree
MAX_POINTS = 64           # Pick matrices beyond this are ill-conditioned noise
TORUS_GRID = 256          # default grid for sup-norm estimation
DEFAULT_SEED = 0
FACTOR = "2"              # diagonal-bound factor: proved ceiling for products
SCHEMA_VERSION = 1
