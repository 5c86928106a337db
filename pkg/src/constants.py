REPORT_SCHEMA = "powvar-report/1"

PATH_CSV_COLUMNS = ["t", "x", "c"]
JUMP_CSV_COLUMNS = ["t", "dx", "c_left", "c_right"]
RATE_PLOT_COLUMNS = ["log2_inv_delta_n", "log2_rmse", "log2_rmse_fit"]
CSV_FLOAT_FORMAT = "%.17g"

# splitmix64 finalizer and Weyl increment
MASK64 = 0xFFFF_FFFF_FFFF_FFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB

DEFAULT_LADDER_EXPONENTS = list(range(6, 15))
DEFAULT_REFINE = 8
DEFAULT_SEED = 20240601

# expected jumps per fine step above which jumps are no longer isolated
JUMPS_PER_STEP_LIMIT = 0.1

HERMITE_MIN_NODES = 32
HERMITE_MAX_NODES = 512
RHO_RTOL = 1e-9
HERMITE_CHUNK = 8192
# absolute floor for the adaptive-quadrature error of a Gaussian expectation
QUAD_ATOL = 1e-12

KS_SERIES_TERMS = 100
KS_MIN_SAMPLES = 8
CLT_MIN_REPLICATES = 100
COVARIANCE_MAX_ABS_Z = 4.0
# relative gap allowed between a joint-covariance diagonal entry and the one-theorem variance
DIAGONAL_RTOL = 1e-9

BOUNDED_C2_CATALOG = ("cos_bump", "rational_square")
VOL_KINDS = ("none", "constant", "ou_vol", "jump_vol")
DRIFT_KINDS = ("constant", "time_function")
JUMP_KINDS = ("none", "compound_poisson", "stable_like")
SIZE_LAWS = ("fixed", "gaussian", "double_exponential")
CUTOFF_POLICIES = ("discard", "gaussian")
COMMANDS = ("simulate", "lln", "clt", "cov", "rate-plot", "list-theorems")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_REFUSED = 2
EXIT_USAGE = 64
EXIT_BAD_REPORT = 65
