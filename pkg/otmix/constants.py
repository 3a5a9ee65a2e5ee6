WINDOW_SIZE = 10
MIXUP_PROB = 0.2
KL_WEIGHT = 2.0
OT_WEIGHT = 0.1
LABEL_SMOOTHING = 0.1

PROB_FLOOR = 1e-12
MASS_TOL = 1e-9
SEED_MAX = 0xFFFFFFFFFFFFFFFF
SQUARE_SAFE_MAX = 1e150
EPSILON_SCALE = 0.01
IPOT_BETA = 1.0
MAX_ITERS = 2000
TOL = 1e-6

GRAD_DISTANCE_MIN = 1e-12
GRAD_PROB_MIN = 1e-9
FD_STEP = 1e-5

FLOAT_FORMAT = "%.17g"
ORIGIN_CODES = {False: "S", True: "T"}
SOLVER_METHODS = ("sinkhorn", "ipot")
ALIGN_METHODS = ("relaxed", *SOLVER_METHODS)
BENCH_METHODS = ("relaxed", "relaxed_window", "ipot", "sinkhorn")
BENCH_COLUMNS = [
    "method",
    "trials",
    "mean_ascore",
    "std_ascore",
    "mean_distance",
    "mean_wall_ms",
]
TRIAL_COLUMNS = [
    "trial",
    "method",
    "ascore",
    "distance",
    "relaxed_distance",
    "converged",
    "wall_ms",
]
OBJECTIVE_NAMES = (
    "st",
    "st+mt",
    "kl(s,t)",
    "kl(m,s)",
    "kl(m,t)",
    "cmot",
    "cmot+mixup",
    "cmot+ot",
)
