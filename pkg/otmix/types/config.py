from dataclasses import dataclass
from typing import Optional

from .. import constants as c
from ..errors import DataError


@dataclass(frozen=True)
class WindowConfig:
    """
    Diagonal window for relaxed alignment.

    Row i may only align to columns j with ``lambda*i - size <= j <= lambda*i + size``,
    where ``lambda = n_hat / n``.
    """

    enabled: bool = True
    size: int = c.WINDOW_SIZE

    def __post_init__(self):
        if self.enabled and int(self.size) < 1:
            raise DataError(f"window size must be >= 1, got {self.size}")

    @classmethod
    def disabled(cls) -> "WindowConfig":
        return cls(enabled=False)


@dataclass(frozen=True)
class SolverConfig:
    """
    Parameters of the exact OT solvers.

    ``epsilon = None`` resolves to ``0.01 * mean(cost)`` at solve time.
    """

    method: str = "ipot"
    epsilon: Optional[float] = None
    beta: float = c.IPOT_BETA
    max_iters: int = c.MAX_ITERS
    tol: float = c.TOL

    def __post_init__(self):
        if self.method not in c.SOLVER_METHODS:
            raise DataError(
                f"method must be one of {c.SOLVER_METHODS}, got {self.method!r}"
            )
        if self.epsilon is not None and not self.epsilon > 0:
            raise DataError(f"epsilon must be positive, got {self.epsilon}")
        if not self.beta > 0:
            raise DataError(f"beta must be positive, got {self.beta}")
        if self.max_iters < 1:
            raise DataError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol > 0:
            raise DataError(f"tol must be positive, got {self.tol}")

    def resolve_epsilon(self, mean_cost: float) -> float:
        if self.epsilon is not None:
            return self.epsilon
        eps = c.EPSILON_SCALE * mean_cost
        return eps if eps > 0 else 1.0


def check_seed(seed) -> None:
    if not 0 <= int(seed) <= c.SEED_MAX:
        raise DataError(f"seed must be an unsigned 64-bit integer, got {seed}")


@dataclass(frozen=True)
class MixupConfig:
    """
    Probability p_star that a position takes its aligned text token, and the
    seed of the uniform draws.
    """

    p_star: float = c.MIXUP_PROB
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p_star <= 1.0:
            raise DataError(f"p_star must be in [0, 1], got {self.p_star}")
        check_seed(self.seed)


@dataclass(frozen=True)
class ObjectiveWeights:
    lambda_kl: float = c.KL_WEIGHT
    mu_ot: float = 0.0
    use_mixup_ce: bool = False

    def __post_init__(self):
        if self.lambda_kl < 0 or self.mu_ot < 0:
            raise DataError("objective weights must be nonnegative")


@dataclass(frozen=True)
class SynthConfig:
    """
    Synthetic speech/text pair generator parameters.
    """

    n_text: int = 20
    dim: int = 16
    dur_max: int = 4
    noise_sigma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n_text < 1:
            raise DataError(f"n_text must be >= 1, got {self.n_text}")
        if self.dim < 1:
            raise DataError(f"dim must be >= 1, got {self.dim}")
        if self.dur_max < 1:
            raise DataError(f"dur_max must be >= 1, got {self.dur_max}")
        if not self.noise_sigma >= 0:
            raise DataError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        check_seed(self.seed)
