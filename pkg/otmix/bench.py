"""
Alignment benchmark on synthetic pairs.

Trial k uses the instance generated from ``default_rng([cfg.seed, k])``, so
reports do not depend on the order in which trials run.
"""
import logging
import time
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple, Union

import pandas as pd

from . import pandas as _pandas_mod  # noqa: F401 (registers the .otmix accessor)
from .constants import MIXUP_PROB, TRIAL_COLUMNS, WINDOW_SIZE
from .cost import cost_matrix
from .exact import solve_exact
from .io import format_frame, write_text
from .metrics import a_score, modality_gap
from .mixup import mixup
from .relaxed import extract_alignment, relaxed_align, solve_relaxed
from .sequences import masses_from_norms
from .synth import SynthInstance, generate, window_coverage
from .types import MixupConfig, SolverConfig, SynthConfig, WindowConfig
from .utils import derive_rng, method_label, parse_methods

log = logging.getLogger(__name__)
MethodsT = Union[str, Sequence[Tuple[str, int]]]


@dataclass(frozen=True)
class BenchReport:
    """
    Per-trial results and their per-method summary.
    """

    trials: pd.DataFrame
    config: SynthConfig

    def summary(self) -> pd.DataFrame:
        return self.trials.otmix.summarize()

    def to_csv(self, timing=True) -> str:
        """
        Summary table as CSV text. ``timing=False`` drops the wall time column,
        leaving a table that is identical across runs.
        """
        df = self.summary()
        if not timing:
            df = df.drop(columns="mean_wall_ms")
        return format_frame(df, index=False)

    def trials_csv(self, timing=True) -> str:
        df = self.trials if timing else self.trials.drop(columns="wall_ms")
        return format_frame(df, index=False)

    def write(self, path, timing=True) -> None:
        write_text(self.to_csv(timing), path)


def run_trial(
    instance: SynthInstance,
    methods: Sequence[Tuple[str, int]],
    solver: SolverConfig,
    trial: int = 0,
) -> List[tuple]:
    """
    Align one instance with every method and score it against the truth.
    """
    cost = cost_matrix(instance.speech, instance.text)
    speech_masses = masses_from_norms(instance.speech)
    text_masses = masses_from_norms(instance.text)
    _, lower = solve_relaxed(cost, speech_masses, WindowConfig.disabled())

    rows = []
    for name, size in methods:
        t0 = time.perf_counter()
        if name in ("relaxed", "relaxed_window"):
            window = WindowConfig(size=size) if size else WindowConfig.disabled()
            plan, distance = solve_relaxed(cost, speech_masses, window)
            converged = True
        else:
            solution = solve_exact(
                cost, speech_masses, text_masses, replace(solver, method=name)
            )
            plan, distance = solution.plan, solution.plan_cost
            converged = solution.converged
        align = extract_alignment(plan)
        wall_ms = (time.perf_counter() - t0) * 1000

        score = a_score(align, instance.truth)
        label = method_label(name, size)
        rows.append((trial, label, score, distance, lower, converged, wall_ms))
    return rows


def run_bench(
    cfg: SynthConfig,
    trials: int,
    methods: MethodsT = "relaxed,relaxed_window,ipot",
    window: int = WINDOW_SIZE,
    solver: SolverConfig = SolverConfig(),
) -> BenchReport:
    """
    Run ``trials`` synthetic instances through each alignment method.

    ``methods`` is either a list of (name, window) pairs or a comma separated
    string such as "relaxed,relaxed_window(3),ipot,sinkhorn"; a bare
    relaxed_window uses ``window``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if isinstance(methods, str):
        methods = parse_methods(methods, window)

    records = []
    for trial in range(trials):
        instance = generate(cfg, rng=derive_rng(cfg.seed, trial))
        records.extend(run_trial(instance, methods, solver, trial))
        if (trial + 1) % 50 == 0:
            log.info("finished %d/%d trials", trial + 1, trials)
    frame = pd.DataFrame.from_records(records, columns=TRIAL_COLUMNS)
    return BenchReport(frame, cfg)


def _instances(cfg: SynthConfig, trials: int):
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    for trial in range(trials):
        yield trial, generate(cfg, rng=derive_rng(cfg.seed, trial))


def sweep_window(cfg: SynthConfig, trials: int, sizes: Sequence[int]) -> pd.DataFrame:
    """
    A-score of windowed relaxed alignment as a function of the window size.

    ``coverage`` is the mean fraction of ground truth targets inside the window.
    """
    records = []
    for trial, instance in _instances(cfg, trials):
        for size in sizes:
            window = WindowConfig(size=size)
            align, _ = relaxed_align(instance.speech, instance.text, window)
            score = a_score(align, instance.truth)
            records.append((size, trial, score, window_coverage(instance, size)))

    columns = ["window", "trial", "ascore", "coverage"]
    df = pd.DataFrame.from_records(records, columns=columns)
    groups = df.groupby("window", sort=False)
    return pd.DataFrame(
        {
            "trials": groups["trial"].nunique(),
            "mean_ascore": groups["ascore"].mean(),
            "std_ascore": groups["ascore"].std(ddof=0),
            "coverage": groups["coverage"].mean(),
        }
    ).reset_index()


def sweep_mixup(
    cfg: SynthConfig,
    trials: int,
    probs: Sequence[float] = (0.0, MIXUP_PROB, 0.5, 1.0),
    window: int = WINDOW_SIZE,
    seed: int = 0,
) -> pd.DataFrame:
    """
    Text fraction and word-level gap to the text of mixup sequences as a
    function of the mixup probability.

    Mixup draws for trial k come from ``default_rng([seed, k])``; every
    probability reuses the same draws.
    """
    records = []
    window_cfg = WindowConfig(size=window)
    for trial, instance in _instances(cfg, trials):
        align, _ = relaxed_align(instance.speech, instance.text, window_cfg)
        for prob in probs:
            cfg_mix = MixupConfig(prob, seed)
            rng = derive_rng(seed, trial)
            mixed = mixup(instance.speech, instance.text, align, cfg_mix, rng=rng)
            gap = modality_gap(mixed.to_sequence(), instance.text, align)
            records.append((prob, trial, mixed.text_fraction, gap.word_gap))

    df = pd.DataFrame.from_records(
        records, columns=["prob", "trial", "text_fraction", "word_gap"]
    )
    groups = df.groupby("prob", sort=False)
    return pd.DataFrame(
        {
            "trials": groups["trial"].nunique(),
            "mean_text_fraction": groups["text_fraction"].mean(),
            "mean_word_gap": groups["word_gap"].mean(),
        }
    ).reset_index()


def chance_level(cfg: SynthConfig) -> float:
    """
    A-score of a uniformly random alignment.
    """
    return 1.0 / cfg.n_text
