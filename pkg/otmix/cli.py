"""
Command line interface.

Every command is a thin adapter: it reads the documented file formats, calls
the library and writes the result. Data goes to stdout (or --out), diagnostics
to stderr. Exit codes: 0 success, 1 usage error, 2 data/format error, 3
numerical error.
"""
import logging
import time
from functools import wraps

import click
import sidekick as sk

from . import constants as c
from .errors import DataError, NotConverged, NumericalError
from .io import format_alignment, format_frame, format_json, format_matrix, format_mixup
from .io import format_real, read_alignment, read_sequence, write_text
from .types import MixupConfig, SolverConfig, SynthConfig, WindowConfig

bench = sk.import_later(".bench", package=__package__)
synth = sk.import_later(".synth", package=__package__)
InputPath = click.Path(dir_okay=False)
OutputPath = click.Path(dir_okay=False, writable=True)
Seed = click.IntRange(0, c.SEED_MAX)


def emit(text: str, out=None) -> None:
    """
    Write text to the given path, or to stdout if no path is given.
    """
    if out is None:
        click.echo(text, nl=False)
    else:
        write_text(text, out)


def echo_err(*args):
    click.echo(*args, err=True)


#
# Shared options
#
def window_options(fn):
    @click.option(
        "--window",
        "-w",
        type=click.IntRange(min=1),
        default=c.WINDOW_SIZE,
        show_default=True,
        help="Half width of the diagonal window",
    )
    @click.option("--no-window", is_flag=True, help="Align over all columns")
    @wraps(fn)
    def decorated(window, no_window, **kwargs):
        cfg = WindowConfig.disabled() if no_window else WindowConfig(size=window)
        return fn(window=cfg, **kwargs)

    return decorated


def solver_options(fn):
    @click.option("--epsilon", type=float, help="Sinkhorn weight [0.01 * mean cost]")
    @click.option("--beta", type=float, default=c.IPOT_BETA, show_default=True)
    @click.option(
        "--max-iters", type=click.IntRange(min=1), default=c.MAX_ITERS, show_default=True
    )
    @click.option("--tol", type=float, default=c.TOL, show_default=True)
    @click.option("--strict", is_flag=True, help="Fail if a solver does not converge")
    @wraps(fn)
    def decorated(epsilon, beta, max_iters, tol, **kwargs):
        solver = dict(epsilon=epsilon, beta=beta, max_iters=max_iters, tol=tol)
        return fn(solver=solver, **kwargs)

    return decorated


def synth_options(fn):
    @click.option("--n-text", type=click.IntRange(min=1), default=20, show_default=True)
    @click.option("--dim", type=click.IntRange(min=1), default=16, show_default=True)
    @click.option("--dur-max", type=click.IntRange(min=1), default=4, show_default=True)
    @click.option("--noise", type=click.FloatRange(min=0), default=0.5, show_default=True)
    @click.option("--seed", type=Seed, default=0, show_default=True)
    @wraps(fn)
    def decorated(n_text, dim, dur_max, noise, seed, **kwargs):
        cfg = SynthConfig(
            n_text=n_text, dim=dim, dur_max=dur_max, noise_sigma=noise, seed=seed
        )
        return fn(cfg=cfg, **kwargs)

    return decorated


def check_convergence(solution, strict=False):
    """
    Warn about (or, if strict, fail on) a solve that stopped at max_iters.
    """
    if solution.converged:
        return
    msg = (
        f"{solution.method} did not converge: {solution.iters_used} iterations, "
        f"marginal violation {solution.violation:.3g}"
    )
    if strict:
        raise NotConverged(msg, solution)
    echo_err(f"warning: {msg}")


def solve(speech_path, text_path, method, window, solver, strict):
    """
    Read both sequences and solve relaxed or exact OT between them.

    Return (cost, plan, distance, exact solution or None).
    """
    from .cost import cost_matrix
    from .exact import solve_exact
    from .relaxed import solve_relaxed
    from .sequences import masses_from_norms

    speech, text = read_sequence(speech_path), read_sequence(text_path)
    cost = cost_matrix(speech, text)
    if method == "relaxed":
        plan, distance = solve_relaxed(cost, masses_from_norms(speech), window)
        return cost, plan, distance, None

    cfg = SolverConfig(method=method, **solver)
    solution = solve_exact(cost, masses_from_norms(speech), masses_from_norms(text), cfg)
    check_convergence(solution, strict)
    return cost, solution.plan, solution.plan_cost, solution


@click.group()
@click.option("--verbose", "-v", count=True, help="Log solver messages to stderr")
def cli(verbose):
    """
    Cross-modal alignment and mixup with relaxed optimal transport.
    """
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(level=level, format="%(name)s: %(message)s")


#
# align / distance / heatmap
#
@cli.command(name="align")
@click.option("--speech", "-s", type=InputPath, required=True)
@click.option("--text", "-t", type=InputPath, required=True)
@click.option(
    "--method", type=click.Choice(c.ALIGN_METHODS), default="relaxed", show_default=True
)
@click.option("--heatmap", type=OutputPath, help="Also write the cost matrix CSV here")
@click.option("--out", "-o", type=OutputPath, help="Alignment TSV [stdout]")
@window_options
@solver_options
def align_cmd(speech, text, method, window, solver, strict, heatmap, out):
    """
    Align speech tokens to text tokens.
    """
    from .relaxed import extract_alignment

    cost, plan, _, _ = solve(speech, text, method, window, solver, strict)
    if heatmap is not None:
        write_text(format_matrix(cost), heatmap)
    emit(format_alignment(extract_alignment(plan)), out)


@cli.command(name="distance")
@click.option("--speech", "-s", type=InputPath, required=True)
@click.option("--text", "-t", type=InputPath, required=True)
@click.option(
    "--method", type=click.Choice(c.ALIGN_METHODS), default="relaxed", show_default=True
)
@click.option("--plan", type=OutputPath, help="Write the exact plan CSV and JSON summary")
@window_options
@solver_options
def distance_cmd(speech, text, method, window, solver, strict, plan):
    """
    Print the relaxed distance or the plan cost of an exact solver.
    """
    from .exact import write_plan

    _, _, distance, solution = solve(speech, text, method, window, solver, strict)
    if plan is not None:
        if solution is None:
            msg = "only exact methods produce a plan"
            raise click.BadParameter(msg, param_hint="--plan")
        write_plan(solution, plan)
    click.echo(format_real(distance))


@cli.command(name="heatmap")
@click.option("--speech", "-s", type=InputPath, required=True)
@click.option("--text", "-t", type=InputPath, required=True)
@click.option("--out", "-o", type=OutputPath, help="Cost matrix CSV [stdout]")
def heatmap_cmd(speech, text, out):
    """
    Export the speech/text cost matrix as CSV.
    """
    from .cost import cost_matrix

    cost = cost_matrix(read_sequence(speech), read_sequence(text))
    emit(format_matrix(cost), out)


#
# mixup / metrics
#
@cli.command(name="mixup")
@click.option("--speech", "-s", type=InputPath, required=True)
@click.option("--text", "-t", type=InputPath, required=True)
@click.option("--align", "-a", "alignment", type=InputPath, required=True)
@click.option(
    "--prob", "-p", type=click.FloatRange(0, 1), default=c.MIXUP_PROB, show_default=True
)
@click.option("--seed", type=Seed, default=0, show_default=True)
@click.option("--out", "-o", type=OutputPath, help="Mixup TSV [stdout]")
def mixup_cmd(speech, text, alignment, prob, seed, out):
    """
    Replace speech tokens by their aligned text tokens with probability p*.
    """
    from .mixup import mixup

    mixed = mixup(
        read_sequence(speech),
        read_sequence(text),
        read_alignment(alignment),
        MixupConfig(p_star=prob, seed=seed),
    )
    emit(format_mixup(mixed), out)


@cli.command(name="ascore")
@click.option("--pred", type=InputPath, required=True)
@click.option("--ref", type=InputPath, required=True)
def ascore_cmd(pred, ref):
    """
    Print the fraction of positions where two alignments agree.
    """
    from .metrics import a_score

    score = a_score(read_alignment(pred), read_alignment(ref))
    emit(format_json({"a_score": score}))


@cli.command(name="gap")
@click.option("--speech", "-s", type=InputPath, required=True)
@click.option("--text", "-t", type=InputPath, required=True)
@click.option("--align", "-a", "alignment", type=InputPath, required=True)
def gap_cmd(speech, text, alignment):
    """
    Print sentence-level and word-level modality gaps.
    """
    from .metrics import modality_gap

    report = modality_gap(
        read_sequence(speech), read_sequence(text), read_alignment(alignment)
    )
    emit(format_json(report.to_dict()))


#
# Synthetic benchmark
#
@cli.command(name="synth")
@synth_options
@click.option("--out-dir", "-o", type=click.Path(file_okay=False), required=True)
def synth_cmd(cfg, out_dir):
    """
    Write a synthetic pair as text.tsv, speech.tsv and truth.tsv.
    """
    instance = synth.generate(cfg)
    for name, path in synth.write_instance(instance, out_dir).items():
        echo_err(f" - {name}: {path}")


@cli.command(name="bench")
@synth_options
@click.option("--trials", type=click.IntRange(min=1), default=200, show_default=True)
@click.option(
    "--methods",
    default="relaxed,relaxed_window,ipot",
    show_default=True,
    help="Comma separated: relaxed, relaxed_window[(W)], ipot, sinkhorn",
)
@click.option("--window", "-w", type=click.IntRange(min=1), default=c.WINDOW_SIZE)
@solver_options
@click.option("--out", "-o", type=OutputPath, help="Summary CSV [stdout]")
@click.option("--trials-out", type=OutputPath, help="Per-trial CSV")
@click.option("--silent", "-s", is_flag=True, help="Do not print progress messages")
def bench_cmd(**kwargs):
    """
    Compare alignment methods on synthetic pairs.
    """
    run_bench(**kwargs)


def run_bench(
    cfg,
    trials,
    methods,
    window,
    solver,
    strict=False,
    out=None,
    trials_out=None,
    silent=False,
):
    """
    Run the benchmark and write its summary (and optionally per-trial) CSV.
    """
    from .utils import parse_methods

    log = lambda *args: None if silent else echo_err(*args)
    t0 = time.time()
    try:
        methods = parse_methods(methods, window)
    except ValueError as ex:
        raise click.BadParameter(str(ex), param_hint="--methods")

    log(f"Running {trials} trials of {len(methods)} methods...")
    report = bench.run_bench(cfg, trials, methods, window, SolverConfig(**solver))
    failed = int((~report.trials["converged"]).sum())
    if failed:
        msg = f"{failed} exact solves did not converge"
        if strict:
            raise NotConverged(msg)
        echo_err(f"warning: {msg}")

    emit(report.to_csv(), out)
    if trials_out is not None:
        write_text(report.trials_csv(), trials_out)
        log(f" - Trials saved to {trials_out}")
    log(f"Finished in {time.time() - t0:.2f} seconds.")


@cli.command(name="sweep")
@synth_options
@click.option("--over", type=click.Choice(["window", "prob"]), required=True)
@click.option("--values", required=True, help="Comma separated window sizes or p* values")
@click.option("--trials", type=click.IntRange(min=1), default=200, show_default=True)
@click.option(
    "--window",
    "-w",
    type=click.IntRange(min=1),
    default=c.WINDOW_SIZE,
    help="Window used for the alignments of a p* sweep",
)
@click.option("--seed-mixup", type=Seed, default=0, help="Seed of the mixup draws")
@click.option("--out", "-o", type=OutputPath, help="Sweep CSV [stdout]")
def sweep_cmd(cfg, over, values, trials, window, seed_mixup, out):
    """
    A-score against window size, or mixup statistics against p*.
    """
    try:
        if over == "window":
            grid = [int(x) for x in values.split(",")]
            if min(grid) < 1:
                raise ValueError("window sizes must be >= 1")
        else:
            grid = [float(x) for x in values.split(",")]
            if not all(0 <= p <= 1 for p in grid):
                raise ValueError("probabilities must lie in [0, 1]")
    except ValueError as ex:
        raise click.BadParameter(str(ex), param_hint="--values")

    if over == "window":
        df = bench.sweep_window(cfg, trials, grid)
    else:
        df = bench.sweep_mixup(cfg, trials, grid, window, seed_mixup)
    emit(format_frame(df, index=False), out)


#
# Entry point
#
def run(argv=None) -> int:
    """
    Run the command line and return its exit code.
    """
    try:
        cli.main(args=argv, prog_name="otmix", standalone_mode=False)
    except click.ClickException as ex:
        ex.show()
        return 1
    except click.Abort:
        echo_err("Aborted!")
        return 1
    except NumericalError as ex:
        echo_err(f"error: {ex}")
        return 3
    except (DataError, ValueError, OSError) as ex:
        echo_err(f"error: {ex}")
        return 2
    return 0


def main():
    """
    Console script entry point.
    """
    raise SystemExit(run())
