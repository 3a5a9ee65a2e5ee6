"""
Synthetic speech/text pairs with known alignments.

Text tokens are random unit vectors. Every text token is repeated a uniform
random number of times in [1, dur_max] to form the speech frames, which then
receive isotropic Gaussian noise. The ground truth alignment maps each frame
to the token it was copied from, so it is monotone and covers every token.
"""
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DataError
from .io import write_alignment, write_sequence
from .relaxed import window_limits
from .types import Alignment, EmbeddingSequence, SynthConfig
from .utils import derive_rng

MAX_REDRAWS = 100
INSTANCE_FILES = {"text": "text.tsv", "speech": "speech.tsv", "truth": "truth.tsv"}


class SynthInstance(NamedTuple):
    text: EmbeddingSequence
    speech: EmbeddingSequence
    truth: Alignment
    durations: np.ndarray


def unit_rows(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """
    Draw n pairwise distinct Gaussian rows normalized to unit length.
    """
    for _ in range(MAX_REDRAWS):
        rows = rng.standard_normal((n, dim))
        norms = np.linalg.norm(rows, axis=1)
        if (norms == 0).any():
            continue
        rows /= norms[:, None]
        if len(np.unique(rows, axis=0)) == n:
            return rows
    raise DataError(f"could not draw {n} distinct unit vectors of dimension {dim}")


def generate(cfg: SynthConfig, rng: np.random.Generator = None) -> SynthInstance:
    """
    Generate an instance; fully determined by ``cfg.seed`` unless an explicit
    generator is given.
    """
    rng = derive_rng(cfg.seed) if rng is None else rng
    text = unit_rows(rng, cfg.n_text, cfg.dim)
    durations = rng.integers(1, cfg.dur_max + 1, size=cfg.n_text)
    truth = np.repeat(np.arange(1, cfg.n_text + 1), durations)
    noise = rng.standard_normal((len(truth), cfg.dim))
    speech = text[truth - 1] + cfg.noise_sigma * noise
    return SynthInstance(
        text=EmbeddingSequence(text),
        speech=EmbeddingSequence(speech),
        truth=Alignment(truth, n_targets=cfg.n_text),
        durations=durations,
    )


def window_coverage(instance: SynthInstance, W: int) -> float:
    """
    Fraction of ground truth targets inside the diagonal window of size W.
    """
    n, n_hat = instance.speech.length, instance.text.length
    lo, hi = window_limits(n, n_hat, W)
    targets = instance.truth.targets
    return float(np.mean((targets >= lo) & (targets <= hi)))


def write_instance(instance: SynthInstance, directory) -> dict:
    """
    Write text, speech and truth files into directory.

    Return a map from part name to path.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {k: directory / v for k, v in INSTANCE_FILES.items()}
    write_sequence(instance.text, paths["text"])
    write_sequence(instance.speech, paths["speech"])
    write_alignment(instance.truth, paths["truth"])
    return paths
