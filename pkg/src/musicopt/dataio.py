"""Dataset loading, filtering, partitioning and synthetic generators.

Sparse text data uses the LIBSVM line format ``label idx:val idx:val ...``
with 1-based feature indices; indices are stored 0-based internally.  All
random generation goes through seeded PCG64 streams so every produced problem
instance is a pure function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .objectives import LogisticProblem, QuadraticProblem

__all__ = [
    "Sample",
    "Dataset",
    "LibsvmFormatError",
    "parse_libsvm",
    "serialize_libsvm",
    "binary_filter",
    "partition",
    "densify",
    "synth_uniform",
    "synth_logistic",
    "quadratic_from_shards",
    "logistic_from_shards",
]


class Sample(NamedTuple):
    label: float
    features: dict[int, float]


@dataclass(frozen=True)
class Dataset:
    """Parsed samples plus the feature dimension (max 1-based index seen)."""

    samples: tuple[Sample, ...]
    dim: int


class LibsvmFormatError(ValueError):
    """Malformed LIBSVM text; the message carries the 1-based line number."""


def parse_libsvm(source: str | Iterable[str]) -> Dataset:
    """Parse LIBSVM-formatted text into a :class:`Dataset`.

    Accepts a string or any iterable of lines.  Blank lines are skipped.
    A repeated feature index within one line is an error, as is any
    non-numeric label or value or an index below 1.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    samples: list[Sample] = []
    dim = 0
    for lineno, raw in enumerate(lines, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        try:
            label = float(tokens[0])
        except ValueError:
            raise LibsvmFormatError(f"line {lineno}: bad label {tokens[0]!r}") from None
        features: dict[int, float] = {}
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise LibsvmFormatError(f"line {lineno}: bad token {tok!r}")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise LibsvmFormatError(f"line {lineno}: bad token {tok!r}") from None
            if idx < 1:
                raise LibsvmFormatError(f"line {lineno}: feature index {idx} below 1")
            if idx - 1 in features:
                raise LibsvmFormatError(f"line {lineno}: duplicate feature index {idx}")
            features[idx - 1] = val
            dim = max(dim, idx)
        samples.append(Sample(label, features))
    return Dataset(tuple(samples), dim)


def serialize_libsvm(d: Dataset) -> str:
    """Render a dataset back to LIBSVM text (17 significant digits)."""
    lines = []
    for label, features in d.samples:
        parts = [f"{label:.17g}"]
        parts += [f"{idx + 1}:{features[idx]:.17g}" for idx in sorted(features)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def binary_filter(d: Dataset, label_pos: float, label_neg: float) -> Dataset:
    """Keep the two requested classes, relabeled to +1 and -1."""
    kept = []
    for label, features in d.samples:
        if label == label_pos:
            kept.append(Sample(1.0, features))
        elif label == label_neg:
            kept.append(Sample(-1.0, features))
    if not kept:
        raise ValueError(
            f"no samples with label {label_pos} or {label_neg} (dataset has {len(d.samples)})"
        )
    return Dataset(tuple(kept), d.dim)


def partition(d: Dataset, n_agents: int, m_per_agent: int, seed: int) -> list[list[Sample]]:
    """Shuffle deterministically, then deal contiguous blocks of ``m_per_agent``.

    Leftover samples are discarded.  Raises ``ValueError`` when the dataset is
    too small for the requested split.
    """
    need = n_agents * m_per_agent
    if need > len(d.samples):
        raise ValueError(
            f"need {need} samples for {n_agents} agents x {m_per_agent}, have {len(d.samples)}"
        )
    order = np.random.default_rng(seed).permutation(len(d.samples))
    shuffled = [d.samples[k] for k in order]
    return [
        shuffled[i * m_per_agent : (i + 1) * m_per_agent] for i in range(n_agents)
    ]


def densify(samples: Iterable[Sample], dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Expand sparse samples to a dense ``(m, dim)`` feature array plus labels."""
    samples = list(samples)
    feats = np.zeros((len(samples), dim))
    labels = np.zeros(len(samples))
    for k, (label, sparse) in enumerate(samples):
        for idx, val in sparse.items():
            if idx >= dim:
                raise ValueError(f"feature index {idx + 1} exceeds dimension {dim}")
            feats[k, idx] = val
        labels[k] = label
    return feats, labels


def synth_uniform(
    p: int, m: int, n_agents: int, seed: int, mu: float = 0.0
) -> QuadraticProblem:
    """Least-squares instance with all data entries i.i.d. uniform on [0, 1).

    ``A`` is drawn first as an ``(n_agents, p, m)`` block, then ``b`` as
    ``(n_agents, m)``, both from ``default_rng(seed)``.
    """
    rng = np.random.default_rng(seed)
    a = rng.random((n_agents, p, m))
    b = rng.random((n_agents, m))
    return QuadraticProblem(a, b, mu)


def synth_logistic(
    p: int, m: int, n_agents: int, seed: int, mu: float
) -> LogisticProblem:
    """Logistic instance: uniform [0, 1) features, fair random +-1 labels."""
    rng = np.random.default_rng(seed)
    feats = rng.random((n_agents, m, p))
    labels = rng.integers(0, 2, size=(n_agents, m)) * 2.0 - 1.0
    return LogisticProblem(feats, labels, mu)


def quadratic_from_shards(
    shards: list[list[Sample]], dim: int, mu: float
) -> QuadraticProblem:
    """Least squares from partitioned samples: features as columns, labels as targets."""
    a = []
    b = []
    for shard in shards:
        feats, labels = densify(shard, dim)
        a.append(feats.T)
        b.append(labels)
    return QuadraticProblem(np.array(a), np.array(b), mu)


def logistic_from_shards(
    shards: list[list[Sample]], dim: int, mu: float
) -> LogisticProblem:
    """Logistic regression from partitioned +-1 labeled samples."""
    feats = []
    labels = []
    for shard in shards:
        f, y = densify(shard, dim)
        feats.append(f)
        labels.append(y)
    return LogisticProblem(np.array(feats), np.array(labels), mu)
