"""Seeded random numbers.

All randomness flows through numpy's counter-based Philox bit generator.
Gaussians are produced by an explicit Box-Muller transform of its uniform
stream, so the sample path depends only on the seed and on this module.
"""
from __future__ import annotations

import numpy as np

GENERATOR_NAME = "numpy.random.Philox (4x64, 10 rounds) + Box-Muller"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for ``seed``; ``stream > 0`` jumps ahead to an independent substream."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    bits = np.random.Philox(seed)
    if stream:
        bits = bits.jumped(stream)
    return np.random.Generator(bits)


def sample_seed(base_seed: int, index: int) -> int:
    """Seed for sample ``index`` of a batch: ``base_seed XOR index``."""
    return base_seed ^ index


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    pairs = (size + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    # rng.random() is in [0, 1); shift to (0, 1] so the log is finite
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:size]


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians, real and imaginary parts each N(0, 1)."""
    n = int(np.prod(shape))
    z = standard_normal(rng, 2 * n)
    return (z[:n] + 1j * z[n:]).reshape(shape)


def unit_vector(rng: np.random.Generator, dim: int = 3) -> np.ndarray:
    while True:
        v = standard_normal(rng, dim)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm
