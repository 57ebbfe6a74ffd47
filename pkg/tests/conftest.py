"""Shared fixtures and independent test oracles.

The oracles here deliberately avoid the library's own code paths: discrete
information quantities are accumulated over explicit outcome tuples, and
geometry checks go through brute-force membership sampling.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

import numpy as np
import pytest

from icbounds import DiscreteIC, GaussianIC


def brute_entropy(joint: np.ndarray, axes: tuple, names: tuple) -> float:
    acc = defaultdict(float)
    for idx in np.ndindex(*joint.shape):
        p = float(joint[idx])
        if p <= 0:
            continue
        acc[tuple(idx[axes.index(n)] for n in names)] += p
    return -sum(p * math.log2(p) for p in acc.values() if p > 0)


def brute_mi(joint, axes, a, b, c=()) -> float:
    a, b, c = tuple(a), tuple(b), tuple(c)
    h = lambda names: brute_entropy(joint, axes, names)
    return h(a + c) + h(b + c) - h(a + b + c) - (h(c) if c else 0.0)


def h2(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def xor_copy_channel() -> DiscreteIC:
    """y1 = x1 xor x2 (noiseless), y2 = x1: passes the strong-regime check."""
    w = np.zeros((2, 2, 2, 2))
    for x1, x2 in itertools.product(range(2), repeat=2):
        w[x1 ^ x2, x1, x1, x2] = 1.0
    return DiscreteIC(w)


def orthogonal_channel(d12: float = 0.0, d21: float = 0.0) -> DiscreteIC:
    """y1 = x1, y2 = x2, both noiseless."""
    w = np.zeros((2, 2, 2, 2))
    for x1, x2 in itertools.product(range(2), repeat=2):
        w[x1, x2, x1, x2] = 1.0
    return DiscreteIC(w, d12=d12, d21=d21)


def constant_output_channel() -> DiscreteIC:
    w = np.zeros((2, 2, 2, 2))
    w[0, 0, :, :] = 1.0
    return DiscreteIC(w)


def random_channel(rng: np.random.Generator, lo=0.1, hi=3.0) -> GaussianIC:
    s = rng.uniform(lo, hi, size=4)
    p1, p2 = rng.uniform(0.1, 5.0, size=2)
    d12, d21 = rng.uniform(0.0, 1.0, size=2)
    return GaussianIC(*s, p1, p2, d12, d21)


def random_discrete(rng: np.random.Generator, shape=(2, 2, 2, 2)) -> DiscreteIC:
    w = rng.gamma(1.0, size=shape)
    w /= w.sum(axis=(0, 1), keepdims=True)
    return DiscreteIC(w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
