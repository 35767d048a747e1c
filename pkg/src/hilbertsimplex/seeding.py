"""Deterministic seed derivation.

Every source of randomness in the package is a ``numpy.random.Generator``
(PCG64) built from an explicit nonnegative integer seed.  Sub-seeds are
derived with ``numpy.random.SeedSequence`` so that independent components
(dataset replicates, search trials, benchmark cells) get decorrelated yet
fully reproducible streams.  String parts (e.g. manifold names) enter the
derivation through CRC-32.
"""

from __future__ import annotations

import zlib

import numpy as np

from .validation import check_seed


def _as_entropy(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return check_seed(part, "seed part")


def derive_seed(*parts) -> int:
    """Hash integer/string parts into a single 32-bit seed."""
    if not parts:
        raise ValueError("derive_seed needs at least one part")
    entropy = [_as_entropy(p) for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def make_rng(*parts) -> np.random.Generator:
    """Build a PCG64 generator from derived seed parts."""
    return np.random.default_rng(derive_seed(*parts))
