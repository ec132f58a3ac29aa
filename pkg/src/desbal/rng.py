"""Deterministic seed derivation.

Every randomized stage of the pipeline owns an independent generator derived
from a base seed plus a stable textual path (dataset name, tree index, ...),
so results do not depend on execution order and runs are reproducible across
platforms.
"""

import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """Map a base seed plus arbitrary str/int parts to a 64-bit child seed."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def make_rng(*parts) -> np.random.Generator:
    """Independent generator for the stage identified by `parts`."""
    return np.random.default_rng(derive_seed(*parts))
