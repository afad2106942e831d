# app/utils/seeding.py
"""
Seed derivation for every random stream in the package.

All generators are numpy PCG64 (`np.random.default_rng`). Derived seeds come from
`stable_seed`, a blake2b digest of the `|`-joined parts truncated to 63 bits, so a
seed never depends on Python's salted `hash()` and adding sweep cells never changes
the seeds of existing ones.
"""

import hashlib

import numpy as np


def stable_seed(*parts) -> int:
    key = "|".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "little") & 0x7FFF_FFFF_FFFF_FFFF


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))
