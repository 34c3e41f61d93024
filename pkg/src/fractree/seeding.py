"""Deterministic, path-keyed randomness.

Branch flips are keyed by (seed, root-to-node path) through a
splitmix64-style finalizer, so a node's flip never depends on traversal
order or worker count.  Paths are addressed by their heap key: the root
is 1 and the key of a child appends one bit (left=0, right=1), so key =
(1 << len(path)) | path_bits.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
#: 1 / 2**53, maps the top 53 hash bits onto [0, 1).
_INV_2_53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def path_key(path: str) -> int:
    """Heap key of a node given its root-to-node path ('0'=left, '1'=right).

    The empty path addresses the root (key 1).
    """
    key = 1
    for bit in path:
        if bit == "0":
            key = 2 * key
        elif bit == "1":
            key = 2 * key + 1
        else:
            raise ValueError(f"path must contain only '0'/'1', got {path!r}")
    return key


def hash_unit(seed: int, key: int) -> float:
    """Deterministic uniform in [0, 1) for a (seed, node key) pair."""
    z = mix64((seed + key * _GAMMA) & _MASK64)
    return (z >> 11) * _INV_2_53


def flip_decision(seed: int, path: str, prob: float = 0.5) -> bool:
    """Whether the branching triangle flips at the node addressed by path.

    Pure in (seed, path): stable across runs, traversal orders and
    backends.
    """
    return hash_unit(seed, path_key(path)) < prob


def flip_bits(seed: int, keys: np.ndarray, prob: float = 0.5) -> np.ndarray:
    """Vectorized flip_decision over an array of uint64 heap keys."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + keys.astype(np.uint64) * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
    u = (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
    return u < prob


def derive_seed(base_seed: int, *parts: int) -> int:
    """Chain-hash a base seed with integer indices (sweep cells, reps)."""
    z = base_seed & _MASK64
    for p in parts:
        z = mix64((z + (int(p) + 1) * _GAMMA) & _MASK64)
    return z
