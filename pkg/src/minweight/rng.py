"""Counter-based keyed randomness.

Every random quantity in this package is a pure function of a word tuple
(stream tag, master seed, trial index, key words). The words are absorbed
one at a time into a 64-bit state through the splitmix64 finalizer, and the
final state is mapped to a uniform variate in [0, 1) using the top 53 bits.
There is no sequential generator state, so edge weights can be evaluated in
any order, in parallel, and one at a time in O(1) memory.

The mixer identifier below is embedded in every report; frozen golden values
in the test suite are only valid for this exact construction.
"""

from __future__ import annotations

import numpy as np

MIXER_ID = "splitmix64-absorb/v1"

_MASK = (1 << 64) - 1
_INIT = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# Stream tags (domain separation between unrelated uses of the mixer).
STREAM_TREE_WEIGHT = 1
STREAM_TREE_SCALE = 2
STREAM_LATTICE_TIME = 3
STREAM_LATTICE_PARAM = 4
STREAM_PREFIX = 5

# 1 / 2**53, the spacing of the uniform grid produced by unit().
_U53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit word (scalar reference version)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def hash_words(*words: int) -> int:
    """Absorb a word tuple into a 64-bit digest.

    Negative words are reduced modulo 2**64 (two's complement), which is how
    signed lattice coordinates enter the mixer.
    """
    h = _INIT
    for w in words:
        h = mix64(h ^ (w & _MASK))
    return h


def unit(h: int) -> float:
    """Map a 64-bit digest to the uniform grid {0, 1, ..., 2**53 - 1} / 2**53.

    The result lies in [0, 1): zero is attainable (probability 2**-53), one
    is not.
    """
    return (h >> 11) * _U53


def uniform(*words: int) -> float:
    """Uniform [0, 1) variate attached to a word tuple."""
    return unit(hash_words(*words))


# -- vectorized mirror --------------------------------------------------------
#
# The array versions must agree bit for bit with the scalar ones above; the
# test suite asserts this on random word tuples.

_V_M1 = np.uint64(_M1)
_V_M2 = np.uint64(_M2)
_V_30 = np.uint64(30)
_V_27 = np.uint64(27)
_V_31 = np.uint64(31)
_V_11 = np.uint64(11)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer over a uint64 array (wrapping multiplication)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _V_30)) * _V_M1
        z = (z ^ (z >> _V_27)) * _V_M2
    return z ^ (z >> _V_31)


def hash_words_vec(*words) -> np.ndarray:
    """Vectorized hash_words; scalar ints and uint64 arrays broadcast together."""
    h = np.uint64(_INIT)
    for w in words:
        if isinstance(w, np.ndarray):
            w = w.astype(np.uint64, copy=False)
        else:
            w = np.uint64(w & _MASK)
        h = mix64_vec(np.bitwise_xor(h, w))
    return h


def unit_vec(h: np.ndarray) -> np.ndarray:
    """Vectorized unit()."""
    return (h >> _V_11).astype(np.float64) * _U53


def encode_signed(c) -> np.ndarray:
    """Two's-complement encoding of signed integers (arrays) as uint64 words."""
    return np.asarray(c, dtype=np.int64).astype(np.uint64)
