"""States, labels, and permutations on the block one-hot product space.

An (n, m) layout describes m blocks carrying n symbols each; the encoded
space has dimension D = n**m.  A basis label is a tuple of m symbols, and
labels map to flat indices in mixed radix with block 0 as the most
significant digit.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

Label = tuple[int, ...]

DEFAULT_MAX_DIM = 1 << 25
NORM_TOL = 1e-10


class DimensionCapError(ValueError):
    """Requested encoded dimension exceeds the amplitude cap."""


def max_dimension() -> int:
    """Amplitude cap for encoded states; CEQAOA_MAX_DIM overrides the default."""
    raw = os.environ.get("CEQAOA_MAX_DIM", "")
    return int(raw) if raw else DEFAULT_MAX_DIM


@dataclass(frozen=True)
class BlockLayout:
    """Geometry of the encoded space: m blocks of n symbols each."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need n >= 2 symbols per block, got n={self.n}")
        if self.m < 1:
            raise ValueError(f"need m >= 1 blocks, got m={self.m}")
        cap = max_dimension()
        if self.n**self.m > cap:
            raise DimensionCapError(
                f"encoded dimension {self.n}**{self.m} = {self.n ** self.m} "
                f"exceeds the cap {cap} (override with CEQAOA_MAX_DIM)"
            )

    @property
    def D(self) -> int:
        return self.n**self.m

    def validate_label(self, label) -> Label:
        label = tuple(int(j) for j in label)
        if len(label) != self.m:
            raise ValueError(f"label {label} has {len(label)} symbols, expected {self.m}")
        for j in label:
            if not 0 <= j < self.n:
                raise ValueError(f"symbol {j} outside [0, {self.n}) in label {label}")
        return label

    def symbol_column(self, b: int, dtype=np.int64) -> np.ndarray:
        """Symbols of block b for every flat index, as a length-D array."""
        if not 0 <= b < self.m:
            raise ValueError(f"block {b} outside [0, {self.m})")
        idx = np.arange(self.D, dtype=np.int64)
        return ((idx // self.n ** (self.m - 1 - b)) % self.n).astype(dtype)

    def all_labels(self) -> np.ndarray:
        """(D, m) array whose row i equals index_to_label(self, i)."""
        dtype = np.int8 if self.n < 128 else np.int32
        out = np.empty((self.D, self.m), dtype=dtype)
        for b in range(self.m):
            out[:, b] = self.symbol_column(b, dtype=dtype)
        return out


def label_to_index(layout: BlockLayout, label) -> int:
    """Flat index of a label; block 0 is the most significant digit."""
    label = layout.validate_label(label)
    idx = 0
    for j in label:
        idx = idx * layout.n + j
    return idx


def index_to_label(layout: BlockLayout, index: int) -> Label:
    """Inverse of label_to_index."""
    index = int(index)
    if not 0 <= index < layout.D:
        raise ValueError(f"index {index} outside [0, {layout.D})")
    symbols = [0] * layout.m
    for b in range(layout.m - 1, -1, -1):
        index, symbols[b] = divmod(index, layout.n)
    return tuple(symbols)


@dataclass(frozen=True, eq=False)
class EncodedState:
    """Complex amplitudes over the D basis labels of a layout.

    The squared norm must equal 1 within NORM_TOL.  Construction re-checks
    the norm instead of renormalizing, so a non-unitary pipeline fails
    loudly instead of being masked.
    """

    layout: BlockLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (self.layout.D,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.layout.D},)"
            )
        norm_sq = float(np.real(np.vdot(amps, amps)))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(
                f"squared norm {norm_sq!r} deviates from 1 by more than {NORM_TOL}"
            )

    def tensor(self) -> np.ndarray:
        """Amplitudes viewed as an m-way tensor with one axis per block."""
        return self.amplitudes.reshape((self.layout.n,) * self.layout.m)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def uniform_initial_state(layout: BlockLayout) -> EncodedState:
    """Product of per-block uniform states: every amplitude is 1/sqrt(D)."""
    amp = 1.0 / math.sqrt(layout.D)
    return EncodedState(layout, np.full(layout.D, amp, dtype=np.complex128))


@dataclass(frozen=True)
class BlockPermutation:
    """One symbol permutation per block, applied independently."""

    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        perms = tuple(tuple(int(v) for v in p) for p in self.perms)
        object.__setattr__(self, "perms", perms)
        for b, p in enumerate(perms):
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"block {b} entry {p} is not a permutation")

    @classmethod
    def identity(cls, layout: BlockLayout) -> "BlockPermutation":
        return cls(tuple(tuple(range(layout.n)) for _ in range(layout.m)))

    @classmethod
    def random(cls, layout: BlockLayout, rng: np.random.Generator) -> "BlockPermutation":
        return cls(
            tuple(tuple(int(v) for v in rng.permutation(layout.n)) for _ in range(layout.m))
        )

    def apply_to_label(self, label) -> Label:
        return tuple(p[j] for p, j in zip(self.perms, label))

    def inverse(self) -> "BlockPermutation":
        out = []
        for p in self.perms:
            inv = [0] * len(p)
            for j, v in enumerate(p):
                inv[v] = j
            out.append(tuple(inv))
        return BlockPermutation(tuple(out))

    def then(self, other: "BlockPermutation") -> "BlockPermutation":
        """Composition acting as self first, then other."""
        return BlockPermutation(
            tuple(tuple(q[v] for v in p) for p, q in zip(self.perms, other.perms))
        )


def apply_block_permutation(state: EncodedState, perm: BlockPermutation) -> EncodedState:
    """Relabel amplitudes blockwise.

    The output amplitude at label (j_0, ..., j_{m-1}) equals the input
    amplitude at (perm_0^-1(j_0), ..., perm_{m-1}^-1(j_{m-1})); a pure
    relabeling, so the norm is preserved exactly.
    """
    layout = state.layout
    if len(perm.perms) != layout.m or any(len(p) != layout.n for p in perm.perms):
        raise ValueError(
            f"permutation blocks {[len(p) for p in perm.perms]} do not match layout "
            f"(n={layout.n}, m={layout.m})"
        )
    arr = state.tensor()
    for b, p in enumerate(perm.inverse().perms):
        arr = np.take(arr, p, axis=b)
    return EncodedState(layout, arr.reshape(-1))


def overlap_probability(state: EncodedState, label) -> float:
    """|amplitude|**2 at one basis label."""
    idx = label_to_index(state.layout, label)
    return float(abs(state.amplitudes[idx]) ** 2)
