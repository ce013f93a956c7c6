"""Bit-blind (binary Patricia) trees.

Strings are compared as bit strings, most significant bit first, so the
leaf order equals lexicographic byte order.  The tree shape is a level
order bitvector (1 = internal, 0 = leaf); internal node ``x`` has its
children at ``2 * rank(bv, x, 1) + 1`` and ``+ 2``.  Only the bit-LCP at
each internal node is stored, so a descent may skip bits and the final
candidate must be checked against the text.

The same construction backs the block-local trees in ``diskstore``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .blockmodel import BlockDescriptor
from .succinct import BitVector, PackedArray, frame, unframe
from .textcore import SuffixContext

_BITLEN = np.array([int(v).bit_length() for v in range(256)], dtype=np.int64)


def adjacent_bit_lcps(ctx: SuffixContext, rows: np.ndarray) -> np.ndarray:
    """Bit-LCP between the suffix at each row and the one just before it."""
    rows = np.asarray(rows, dtype=np.int64)
    if len(rows) == 0:
        return np.zeros(0, dtype=np.int64)
    lcp = ctx.lcp[rows]
    x = ctx.text[ctx.sa[rows - 1] + lcp]
    y = ctx.text[ctx.sa[rows] + lcp]
    return 8 * lcp + 8 - _BITLEN[np.bitwise_xor(x, y)]


class PatriciaShape(NamedTuple):
    shape: list[int]  # level order, 1 = internal
    lcps: list[int]  # absolute bit-LCP per internal node, level order
    deltas: list[int]  # bit-LCP minus the parent's (the root's parent counts as 0)
    left_sizes: list[int]  # leaves in each internal node's left subtree


def build_patricia(bit_lcps) -> PatriciaShape:
    """Level-order binary Patricia tree over ``len(bit_lcps) + 1`` sorted leaves.

    ``bit_lcps[i]`` is the bit-LCP of leaves ``i`` and ``i + 1``; the tree is
    the Cartesian tree of that sequence (minimum at the root).
    """
    a = [int(v) for v in bit_lcps]
    k = len(a)
    left = [-1] * k
    right = [-1] * k
    stack: list[int] = []
    for i in range(k):
        last = -1
        while stack and a[stack[-1]] > a[i]:
            last = stack.pop()
        left[i] = last
        if stack:
            right[stack[-1]] = i
        stack.append(i)
    if k == 0:
        return PatriciaShape([0], [], [], [])
    shape: list[int] = []
    lcps: list[int] = []
    deltas: list[int] = []
    left_sizes: list[int] = []
    # (internal index or -1 for a leaf, leaf range lo, hi, parent bit-LCP)
    queue = deque([(stack[0], 0, k + 1, 0)])
    while queue:
        node, lo, hi, up = queue.popleft()
        if node < 0:
            shape.append(0)
            continue
        ell = a[node]
        shape.append(1)
        lcps.append(ell)
        deltas.append(ell - up)
        left_sizes.append(node + 1 - lo)
        queue.append((left[node] if node - lo > 0 else -1, lo, node + 1, ell))
        queue.append((right[node] if hi - node > 2 else -1, node + 1, hi, ell))
    return PatriciaShape(shape, lcps, deltas, left_sizes)


def pattern_bit(pattern: bytes, j: int) -> int:
    return (pattern[j >> 3] >> (7 - (j & 7))) & 1


class BlindResult(NamedTuple):
    lo: int  # leaf range [lo, hi) in left-to-right order
    hi: int
    exhausted: bool  # pattern ran out above a leaf; every leaf below is a candidate
    verification_needed: bool = True


@dataclass
class BitBlindTree:
    shape: BitVector
    lcp_data: PackedArray  # parent-relative bit-LCP per internal node
    left_sizes: PackedArray  # leaves in the left subtree per internal node
    sa_data: PackedArray  # tagged text offset or disk address per leaf
    cum_sizes: PackedArray  # prefix sums of block sizes, one more entry than leaves
    keys: PackedArray  # backward block id per leaf

    @property
    def leaves(self) -> int:
        return self.shape.zeros

    def lchild(self, x: int) -> int:
        return 2 * self.shape.rank(x, 1) + 1

    def rchild(self, x: int) -> int:
        return 2 * self.shape.rank(x, 1) + 2

    def size_of(self, lo: int, hi: int) -> int:
        return self.cum_sizes[hi] - self.cum_sizes[lo]

    def search(self, pattern: bytes) -> BlindResult:
        """Blind descent; the caller still owes one text verification."""
        m = len(pattern)
        if m < 1:
            raise ValueError("empty pattern")
        limit = 8 * m
        x, lo, hi, depth = 0, 0, self.leaves, 0
        shape = self.shape
        while shape[x]:
            r = shape.rank(x, 1)
            depth += self.lcp_data[r]
            if depth >= limit:
                return BlindResult(lo, hi, True)
            split = lo + self.left_sizes[r]
            if pattern_bit(pattern, depth):
                x, lo = 2 * r + 2, split
            else:
                x, hi = 2 * r + 1, split
        return BlindResult(lo, hi, False)

    def node_bit_lcp(self, x: int) -> int:
        """Absolute bit-LCP of internal node ``x``, summed along its root path."""
        total = 0
        while True:
            total += self.lcp_data[self.shape.rank(x, 1)]
            if x == 0:
                return total
            x = self.shape.select((x - 1) // 2, 1)

    def components(self) -> dict[str, bytes]:
        return {
            "shape": self.shape.to_bytes(),
            "LCPdata": self.lcp_data.to_bytes(),
            "leftSizes": self.left_sizes.to_bytes(),
            "SAdata": self.sa_data.to_bytes(),
            "sizes": self.cum_sizes.to_bytes(),
            "keys": self.keys.to_bytes(),
        }

    def to_bytes(self) -> bytes:
        return frame(b"".join(self.components().values()))

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["BitBlindTree", int]:
        payload, end = unframe(buf, offset)
        shape, off = BitVector.from_bytes(payload, 0)
        parts = []
        for _ in range(5):
            arr, off = PackedArray.from_bytes(payload, off)
            parts.append(arr)
        return cls(shape, *parts), end

    def __eq__(self, other) -> bool:
        return isinstance(other, BitBlindTree) and self.to_bytes() == other.to_bytes()


class BlindTreeError(ValueError):
    pass


def build_blind(blocks: list[BlockDescriptor], ctx: SuffixContext,
                addresses: list[int]) -> BitBlindTree:
    """Blind tree over the block prefixes; ``addresses`` is the tagged table by bwdId."""
    if any(blocks[i].lb <= blocks[i - 1].lb for i in range(1, len(blocks))):
        raise BlindTreeError("blocks must be in forward suffix-array order")
    rows = np.asarray([blk.lb for blk in blocks[1:]], dtype=np.int64)
    bit_lcps = adjacent_bit_lcps(ctx, rows)
    depths = np.asarray([blk.depth for blk in blocks], dtype=np.int64)
    if len(rows) and (bit_lcps >= 8 * np.minimum(depths[1:], depths[:-1])).any():
        raise BlindTreeError("duplicate or nested block prefixes")
    shape, _, deltas, left_sizes = build_patricia(bit_lcps)
    cum = [0]
    for blk in blocks:
        cum.append(cum[-1] + blk.size)
    return BitBlindTree(
        BitVector(shape),
        PackedArray(deltas),
        PackedArray(left_sizes),
        PackedArray([addresses[blk.bwd_id] for blk in blocks]),
        PackedArray(cum),
        PackedArray([blk.bwd_id for blk in blocks]),
    )


def blind_search(tree: BitBlindTree, pattern: bytes) -> BlindResult:
    return tree.search(pattern)
