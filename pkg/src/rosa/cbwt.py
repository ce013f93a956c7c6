"""Condensed-BWT in-memory index over the reversed text.

Only the reversed-BWT symbols needed to backward-search the block
prefixes are kept (``cL``).  ``bwdbf`` marks interval boundaries in the
reversed suffix array (first-symbol column), ``bwdbl`` marks where the
corresponding symbols sit in the full reversed BWT, and ``bwdbm`` plus
``mindepth`` turn a terminal ``(lb, d)`` search state into a block id.
"""

from __future__ import annotations

import math
import struct
from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .blockmodel import BlockClass, BlockDescriptor, reversed_block_starts
from .succinct import BitVector, PackedArray, SparseBitVector, WaveletTree, frame, unframe
from .textcore import SuffixContext


class SearchState(NamedTuple):
    d: int
    lb: int
    rb: int

    @property
    def width(self) -> int:
        return self.rb - self.lb + 1


class TextOffset(NamedTuple):
    offset: int


class DiskAddress(NamedTuple):
    address: int


def tag_text_offset(offset: int) -> int:
    return (offset << 1) | 1


def tag_disk_address(address: int) -> int:
    return address << 1


def untag(value: int) -> TextOffset | DiskAddress:
    if value & 1:
        return TextOffset(value >> 1)
    return DiskAddress(value >> 1)


@dataclass
class Counters:
    iterations: int = 0
    bv_rank: int = 0
    bv_select: int = 0
    wt_rank: int = 0


_BITVECTOR_KINDS = {"plain": 0, "sparse": 1}


def _make_bv(kind: str, length: int, positions) -> BitVector | SparseBitVector:
    if kind == "sparse":
        return SparseBitVector(length, positions)
    if kind == "plain":
        return BitVector.from_positions(length, positions)
    raise ValueError(f"unknown bitvector kind {kind!r}")


@dataclass
class CondensedIndex:
    b: int
    n: int
    sigma: int
    bwdbf: BitVector | SparseBitVector
    bwdbl: BitVector | SparseBitVector
    bwdbm: BitVector
    mindepth: PackedArray
    cL: WaveletTree
    alphabet: list[int]
    counts: list[int]  # cC, aligned with alphabet
    addresses: PackedArray  # tagged, indexed by backward block id
    bitvector_kind: str = "sparse"
    _cC: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._cC = dict(zip(self.alphabet, self.counts))

    @property
    def num_blocks(self) -> int:
        return self.bwdbm.zeros

    @property
    def z(self) -> int:
        return self.bwdbf.ones

    def cC(self, c: int) -> int:
        return self._cC[c]

    # -- search ------------------------------------------------------------

    def extend(self, lb: int, rb: int, c: int, counters: Counters | None = None
               ) -> tuple[int, int] | None:
        """One backward-search step in the condensed domain; None when empty."""
        lb1 = self.bwdbl.rank(lb, 1)
        rb1 = self.bwdbl.rank(rb + 1, 1)
        lb2 = self.cL.rank(lb1, c)
        rb2 = self.cL.rank(rb1, c)
        if counters is not None:
            counters.bv_rank += 2
            counters.wt_rank += 2
        if lb2 == rb2:
            return None
        base = self._cC[c]
        if counters is not None:
            counters.bv_select += 2
        return self.bwdbf.select(base + lb2, 1), self.bwdbf.select(base + rb2, 1) - 1

    def get_interval(self, pattern: bytes, trace: list | None = None,
                     counters: Counters | None = None) -> SearchState | None:
        """Consume pattern symbols while the interval is wider than ``b``.

        Returns the terminal state, or None when the pattern cannot occur.
        """
        m = len(pattern)
        if m < 1:
            raise ValueError("empty pattern")
        d, lb, rb = 0, 0, self.n
        while d < m and rb - lb + 1 > self.b:
            if counters is not None:
                counters.iterations += 1
            step = self.extend(lb, rb, pattern[d], counters)
            if step is None:
                return None
            lb, rb = step
            d += 1
            if trace is not None:
                trace.append((lb, rb))
        return SearchState(d, lb, rb)

    def get_bwd_id(self, lb: int, d: int) -> int:
        runnr = self.bwdbf.rank(lb, 1)
        runpos = self.bwdbm.select(runnr - 1, 1) + 1 if runnr else 0
        x = self.mindepth[self.bwdbm.rank10(runpos)]
        if d < x:
            raise ValueError(f"depth {d} below entry-point minimum {x}")
        return runpos - runnr + (d - x)

    def resolve_address(self, bwd_id: int) -> TextOffset | DiskAddress:
        return untag(self.addresses[bwd_id])

    def children(self, state: SearchState) -> list[SearchState]:
        """All one-symbol extensions of a state wider than ``b``."""
        lb1 = self.bwdbl.rank(state.lb, 1)
        rb1 = self.bwdbl.rank(state.rb + 1, 1)
        out = []
        for c, cnt in self.cL.range_symbols(lb1, rb1):
            lb2 = self.cL.rank(lb1, c)
            base = self._cC[c]
            lb = self.bwdbf.select(base + lb2, 1)
            rb = self.bwdbf.select(base + lb2 + cnt, 1) - 1
            out.append(SearchState(state.d + 1, lb, rb))
        return out

    def blocks_below(self, state: SearchState) -> list[tuple[int, SearchState]]:
        """Block ids (with their states) of every block extending a frequent state."""
        if state.width <= self.b:
            return [(self.get_bwd_id(state.lb, state.d), state)]
        found = []
        stack = [state]
        while stack:
            st = stack.pop()
            for child in self.children(st):
                if child.width <= self.b:
                    found.append((self.get_bwd_id(child.lb, child.d), child))
                else:
                    stack.append(child)
        return found

    # -- serialization -----------------------------------------------------

    def components(self) -> dict[str, bytes]:
        cc = PackedArray(self.counts)
        alph = PackedArray(self.alphabet, width=8)
        return {
            "header": struct.pack("<QQQB", self.b, self.n, self.sigma,
                                  _BITVECTOR_KINDS[self.bitvector_kind]),
            "bwdbf": self.bwdbf.to_bytes(),
            "bwdbl": self.bwdbl.to_bytes(),
            "bwdbm": self.bwdbm.to_bytes(),
            "mindepth": self.mindepth.to_bytes(),
            "cL": self.cL.to_bytes(),
            "cC": alph.to_bytes() + cc.to_bytes(),
            "pointers": self.addresses.to_bytes(),
        }

    def to_bytes(self) -> bytes:
        return frame(b"".join(self.components().values()))

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["CondensedIndex", int]:
        payload, end = unframe(buf, offset)
        b, n, sigma, kind_code = struct.unpack_from("<QQQB", payload, 0)
        kind = {v: k for k, v in _BITVECTOR_KINDS.items()}[kind_code]
        bv_cls = SparseBitVector if kind == "sparse" else BitVector
        off = 25
        bwdbf, off = bv_cls.from_bytes(payload, off)
        bwdbl, off = bv_cls.from_bytes(payload, off)
        bwdbm, off = BitVector.from_bytes(payload, off)
        mindepth, off = PackedArray.from_bytes(payload, off)
        cl, off = WaveletTree.from_bytes(payload, off)
        alph, off = PackedArray.from_bytes(payload, off)
        cc, off = PackedArray.from_bytes(payload, off)
        addresses, off = PackedArray.from_bytes(payload, off)
        idx = cls(b, n, sigma, bwdbf, bwdbl, bwdbm, mindepth, cl, alph.tolist(),
                  cc.tolist(), addresses, kind)
        return idx, end

    def serialized_bits(self) -> int:
        return 8 * len(self.to_bytes())

    def space_constant(self) -> float:
        """Measured kappa in bits <= kappa * (B + sigma) * log2(n)."""
        denom = (self.num_blocks + self.sigma) * math.log2(max(self.n, 2))
        return self.serialized_bits() / denom


def default_addresses(blocks: list[BlockDescriptor], ctx: SuffixContext) -> list[int]:
    """Tagged address table with text offsets for singletons and 0 for disk blocks."""
    table = [0] * len(blocks)
    for blk in blocks:
        if blk.kind is BlockClass.SINGLETON:
            table[blk.bwd_id] = tag_text_offset(int(ctx.sa[blk.lb]))
        else:
            table[blk.bwd_id] = tag_disk_address(0)
    return table


def build_condensed(blocks: list[BlockDescriptor], ctx: SuffixContext, rctx: SuffixContext,
                    b: int, *, nodes: list[tuple[int, int]] | None = None,
                    addresses: list[int] | None = None,
                    bitvector_kind: str = "sparse") -> CondensedIndex:
    if nodes is None:
        _, nodes = reversed_block_starts(blocks, ctx, rctx)
    size = rctx.size  # n + 1 reversed suffixes
    n = size - 1
    marks = {0, size}
    for lb, rb in nodes:
        marks.add(lb)
        marks.add(rb + 1)
    marks = sorted(marks)
    first_col = np.asarray([p for p in marks if p < size], dtype=np.int64)
    # each marked suffix's first symbol sits in the BWT row of the suffix one position later
    sources = np.sort(rctx.isa[(rctx.sa[first_col] + 1) % size])
    cl_seq = rctx.bwt[sources]

    bwdbf = _make_bv(bitvector_kind, size + 1, marks)
    bwdbl = _make_bv(bitvector_kind, size, sources.tolist())
    cl = WaveletTree(cl_seq)
    alphabet = sorted(set(cl_seq.tolist()))
    counts = [bwdbf.rank(int(rctx.C[c]), 1) for c in alphabet]

    per_entry: dict[int, list[int]] = defaultdict(list)
    for blk in blocks:
        per_entry[blk.rev_lb].append(blk.depth)
    bm_bits: list[int] = []
    mindepth: list[int] = []
    for p in marks:
        depths = per_entry.get(p, ())
        bm_bits.extend([0] * len(depths))
        bm_bits.append(1)
        if depths:
            mindepth.append(min(depths))
    if sum(len(v) for v in per_entry.values()) != len(blocks):
        raise RuntimeError("block entry point not marked in bwdbf")

    if addresses is None:
        addresses = default_addresses(blocks, ctx)
    sigma = len(set(ctx.text[:-1].tolist()))
    return CondensedIndex(b, n, sigma, bwdbf, bwdbl, BitVector(bm_bits), PackedArray(mindepth),
                          cl, alphabet, counts, PackedArray(addresses), bitvector_kind)
