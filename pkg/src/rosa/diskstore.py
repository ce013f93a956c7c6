"""On-disk suffix blocks, the block file, and in-block search.

Each irreducible block of size two or more is written once, together with
a header of ``(bwdId, dx, dd)`` triples naming every block it hosts.  The
body is a block-local binary Patricia tree over the host's suffixes
(shape bits, parent-relative bit-LCP deltas, left-subtree leaf counts)
followed by the host's text offsets in minimal-width binary.
"""

from __future__ import annotations

import struct
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .blindtree import adjacent_bit_lcps, build_patricia, pattern_bit
from .blockmodel import BlockClass, BlockDescriptor
from .succinct import BitVector, DeltaStream, PackedArray, frame, unframe
from .textcore import SuffixContext

BLOCK_MAGIC = b"ROSB"
BLOCK_VERSION = 1
_HEADER = struct.Struct("<III")


class FormatError(ValueError):
    pass


@dataclass
class AccessStats:
    block_fetches: int = 0
    text_accesses: int = 0

    @property
    def total(self) -> int:
        return self.block_fetches + self.text_accesses

    @property
    def mem_only(self) -> bool:
        return self.total == 0


@dataclass
class DiskBlock:
    header: list[tuple[int, int, int]]  # (bwdId, dx, dd); the host has dx = dd = 0
    tree_bits: BitVector
    lcp_deltas: DeltaStream
    cum_sizes: DeltaStream  # leaves in each internal node's left subtree
    offsets: PackedArray
    _nav: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.offsets)

    def entry(self, bwd_id: int) -> tuple[int, int]:
        for key, dx, dd in self.header:
            if key == bwd_id:
                return dx, dd
        raise FormatError(f"block has no header entry for bwdId {bwd_id}")

    def nav(self) -> tuple[list[int], list[int], list[int], list[int]]:
        """Decoded (shape, internal ranks, absolute bit-LCPs, left sizes) for descent."""
        if self._nav is None:
            shape = self.tree_bits.to_numpy().astype(np.int64)
            ranks = np.concatenate(([0], np.cumsum(shape)[:-1])).tolist()
            deltas = self.lcp_deltas.tolist()
            lcps = [0] * len(deltas)
            # parents precede children in level order, so one pass suffices
            for x, bit in enumerate(shape.tolist()):
                if not bit:
                    continue
                r = ranks[x]
                up = lcps[(x - 1) // 2] if x else 0
                lcps[r] = up + deltas[r]
            self._nav = (shape.tolist(), ranks, lcps, self.cum_sizes.tolist())
        return self._nav

    def to_bytes(self) -> bytes:
        if self.offsets.width > 64:
            raise FormatError("offset width above 64 bits")
        parts = [struct.pack("<I", len(self.header))]
        parts.extend(_HEADER.pack(*entry) for entry in self.header)
        parts.append(self.tree_bits.to_bytes())
        parts.append(self.lcp_deltas.to_bytes())
        parts.append(self.cum_sizes.to_bytes())
        parts.append(struct.pack("<B", self.offsets.width))
        parts.append(frame(self.offsets.raw_bytes()))
        return b"".join(parts)

    def section_sizes(self) -> dict[str, int]:
        return {
            "header": 4 + _HEADER.size * len(self.header),
            "treeBits": len(self.tree_bits.to_bytes()),
            "lcpDeltas": len(self.lcp_deltas.to_bytes()),
            "cumSizes": len(self.cum_sizes.to_bytes()),
            "offsets": 1 + len(frame(self.offsets.raw_bytes())),
        }

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["DiskBlock", int]:
        view = memoryview(buf)
        (count,) = struct.unpack_from("<I", view, offset)
        off = offset + 4
        header = []
        for _ in range(count):
            header.append(_HEADER.unpack_from(view, off))
            off += _HEADER.size
        tree_bits, off = BitVector.from_bytes(view, off)
        lcp_deltas, off = DeltaStream.from_bytes(view, off)
        cum_sizes, off = DeltaStream.from_bytes(view, off)
        (width,) = struct.unpack_from("<B", view, off)
        raw, off = unframe(view, off + 1)
        offsets = PackedArray.from_raw(raw, width, tree_bits.zeros)
        return cls(header, tree_bits, lcp_deltas, cum_sizes, offsets), off

    def __eq__(self, other) -> bool:
        return isinstance(other, DiskBlock) and self.to_bytes() == other.to_bytes()


def serialize_block(host: BlockDescriptor, guests: list[BlockDescriptor],
                    ctx: SuffixContext) -> DiskBlock:
    if host.kind is not BlockClass.IRREDUCIBLE or host.size < 2:
        raise FormatError(f"block {host.fwd_id} is not an irreducible multi-suffix block")
    for g in guests:
        if g.kind is not BlockClass.REDUCIBLE or g.host != host.fwd_id:
            raise FormatError(f"block {g.fwd_id} is not a reducible guest of {host.fwd_id}")
    header = sorted([(host.bwd_id, 0, 0)] + [(g.bwd_id, g.delta_x, g.delta_d) for g in guests])
    rows = np.arange(host.lb + 1, host.rb + 1, dtype=np.int64)
    shape, _, deltas, left_sizes = build_patricia(adjacent_bit_lcps(ctx, rows))
    offsets = PackedArray(ctx.sa[host.lb:host.rb + 1].tolist())
    return DiskBlock(header, BitVector(shape), DeltaStream(deltas), DeltaStream(left_sizes), offsets)


class TextStore:
    """The indexed text, read through counted accesses."""

    def __init__(self, data: bytes):
        self.data = data

    @property
    def n(self) -> int:
        return len(self.data)

    def read(self, start: int, stop: int, stats: AccessStats | None = None) -> bytes:
        if stats is not None:
            stats.text_accesses += 1
        return self.data[max(start, 0):min(stop, len(self.data))]


def in_block_search(block: DiskBlock, pattern: bytes, d: int, dx: int, dd: int, width: int,
                    text: TextStore, stats: AccessStats | None = None,
                    verified: int | None = None, want_offsets: bool = True
                    ) -> tuple[int, list[int]]:
    """Finish matching ``pattern`` inside the guest sub-interval ``[dx, dx + width)``.

    ``d`` symbols are known to match every candidate; ``verified`` (default
    ``d``) is how many leading symbols need no re-check against the text.
    Returns the match count and, if asked, the matching text offsets.
    """
    m = len(pattern)
    if verified is None:
        verified = d
    shape, ranks, lcps, left = block.nav()
    lo, hi, x = 0, block.size, 0
    # phase 1: the guest sub-interval is a subtree of the block-local tree
    while (lo, hi) != (dx, dx + width):
        if not shape[x]:
            raise FormatError("guest interval is not a subtree of the host block")
        r = ranks[x]
        split = lo + left[r]
        if dx < split:
            x, hi = 2 * r + 1, split
        else:
            x, lo = 2 * r + 2, split
    # phase 2: blind descent on the remaining pattern bits
    if d < m:
        base = 8 * dd
        limit = 8 * m
        while shape[x]:
            r = ranks[x]
            j = lcps[r] - base
            if j >= limit:
                break
            split = lo + left[r]
            if pattern_bit(pattern, j):
                x, lo = 2 * r + 2, split
            else:
                x, hi = 2 * r + 1, split
    if verified < m:
        p = block.offsets[lo] + dd
        if text.read(p + verified, p + m, stats) != pattern[verified:]:
            return 0, []
    if not want_offsets:
        return hi - lo, []
    return hi - lo, [block.offsets[i] + dd for i in range(lo, hi)]


def build_disk_blocks(blocks: list[BlockDescriptor], ctx: SuffixContext
                      ) -> list[tuple[BlockDescriptor, DiskBlock]]:
    """One DiskBlock per multi-suffix irreducible host, in forward id order."""
    guests: dict[int, list[BlockDescriptor]] = {}
    for blk in blocks:
        if blk.kind is BlockClass.REDUCIBLE:
            guests.setdefault(blk.host, []).append(blk)
    return [(blk, serialize_block(blk, guests.get(blk.fwd_id, []), ctx))
            for blk in blocks if blk.kind is BlockClass.IRREDUCIBLE]


def encode_block_file(disk_blocks: list[DiskBlock]) -> tuple[bytes, list[int]]:
    """Block file bytes and each block's absolute byte address."""
    count = len(disk_blocks)
    head = BLOCK_MAGIC + struct.pack("<IQ", BLOCK_VERSION, count)
    records = [frame(blk.to_bytes()) for blk in disk_blocks]
    addresses = []
    pos = len(head) + 8 * count
    for rec in records:
        addresses.append(pos)
        pos += len(rec)
    table = np.asarray(addresses, dtype="<u8").tobytes()
    return b"".join([head, table, *records]), addresses


def write_block_file(path: Path, disk_blocks: list[DiskBlock]) -> list[int]:
    data, addresses = encode_block_file(disk_blocks)
    Path(path).write_bytes(data)
    return addresses


def block_file_breakdown(data: bytes) -> dict[str, int]:
    """Byte counts per block-file section; they sum to the file size."""
    count = _check_block_head(data)
    out = {"preamble": 16 + 8 * count, "framing": 0, "header": 0, "treeBits": 0,
           "lcpDeltas": 0, "cumSizes": 0, "offsets": 0}
    off = out["preamble"]
    for _ in range(count):
        payload, off = unframe(data, off)
        blk, _ = DiskBlock.from_bytes(payload)
        out["framing"] += 8
        for k, v in blk.section_sizes().items():
            out[k] += v
    return out


def _check_block_head(data) -> int:
    if len(data) < 16 or bytes(data[:4]) != BLOCK_MAGIC:
        raise FormatError("not a block file")
    version, count = struct.unpack_from("<IQ", data, 4)
    if version != BLOCK_VERSION:
        raise FormatError(f"unsupported block file version {version}")
    if len(data) < 16 + 8 * count:
        raise FormatError("truncated block address table")
    return count


class BlockStore:
    """Read-only block file contents; every fetch is counted as one disk access.

    Decoded blocks are memoized purely to save CPU; the access count is
    unaffected.
    """

    def __init__(self, data: bytes, memo: int = 1 << 16):
        self._data = data
        self.count = _check_block_head(self._data)
        self.addresses = np.frombuffer(self._data, dtype="<u8", count=self.count,
                                       offset=16).tolist()
        self._memo: OrderedDict[int, DiskBlock] = OrderedDict()
        self._memo_size = memo

    @classmethod
    def open(cls, path: Path, memo: int = 1 << 16) -> "BlockStore":
        return cls(Path(path).read_bytes(), memo)

    @property
    def data(self) -> bytes:
        return self._data

    def fetch(self, address: int, stats: AccessStats | None = None) -> DiskBlock:
        if stats is not None:
            stats.block_fetches += 1
        blk = self._memo.get(address)
        if blk is not None:
            self._memo.move_to_end(address)
            return blk
        try:
            payload, _ = unframe(self._data, address)
            blk, _ = DiskBlock.from_bytes(payload)
        except (ValueError, struct.error) as exc:
            raise FormatError(f"corrupt block at address {address}: {exc}") from exc
        self._memo[address] = blk
        if len(self._memo) > self._memo_size:
            self._memo.popitem(last=False)
        return blk

    def __iter__(self):
        for addr in self.addresses:
            payload, _ = unframe(self._data, addr)
            yield addr, DiskBlock.from_bytes(payload)[0]
