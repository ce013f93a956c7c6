"""Existence, count, locate and context queries with disk-access accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .blindtree import BitBlindTree
from .cbwt import CondensedIndex, DiskAddress, SearchState, TextOffset, untag
from .diskstore import AccessStats, BlockStore, DiskBlock, TextStore, in_block_search
from .textcore import normalize

QueryStats = AccessStats
MODES = ("existence", "count", "locate", "context")


@dataclass
class QueryOutcome:
    mode: str
    pattern: bytes
    value: Any
    stats: QueryStats = field(default_factory=QueryStats)

    def record(self) -> str:
        """One line: pattern, mode, value, fetches, text accesses."""
        v = self.value
        if self.mode == "existence":
            shown = "yes" if v else "no"
        elif self.mode == "count":
            shown = str(v)
        elif self.mode == "locate":
            shown = " ".join(map(str, v)) if v else "-"
        else:
            shown = " ".join(escape_bytes(s) for s in v) if v else "-"
        return (f"{escape_bytes(self.pattern)}\t{self.mode}\t{shown}"
                f"\tfetches={self.stats.block_fetches}\ttext={self.stats.text_accesses}")


def escape_bytes(data: bytes) -> str:
    """Printable ASCII kept verbatim; everything else (and space, backslash) as \\xNN."""
    out = []
    for c in data:
        if 0x21 <= c <= 0x7E and c != 0x5C:
            out.append(chr(c))
        else:
            out.append(f"\\x{c:02x}")
    return "".join(out)


def unescape_pattern(text: str | bytes) -> bytes:
    """Inverse of the \\xNN escaping accepted on the command line and in pattern files."""
    raw = text if isinstance(text, bytes) else text.encode("utf-8", "surrogateescape")
    out = bytearray()
    i = 0
    while i < len(raw):
        if raw[i] == 0x5C and raw[i + 1:i + 2] == b"x" and i + 4 <= len(raw):
            try:
                out.append(int(raw[i + 2:i + 4], 16))
                i += 4
                continue
            except ValueError:
                pass
        if raw[i] == 0x5C and raw[i + 1:i + 2] == b"\\":
            out.append(0x5C)
            i += 2
            continue
        out.append(raw[i])
        i += 1
    return bytes(out)


class _QueryBlocks:
    """Per-query view of the block store: a host fetched once is counted once."""

    def __init__(self, store: BlockStore, stats: AccessStats):
        self.store = store
        self.stats = stats
        self.seen: dict[int, DiskBlock] = {}

    def get(self, address: int) -> DiskBlock:
        blk = self.seen.get(address)
        if blk is None:
            blk = self.store.fetch(address, self.stats)
            self.seen[address] = blk
        return blk


class Engine:
    """Query engine over one in-memory index kind plus the block store and text."""

    def __init__(self, text: bytes, blocks: BlockStore, condensed: CondensedIndex | None = None,
                 blind: BitBlindTree | None = None, kind: str | None = None):
        if kind is None:
            kind = "condensed" if condensed is not None else "blindtree"
        if kind == "condensed" and condensed is None:
            raise ValueError("index has no condensed-BWT section")
        if kind == "blindtree" and blind is None:
            raise ValueError("index has no blind-tree section")
        self.text = TextStore(text)
        self.blocks = blocks
        self.condensed = condensed
        self.blind = blind
        self.kind = kind

    @classmethod
    def from_loaded(cls, loaded, kind: str | None = None) -> "Engine":
        mem = loaded.memory
        return cls(loaded.text, loaded.blocks, mem.condensed, mem.blind, kind)

    @property
    def n(self) -> int:
        return self.text.n

    # -- public modes --------------------------------------------------------

    def count(self, pattern: bytes) -> QueryOutcome:
        p = self._prepare(pattern)
        stats = QueryStats()
        value, _ = self._run(p, stats, want_offsets=False)
        return QueryOutcome("count", p, value, stats)

    def exists(self, pattern: bytes) -> QueryOutcome:
        p = self._prepare(pattern)
        stats = QueryStats()
        value, _ = self._run(p, stats, want_offsets=False)
        return QueryOutcome("existence", p, value > 0, stats)

    def locate(self, pattern: bytes) -> QueryOutcome:
        p = self._prepare(pattern)
        stats = QueryStats()
        _, offsets = self._run(p, stats, want_offsets=True)
        return QueryOutcome("locate", p, sorted(offsets), stats)

    def context(self, pattern: bytes, window: int) -> QueryOutcome:
        if window < 0:
            raise ValueError("window must be non-negative")
        p = self._prepare(pattern)
        stats = QueryStats()
        _, offsets = self._run(p, stats, want_offsets=True)
        m = len(p)
        snippets = [self.text.read(max(0, q - window), min(self.n, q + m + window), stats)
                    for q in sorted(offsets)]
        return QueryOutcome("context", p, snippets, stats)

    def query(self, mode: str, pattern: bytes, window: int = 0) -> QueryOutcome:
        if mode == "count":
            return self.count(pattern)
        if mode == "existence":
            return self.exists(pattern)
        if mode == "locate":
            return self.locate(pattern)
        if mode == "context":
            return self.context(pattern, window)
        raise ValueError(f"unknown mode {mode!r}")

    # -- internals -----------------------------------------------------------

    @staticmethod
    def _prepare(pattern: bytes) -> bytes:
        if not pattern:
            raise ValueError("empty pattern")
        return normalize(pattern)

    def _run(self, p: bytes, stats: AccessStats, want_offsets: bool) -> tuple[int, list[int]]:
        if self.kind == "condensed":
            return self._run_condensed(p, stats, want_offsets)
        return self._run_blind(p, stats, want_offsets)

    def _verify_offset(self, q: int, p: bytes, start: int, stats: AccessStats) -> bool:
        return self.text.read(q + start, q + len(p), stats) == p[start:]

    def _run_condensed(self, p: bytes, stats: AccessStats, want_offsets: bool
                       ) -> tuple[int, list[int]]:
        idx = self.condensed
        m = len(p)
        state = idx.get_interval(p)
        if state is None:
            return 0, []
        if state.d == m:
            if not want_offsets:
                return state.width, []
            return state.width, self._enumerate(idx.blocks_below(state), stats)
        bwd = idx.get_bwd_id(state.lb, state.d)
        where = idx.resolve_address(bwd)
        if isinstance(where, TextOffset):
            if self._verify_offset(where.offset, p, state.d, stats):
                return 1, [where.offset]
            return 0, []
        blk = self.blocks.fetch(where.address, stats)
        dx, dd = blk.entry(bwd)
        return in_block_search(blk, p, state.d, dx, dd, state.width, self.text, stats,
                               want_offsets=want_offsets)

    def _enumerate(self, found: list[tuple[int, SearchState]], stats: AccessStats) -> list[int]:
        """Text offsets of whole blocks, each host fetched at most once."""
        blocks = _QueryBlocks(self.blocks, stats)
        out: list[int] = []
        for bwd, state in found:
            where = self.condensed.resolve_address(bwd)
            if isinstance(where, TextOffset):
                out.append(where.offset)
                continue
            blk = blocks.get(where.address)
            dx, dd = blk.entry(bwd)
            out.extend(blk.offsets[i] + dd for i in range(dx, dx + state.width))
        return out

    def _run_blind(self, p: bytes, stats: AccessStats, want_offsets: bool
                   ) -> tuple[int, list[int]]:
        tree = self.blind
        res = tree.search(p)
        blocks = _QueryBlocks(self.blocks, stats)
        if not res.exhausted:
            j = res.lo
            where = untag(tree.sa_data[j])
            if isinstance(where, TextOffset):
                if self._verify_offset(where.offset, p, 0, stats):
                    return 1, [where.offset]
                return 0, []
            blk = blocks.get(where.address)
            dx, dd = blk.entry(tree.keys[j])
            return in_block_search(blk, p, 0, dx, dd, tree.size_of(j, j + 1), self.text, stats,
                                   verified=0, want_offsets=want_offsets)
        # pattern exhausted above the leaves: one check covers every leaf below
        first = self._leaf_offsets(res.lo, blocks, first_only=True)[0]
        if not self._verify_offset(first, p, 0, stats):
            return 0, []
        total = tree.size_of(res.lo, res.hi)
        if not want_offsets:
            return total, []
        out: list[int] = []
        for j in range(res.lo, res.hi):
            out.extend(self._leaf_offsets(j, blocks))
        return total, out

    def _leaf_offsets(self, j: int, blocks: _QueryBlocks, first_only: bool = False) -> list[int]:
        tree = self.blind
        where = untag(tree.sa_data[j])
        if isinstance(where, TextOffset):
            return [where.offset]
        assert isinstance(where, DiskAddress)
        blk = blocks.get(where.address)
        dx, dd = blk.entry(tree.keys[j])
        width = 1 if first_only else tree.size_of(j, j + 1)
        return [blk.offsets[i] + dd for i in range(dx, dx + width)]
