"""Building an index from raw bytes and persisting it to a directory.

An index directory holds ``memory.rosa`` (the in-memory part: condensed
BWT and/or blind tree), ``blocks.rosb`` (disk blocks), ``manifest.txt``
(one line per block) and ``text.bin`` (the normalized text).
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

from .blindtree import BitBlindTree, build_blind
from .blockmodel import BlockClass, BlockDescriptor, build_blocks, write_manifest
from .cbwt import CondensedIndex, build_condensed, tag_disk_address, tag_text_offset
from .diskstore import (BlockStore, DiskBlock, FormatError, build_disk_blocks,
                        encode_block_file)
from .textcore import SuffixContext, build_suffix_context, ingest

MEMORY_MAGIC = b"ROSA"
MEMORY_VERSION = 1
_PREAMBLE = struct.Struct("<4sIQQI32s")
INDEX_KINDS = ("condensed", "blindtree", "both")

MEMORY_FILE = "memory.rosa"
BLOCK_FILE = "blocks.rosb"
MANIFEST_FILE = "manifest.txt"
TEXT_FILE = "text.bin"


class CorruptIndexError(ValueError):
    pass


def corpus_digest(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


@dataclass
class BuiltIndex:
    text: bytes
    b: int
    ctx: SuffixContext
    rctx: SuffixContext
    blocks: list[BlockDescriptor]
    disk_blocks: list[DiskBlock]
    block_file: bytes
    addresses: list[int]  # tagged, by bwdId
    condensed: CondensedIndex | None = None
    blind: BitBlindTree | None = None
    memory_file: bytes = field(default=b"", repr=False)

    @property
    def n(self) -> int:
        return len(self.text)

    @property
    def sigma(self) -> int:
        return len(set(self.text))

    def block_store(self) -> BlockStore:
        return BlockStore(self.block_file)


def address_table(blocks: list[BlockDescriptor], ctx: SuffixContext,
                  disk_addr: dict[int, int]) -> list[int]:
    """Tagged address per bwdId: text offset for singletons, host block address otherwise."""
    table = [0] * len(blocks)
    for blk in blocks:
        if blk.kind is BlockClass.SINGLETON:
            table[blk.bwd_id] = tag_text_offset(int(ctx.sa[blk.lb]))
        else:
            table[blk.bwd_id] = tag_disk_address(disk_addr[blk.host])
    return table


def build_index(raw: bytes, b: int, kind: str = "both",
                bitvector_kind: str = "sparse") -> BuiltIndex:
    if kind not in INDEX_KINDS:
        raise ValueError(f"unknown index kind {kind!r}")
    corpus = ingest(raw)
    ctx = build_suffix_context(corpus)
    rctx = build_suffix_context(corpus, reversed=True)
    blocks, nodes = build_blocks(ctx, rctx, b)
    hosted = build_disk_blocks(blocks, ctx)
    block_file, addrs = encode_block_file([d for _, d in hosted])
    disk_addr = {host.fwd_id: a for (host, _), a in zip(hosted, addrs)}
    table = address_table(blocks, ctx, disk_addr)
    built = BuiltIndex(corpus.data, b, ctx, rctx, blocks, [d for _, d in hosted],
                       block_file, table)
    if kind in ("condensed", "both"):
        built.condensed = build_condensed(blocks, ctx, rctx, b, nodes=nodes, addresses=table,
                                          bitvector_kind=bitvector_kind)
    if kind in ("blindtree", "both"):
        built.blind = build_blind(blocks, ctx, table)
    built.memory_file = encode_memory_file(built)
    return built


def encode_memory_file(built: BuiltIndex) -> bytes:
    return MemoryPart(built.b, built.n, built.sigma, corpus_digest(built.text),
                      built.condensed, built.blind).to_bytes()


@dataclass
class MemoryPart:
    b: int
    n: int
    sigma: int
    digest: bytes
    condensed: CondensedIndex | None
    blind: BitBlindTree | None

    def to_bytes(self) -> bytes:
        head = _PREAMBLE.pack(MEMORY_MAGIC, MEMORY_VERSION, self.b, self.n, self.sigma, self.digest)
        sections = []
        if self.condensed is not None:
            sections.append(b"CBWT" + self.condensed.to_bytes())
        if self.blind is not None:
            sections.append(b"BLND" + self.blind.to_bytes())
        return head + b"".join(sections)


def decode_memory_file(data: bytes) -> MemoryPart:
    if len(data) < _PREAMBLE.size:
        raise CorruptIndexError("memory part truncated")
    magic, version, b, n, sigma, digest = _PREAMBLE.unpack_from(data, 0)
    if magic != MEMORY_MAGIC:
        raise CorruptIndexError("memory part has wrong magic")
    if version != MEMORY_VERSION:
        raise CorruptIndexError(f"unsupported memory part version {version}")
    off = _PREAMBLE.size
    condensed = blind = None
    try:
        while off < len(data):
            tag = bytes(data[off:off + 4])
            if tag == b"CBWT":
                condensed, off = CondensedIndex.from_bytes(data, off + 4)
            elif tag == b"BLND":
                blind, off = BitBlindTree.from_bytes(data, off + 4)
            else:
                raise CorruptIndexError(f"unknown section tag {tag!r}")
    except (ValueError, struct.error, KeyError, IndexError) as exc:
        if isinstance(exc, CorruptIndexError):
            raise
        raise CorruptIndexError(f"memory part unreadable: {exc}") from exc
    return MemoryPart(b, n, sigma, digest, condensed, blind)


def memory_breakdown(data: bytes) -> dict[str, int]:
    """Bytes per memory-part component; the values sum to the file size."""
    part = decode_memory_file(data)
    out = {"preamble": _PREAMBLE.size}
    for prefix, section in (("cbwt", part.condensed), ("blind", part.blind)):
        if section is None:
            continue
        out[f"{prefix}.framing"] = 4 + 8  # section tag plus length frame
        for name, payload in section.components().items():
            out[f"{prefix}.{name}"] = len(payload)
    return out


def save_index(built: BuiltIndex, directory: Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / MEMORY_FILE).write_bytes(built.memory_file)
    (directory / BLOCK_FILE).write_bytes(built.block_file)
    (directory / TEXT_FILE).write_bytes(built.text)
    write_manifest(built.blocks, directory / MANIFEST_FILE)


@dataclass
class LoadedIndex:
    text: bytes
    memory: MemoryPart
    blocks: BlockStore
    memory_data: bytes = field(default=b"", repr=False)
    directory: Path | None = None

    @property
    def b(self) -> int:
        return self.memory.b


def load_index(directory: Path) -> LoadedIndex:
    """Load an index directory; raises OSError for missing files, CorruptIndexError otherwise."""
    directory = Path(directory)
    memory_data = (directory / MEMORY_FILE).read_bytes()
    memory = decode_memory_file(memory_data)
    text = (directory / TEXT_FILE).read_bytes()
    if corpus_digest(text) != memory.digest or len(text) != memory.n:
        raise CorruptIndexError("text file does not match the corpus digest stored at build time")
    try:
        store = BlockStore.open(directory / BLOCK_FILE)
    except FormatError as exc:
        raise CorruptIndexError(str(exc)) from exc
    return LoadedIndex(text, memory, store, memory_data, directory)


def loaded_from_built(built: BuiltIndex) -> LoadedIndex:
    """The same view ``load_index`` gives, without touching the file system."""
    return LoadedIndex(built.text, decode_memory_file(built.memory_file), built.block_store(),
                       built.memory_file)

