"""Variable-sized suffix blocks and whole-block reductions.

A block is a suffix-tree node of size at most ``b`` whose parent has size
greater than ``b``; its identifying prefix is one symbol longer than the
parent's string depth.  Blocks whose BWT symbols are all equal are
*reducible*: prepending that symbol maps the block onto a sub-interval of
another block, and following such steps ends at an irreducible *host*.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator

from .textcore import SuffixContext, fm_backward_step


class BlockClass(str, enum.Enum):
    SINGLETON = "singleton"
    REDUCIBLE = "reducible"
    IRREDUCIBLE = "irreducible"


@dataclass
class BlockDescriptor:
    fwd_id: int
    lb: int
    rb: int
    depth: int
    kind: BlockClass = BlockClass.IRREDUCIBLE
    host: int = -1
    delta_x: int = 0
    delta_d: int = 0
    bwd_id: int = -1
    rev_lb: int = -1

    @property
    def size(self) -> int:
        return self.rb - self.lb + 1

    def manifest_line(self) -> str:
        return (f"{self.fwd_id}\t[{self.lb},{self.rb}]\t{self.depth}\t{self.kind.value}"
                f"\t{self.host}\t({self.delta_x},{self.delta_d})\t{self.bwd_id}")


class BlockModelError(RuntimeError):
    pass


def form_blocks(ctx: SuffixContext, b: int) -> list[BlockDescriptor]:
    """Split the suffix array into blocks with a bottom-up LCP-interval sweep."""
    if b < 1:
        raise ValueError("block size bound b must be >= 1")
    size = ctx.size
    if size <= b:
        return [BlockDescriptor(0, 0, size - 1, 0, BlockClass.SINGLETON if size == 1
                                else BlockClass.IRREDUCIBLE, host=0)]
    lcp = ctx.lcp.tolist()
    found: list[tuple[int, int, int]] = []

    def emit(depth: int, lb: int, rb: int, children: list[tuple[int, int]]) -> None:
        if rb - lb + 1 <= b:
            return
        cursor = lb
        for clb, crb in children:
            for leaf in range(cursor, clb):
                found.append((leaf, leaf, depth + 1))
            if crb - clb + 1 <= b:
                found.append((clb, crb, depth + 1))
            cursor = crb + 1
        for leaf in range(cursor, rb + 1):
            found.append((leaf, leaf, depth + 1))

    # stack entries: [lcp value, left bound, child intervals]
    stack: list[list] = [[0, 0, []]]
    for i in range(1, size + 1):
        cur = lcp[i] if i < size else -1
        lb = i - 1
        last = None
        while stack and cur < stack[-1][0]:
            depth, tlb, children = stack.pop()
            emit(depth, tlb, i - 1, children)
            last = (tlb, i - 1)
            lb = tlb
            if stack and cur <= stack[-1][0]:
                stack[-1][2].append(last)
                last = None
        if stack and cur > stack[-1][0]:
            stack.append([cur, lb, [last] if last else []])
    found.sort()
    return [BlockDescriptor(k, lb, rb, d) for k, (lb, rb, d) in enumerate(found)]


def classify_reductions(blocks: list[BlockDescriptor], ctx: SuffixContext) -> list[BlockDescriptor]:
    """Mark singleton / reducible / irreducible blocks and resolve reduction hosts."""
    starts = [blk.lb for blk in blocks]
    bwt = ctx.bwt
    step: dict[int, tuple[int, int]] = {}  # fwd id -> (landing block, offset inside it)
    for blk in blocks:
        blk.delta_x = blk.delta_d = 0
        blk.host = blk.fwd_id
        if blk.size == 1:
            blk.kind = BlockClass.SINGLETON
            continue
        run = bwt[blk.lb:blk.rb + 1]
        if (run == run[0]).all():
            blk.kind = BlockClass.REDUCIBLE
            landed = ctx.lf(blk.lb)
            target = bisect_right(starts, landed) - 1
            host = blocks[target]
            if landed + blk.size - 1 > host.rb:
                raise BlockModelError(f"block {blk.fwd_id} lands across a block boundary")
            if host.size == 1:
                raise BlockModelError(f"block {blk.fwd_id} reduces into a singleton")
            step[blk.fwd_id] = (target, landed - host.lb)
        else:
            blk.kind = BlockClass.IRREDUCIBLE

    resolved: dict[int, tuple[int, int, int]] = {}
    for blk in blocks:
        if blk.kind is not BlockClass.REDUCIBLE or blk.fwd_id in resolved:
            continue
        chain = [blk.fwd_id]
        seen = {blk.fwd_id}
        while True:
            nxt, _ = step[chain[-1]]
            if blocks[nxt].kind is not BlockClass.REDUCIBLE or nxt in resolved:
                break
            if nxt in seen:
                raise BlockModelError(f"reduction cycle through block {nxt}")
            seen.add(nxt)
            chain.append(nxt)
        for fid in reversed(chain):
            nxt, off = step[fid]
            if blocks[nxt].kind is BlockClass.REDUCIBLE:
                h, dx, dd = resolved[nxt]
                resolved[fid] = (h, dx + off, dd + 1)
            else:
                resolved[fid] = (nxt, off, 1)
    for fid, (h, dx, dd) in resolved.items():
        blk = blocks[fid]
        blk.host, blk.delta_x, blk.delta_d = h, dx, dd
    return blocks


def block_prefix(blk: BlockDescriptor, ctx: SuffixContext) -> bytes:
    start = int(ctx.sa[blk.lb])
    return ctx.text[start:start + blk.depth].tobytes()


def walk_prefix_trie(blocks: list[BlockDescriptor], ctx: SuffixContext,
                     rctx: SuffixContext) -> Iterator[tuple[int, int, int, int]]:
    """Visit every non-empty prefix of every block prefix exactly once.

    Yields ``(block index, depth, lb, rb)`` where ``[lb, rb]`` is the
    reversed-text interval of the reversed prefix; the node reached at
    the block's own depth is yielded with that block's index, shared
    prefixes with the first block that reaches them.  Block prefixes are
    prefix-free, so every block reaches its own depth as a new node.
    """
    text = ctx.text
    sa = ctx.sa
    lcp = ctx.lcp
    states = [(0, rctx.size - 1)]
    prev_depth = 0
    for k, blk in enumerate(blocks):
        common = 0 if k == 0 else min(int(lcp[blk.lb]), prev_depth, blk.depth)
        del states[common + 1:]
        start = int(sa[blk.lb])
        for d in range(common, blk.depth):
            lb, rb = fm_backward_step(rctx, states[-1], int(text[start + d]))
            if lb > rb:
                raise BlockModelError(f"prefix of block {blk.fwd_id} missing from reversed text")
            states.append((lb, rb))
            yield k, d + 1, lb, rb
        prev_depth = blk.depth


def reversed_block_starts(blocks: list[BlockDescriptor], ctx: SuffixContext,
                          rctx: SuffixContext) -> tuple[list[int], list[tuple[int, int]]]:
    """Reversed lb for each block plus every trie-node interval met on the way."""
    rev_lb = [0] * len(blocks)
    nodes = []
    for k, depth, lb, rb in walk_prefix_trie(blocks, ctx, rctx):
        nodes.append((lb, rb))
        if depth == blocks[k].depth:
            if rb - lb + 1 != blocks[k].size:
                raise BlockModelError(f"block {blocks[k].fwd_id} width mismatch in reversed text")
            rev_lb[k] = lb
    return rev_lb, nodes


def assign_backward_ids(blocks: list[BlockDescriptor], ctx: SuffixContext,
                        rctx: SuffixContext, rev_lb: list[int] | None = None
                        ) -> list[BlockDescriptor]:
    """Number blocks by (reversed-text lb, depth)."""
    if rev_lb is None:
        rev_lb, _ = reversed_block_starts(blocks, ctx, rctx)
    for blk, r in zip(blocks, rev_lb):
        blk.rev_lb = r
    order = sorted(blocks, key=lambda blk: (blk.rev_lb, blk.depth))
    for bid, blk in enumerate(order):
        blk.bwd_id = bid
    return blocks


def build_blocks(ctx: SuffixContext, rctx: SuffixContext, b: int) -> tuple[list[BlockDescriptor], list[tuple[int, int]]]:
    """Form, classify and number blocks; also return the reversed trie-node intervals."""
    blocks = classify_reductions(form_blocks(ctx, b), ctx)
    rev_lb, nodes = reversed_block_starts(blocks, ctx, rctx)
    assign_backward_ids(blocks, ctx, rctx, rev_lb)
    return blocks, nodes


def pointer_fractions(blocks: Iterable[BlockDescriptor]) -> dict[str, float]:
    totals = {k.value: 0 for k in BlockClass}
    for blk in blocks:
        totals[blk.kind.value] += blk.size
    whole = sum(totals.values())
    return {k: v / whole for k, v in totals.items()}


def write_manifest(blocks: list[BlockDescriptor], path) -> None:
    with open(path, "w") as fh:
        fh.write("# fwdId\tinterval\tdepth\tclass\thost\t(dx,dd)\tbwdId\n")
        for blk in blocks:
            fh.write(blk.manifest_line() + "\n")


def read_manifest(path) -> list[BlockDescriptor]:
    """Inverse of ``write_manifest``."""
    blocks = []
    with open(path) as fh:
        for line in fh:
            if not line.strip() or line.startswith("#"):
                continue
            fid, interval, depth, kind, host, delta, bwd = line.rstrip("\n").split("\t")
            lb, rb = interval.strip("[]").split(",")
            dx, dd = delta.strip("()").split(",")
            blocks.append(BlockDescriptor(int(fid), int(lb), int(rb), int(depth), BlockClass(kind),
                                          int(host), int(dx), int(dd), int(bwd)))
    return blocks
