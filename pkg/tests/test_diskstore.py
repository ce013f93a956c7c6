import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosa.blockmodel import BlockClass
from rosa.diskstore import (AccessStats, BlockStore, DiskBlock, FormatError, TextStore,
                            block_file_breakdown, in_block_search, serialize_block)
from rosa.index import build_index

from conftest import EXAMPLE, texts


def host_block(built, fwd_id):
    store = built.block_store()
    addr = store.addresses[[b.fwd_id for b in built.blocks
                            if b.kind is BlockClass.IRREDUCIBLE].index(fwd_id)]
    return store.fetch(addr)


def test_example_headers(example_built):
    assert host_block(example_built, 2).header == [(4, 0, 0), (8, 1, 1), (9, 1, 2)]
    assert host_block(example_built, 9).header == [(6, 0, 1), (7, 0, 0)]
    assert host_block(example_built, 1).header == [(2, 0, 0)]


def test_example_offsets(example_built):
    assert host_block(example_built, 2).offsets.tolist() == [2, 12, 5]
    assert host_block(example_built, 9).offsets.tolist() == [0, 10]


def test_in_block_search_examples(example_built):
    text = TextStore(example_built.text)
    sh = host_block(example_built, 9)
    stats = AccessStats()
    count, offsets = in_block_search(sh, b"she", 2, 0, 0, 2, text, stats)
    assert (count, sorted(offsets)) == (2, [0, 10])
    assert stats.text_accesses == 1
    stats = AccessStats()
    assert in_block_search(sh, b"shy", 2, 0, 0, 2, text, stats) == (0, [])
    assert stats.text_accesses == 1
    e = host_block(example_built, 2)
    count, offsets = in_block_search(e, b"lls", 2, 1, 1, 2, text)
    assert (count, offsets) == (2, [13, 6])


def test_serialize_rejects_non_hosts(example_built):
    blocks = example_built.blocks
    with pytest.raises(FormatError):
        serialize_block(blocks[3], [], example_built.ctx)
    with pytest.raises(FormatError):
        serialize_block(blocks[2], [blocks[3]], example_built.ctx)


def test_block_file_layout(example_built):
    data = example_built.block_file
    assert data[:4] == b"ROSB"
    assert int.from_bytes(data[8:16], "little") == 3
    assert sum(block_file_breakdown(data).values()) == len(data)
    raw = host_block(example_built, 9).to_bytes()
    assert int.from_bytes(raw[:4], "little") == 2
    assert [int.from_bytes(raw[4 + 4 * i:8 + 4 * i], "little") for i in range(6)] == [6, 0, 1, 7, 0, 0]


def test_corruption_detected(example_built):
    with pytest.raises(FormatError):
        BlockStore(b"XXXX" + example_built.block_file[4:])
    store = BlockStore(example_built.block_file[:-5], memo=0)
    with pytest.raises(FormatError):
        for addr in store.addresses:
            store.fetch(addr)


def test_fetch_counts_every_call(example_built):
    store = example_built.block_store()
    stats = AccessStats()
    addr = store.addresses[0]
    store.fetch(addr, stats)
    store.fetch(addr, stats)
    assert stats.block_fetches == 2


@settings(max_examples=50, deadline=None)
@given(texts(max_size=120), st.integers(2, 12))
def test_disk_blocks_store_only_irreducible_pointers(raw, b):
    built = build_index(raw, b)
    ctx = built.ctx
    sa = ctx.sa.tolist()
    hosts = [x for x in built.blocks if x.kind is BlockClass.IRREDUCIBLE]
    store = built.block_store()
    decoded = [blk for _, blk in store]
    assert len(decoded) == len(hosts)
    assert sum(blk.size for blk in decoded) == sum(x.size for x in hosts)
    by_bwd = {x.bwd_id: x for x in built.blocks}
    for host, blk in zip(hosts, decoded):
        assert blk.offsets.tolist() == sa[host.lb:host.rb + 1]
        assert DiskBlock.from_bytes(blk.to_bytes())[0] == blk
        for bwd, dx, dd in blk.header:
            guest = by_bwd[bwd]
            assert guest.host == host.fwd_id
            for j in range(guest.size):
                assert sa[host.lb + dx + j] + dd == sa[guest.lb + j]
    # every non-singleton block resolves to exactly one host holding its header entry
    idx = built.condensed
    for x in built.blocks:
        if x.kind is BlockClass.SINGLETON:
            continue
        addr = idx.resolve_address(x.bwd_id).address
        stats = AccessStats()
        blk = store.fetch(addr, stats)
        assert stats.block_fetches == 1
        assert blk.entry(x.bwd_id) == (x.delta_x, x.delta_d)
