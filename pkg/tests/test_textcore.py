import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosa.textcore import (EmptyTextError, backward_search_trace, build_suffix_context,
                           fm_backward_step, ingest, invert_bwt, load_sidecars, naive_count,
                           naive_locate)

from conftest import EXAMPLE, texts
from oracles import naive_suffix_array

FWD_SA = [16, 3, 9, 2, 12, 5, 1, 11, 13, 6, 14, 7, 15, 8, 4, 0, 10]
FWD_LCP = [0, 0, 2, 0, 1, 4, 0, 2, 0, 3, 1, 2, 0, 1, 1, 1, 3]
FWD_BWT = b"seshhssseellll#\x00#"
REV_BWT = b"sss#lleellssheh\x00#"


def test_ingest_example():
    corpus = ingest(EXAMPLE)
    assert corpus.n == 16
    assert corpus.sigma == 5
    assert corpus.alphabet == sorted(b"#ehls")
    sym = corpus.symbols()
    assert sym[-1] == 0 and (sym[:-1] != 0).all()


def test_ingest_replaces_nulls_and_rejects_empty():
    corpus = ingest(b"a\x00b\x00")
    assert corpus.data == b"a\xffb\xff"
    with pytest.raises(EmptyTextError):
        ingest(b"")


def test_example_forward_columns():
    ctx = build_suffix_context(ingest(EXAMPLE))
    assert ctx.sa.tolist() == FWD_SA
    assert ctx.lcp.tolist() == FWD_LCP
    assert ctx.bwt.tobytes() == FWD_BWT


def test_example_reversed_bwt():
    rctx = build_suffix_context(ingest(EXAMPLE), reversed=True)
    assert rctx.text.tobytes() == b"sllehs#slles#ehs\x00"
    assert rctx.bwt.tobytes() == REV_BWT


def test_naive_oracle_examples():
    corpus = ingest(EXAMPLE)
    assert naive_locate(corpus, b"ll") == [6, 13]
    assert naive_count(corpus, b"ll") == 2
    assert naive_locate(corpus, b"zzz") == []
    assert naive_locate(ingest(b"aaaa"), b"aa") == [0, 1, 2]


def test_backward_step_examples():
    rctx = build_suffix_context(ingest(EXAMPLE), reversed=True)
    assert fm_backward_step(rctx, (0, 16), ord("s")) == (12, 16)
    assert fm_backward_step(rctx, (12, 16), ord("h")) == (6, 7)
    assert fm_backward_step(rctx, (0, 16), 0) == (0, 0)
    lb, rb = fm_backward_step(rctx, (0, 16), ord("z"))
    assert lb > rb


def test_sidecars_roundtrip(tmp_path):
    corpus = ingest(EXAMPLE)
    ctx = build_suffix_context(corpus)
    ctx.save_sidecars(tmp_path, "fwd")
    back = load_sidecars(corpus, tmp_path, "fwd")
    assert back.sa.tolist() == FWD_SA
    assert back.bwt.tobytes() == FWD_BWT


@settings(max_examples=80, deadline=None)
@given(texts(max_size=120))
def test_suffix_array_and_lcp_match_naive(raw):
    corpus = ingest(raw)
    ctx = build_suffix_context(corpus)
    assert ctx.sa.tolist() == naive_suffix_array(corpus.data)
    text = corpus.data + b"\x00"
    for i in range(1, len(text)):
        a, b = text[ctx.sa[i - 1]:], text[ctx.sa[i]:]
        h = 0
        while h < min(len(a), len(b)) and a[h] == b[h]:
            h += 1
        assert ctx.lcp[i] == h
    assert ctx.lcp[0] == 0
    assert invert_bwt(ctx) == corpus.data


def test_suffix_array_large_random():
    rng = np.random.default_rng(2)
    raw = bytes(rng.integers(97, 101, size=10_000).astype(np.uint8))
    ctx = build_suffix_context(ingest(raw))
    assert ctx.sa.tolist() == naive_suffix_array(raw)


@settings(max_examples=80, deadline=None)
@given(texts(max_size=80), st.binary(min_size=1, max_size=4))
def test_reversed_backward_search_counts(raw, pat):
    pat = bytes(b"ab#\xff"[c % 4] for c in pat)
    corpus = ingest(raw)
    rctx = build_suffix_context(corpus, reversed=True)
    trace = backward_search_trace(rctx, pat)
    expect = naive_count(corpus, pat)
    if expect:
        lb, rb = trace[-1]
        assert len(trace) == len(pat) and rb - lb + 1 == expect
    else:
        assert trace[-1][0] > trace[-1][1]
