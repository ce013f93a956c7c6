"""Acceptance criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines bypass output
capture, so they also appear without ``-s``).
"""

import time
from dataclasses import dataclass, field

import numpy as np
import pytest

from rosa.bench import extract_patterns, run_bench
from rosa.blockmodel import BlockClass, block_prefix, build_blocks, pointer_fractions
from rosa.cbwt import Counters
from rosa.diskstore import DiskBlock
from rosa.engine import Engine
from rosa.index import build_index, decode_memory_file, loaded_from_built
from rosa.textcore import backward_search_trace, build_suffix_context, ingest

EXAMPLE = b"she#sells#shells"
SWEEP_BS = (4, 64, 1024)
SWEEP_KINDS = ("condensed", "blindtree")
PATTERNS_PER_CORPUS = 1000


def report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def random_text(rng, sigma: int, n: int) -> bytes:
    alphabet = np.arange(1, sigma + 1, dtype=np.uint8) if sigma > 26 else \
        np.frombuffer(b"abcdefghijklmnopqrstuvwxyz", dtype=np.uint8)[:sigma]
    return rng.choice(alphabet, size=n).astype(np.uint8).tobytes()


def word_text(rng, n: int, vocabulary: int = 300) -> bytes:
    """Zipf-distributed pseudo-words separated by spaces."""
    words = [rng.integers(97, 123, size=int(rng.integers(2, 9))).astype(np.uint8).tobytes()
             for _ in range(vocabulary)]
    weights = 1 / np.arange(1, vocabulary + 1)
    picks = rng.choice(vocabulary, size=n // 3 + 1, p=weights / weights.sum())
    return b" ".join(words[i] for i in picks)[:n]


def fibonacci_word(n: int) -> bytes:
    a, b = b"a", b"ab"
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def sweep_corpora() -> list[tuple[str, bytes]]:
    rng = np.random.default_rng(2024)
    out = []
    for sigma, sizes in ((2, (1500, 4000, 100_000)), (4, (1500, 5000, 20_000)),
                         (26, (1500, 5000, 20_000)), (128, (1500, 5000, 20_000))):
        for n in sizes:
            out.append((f"sigma{sigma}-n{n}", random_text(rng, sigma, n)))
        half = random_text(rng, sigma, 1500)
        out.append((f"sigma{sigma}-doubled", half + half))
    out.append(("all-equal", b"a" * 1200))
    out.append(("fibonacci", fibonacci_word(3000)))
    out.append(("periodic", (b"abcab" * 400 + b"x" + b"abcab" * 300)))
    out.append(("words", word_text(rng, 6000)))
    return out


def stratified_patterns(raw: bytes, ctx, seed: int) -> list[bytes]:
    """At least PATTERNS_PER_CORPUS distinct substrings spread over (length, frequency) strata."""
    n = len(raw)
    if len(set(raw)) == 1:
        # one distinct substring per length; every length is its own stratum
        return [raw[:m] for m in range(1, min(n, PATTERNS_PER_CORPUS) + 1)]
    lengths = [m for m in (1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 24, 32, 64) if m <= n]
    freqs = [1, 2, 3, 5, 8, 12, 20, 50, 100, 200, 500, 1000, 5000, 20000]
    strata = extract_patterns(ctx, lengths, freqs, 150, seed=seed)
    pats = [p for st in strata for p in st.samples]
    if len(pats) > PATTERNS_PER_CORPUS:
        keep = np.random.default_rng(seed).choice(len(pats), PATTERNS_PER_CORPUS, replace=False)
        pats = [pats[i] for i in sorted(keep.tolist())]
    m = 1
    seen = set(pats)
    while len(pats) < PATTERNS_PER_CORPUS and m <= n:
        # low-complexity texts: fill up with every distinct factor, shortest first
        for i in range(n - m + 1):
            p = raw[i:i + m]
            if p not in seen:
                seen.add(p)
                pats.append(p)
        m += 1
    return pats


def naive_positions(raw: bytes, p: bytes) -> list[int]:
    out = []
    i = raw.find(p)
    while i >= 0:
        out.append(i)
        i = raw.find(p, i + 1)
    return out


def absent_variants(pats: list[bytes], rng) -> list[bytes]:
    out = []
    for p in pats[:100]:
        q = bytearray(p)
        q[int(rng.integers(len(q)))] = 0xFE
        out.append(bytes(q))
    return out


@dataclass
class Sweep:
    corpora: int = 0
    patterns: list[int] = field(default_factory=list)
    queries: int = 0
    mismatches: list[str] = field(default_factory=list)
    trace_checks: int = 0
    trace_mismatches: list[str] = field(default_factory=list)
    space: list[dict] = field(default_factory=list)
    seconds: float = 0.0


@pytest.fixture(scope="module")
def sweep() -> Sweep:
    started = time.perf_counter()
    res = Sweep()
    rng = np.random.default_rng(7)
    for ci, (name, raw) in enumerate(sweep_corpora()):
        res.corpora += 1
        pats = None
        for b in SWEEP_BS:
            built = build_index(raw, b)
            if pats is None:
                pats = stratified_patterns(raw, built.ctx, seed=ci)
                res.patterns.append(len(pats))
                expected = {p: naive_positions(raw, p) for p in pats}
                extra = absent_variants(pats, rng)
                expected.update({p: naive_positions(raw, p) for p in extra})
            loaded = loaded_from_built(built)
            for kind in SWEEP_KINDS:
                eng = Engine.from_loaded(loaded, kind)
                for p, want in expected.items():
                    c = eng.count(p).value
                    got = eng.locate(p).value
                    res.queries += 2
                    if c != len(want) or got != want:
                        res.mismatches.append(f"{name} b={b} {kind} {p!r}: {c} vs {len(want)}")
            idx = built.condensed
            rctx = built.rctx
            for p in pats:
                trace = []
                idx.get_interval(p, trace)
                res.trace_checks += 1
                if trace != backward_search_trace(rctx, p)[:len(trace)]:
                    res.trace_mismatches.append(f"{name} b={b} {p!r}")
            n = built.n
            res.space.append({
                "corpus": name, "b": b, "n": n, "B": idx.num_blocks,
                "z": idx.bwdbf.rank(n + 1), "bwdbl": idx.bwdbl.ones, "cL": len(idx.cL),
                "bits": idx.serialized_bits(), "kappa": idx.space_constant(),
            })
    res.seconds = time.perf_counter() - started
    return res


def test_criterion_1_worked_example(capsys):
    started = time.perf_counter()
    problems = []
    built = build_index(EXAMPLE, 3)
    ctx, blocks, idx = built.ctx, built.blocks, built.condensed
    if ctx.sa.tolist() != [16, 3, 9, 2, 12, 5, 1, 11, 13, 6, 14, 7, 15, 8, 4, 0, 10]:
        problems.append("SA")
    if ctx.lcp.tolist() != [0, 0, 2, 0, 1, 4, 0, 2, 0, 3, 1, 2, 0, 1, 1, 1, 3]:
        problems.append("LCP")
    if ctx.bwt.tobytes() != b"seshhssseellll#\x00#":
        problems.append("BWT")
    prefixes = [block_prefix(x, ctx) for x in blocks]
    if prefixes != [b"\x00", b"#", b"e", b"h", b"ll", b"ls", b"s\x00", b"s#", b"se", b"sh"]:
        problems.append("block prefixes")
    kinds = [x.kind for x in blocks]
    if (kinds.count(BlockClass.SINGLETON), kinds.count(BlockClass.REDUCIBLE),
            kinds.count(BlockClass.IRREDUCIBLE)) != (4, 3, 3):
        problems.append("block classes")
    reductions = {prefixes[x.fwd_id]: (prefixes[x.host], x.delta_x, x.delta_d)
                  for x in blocks if x.kind is BlockClass.REDUCIBLE}
    if reductions != {b"h": (b"sh", 0, 1), b"ll": (b"e", 1, 1), b"ls": (b"e", 1, 2)}:
        problems.append("reductions")
    if bytes(idx.cL.tolist()) != b"s#lelshe\x00#":
        problems.append("cL")
    bf = [idx.bwdbf.rank(i + 1) - idx.bwdbf.rank(i) for i in range(idx.bwdbf.length)]
    bl = [idx.bwdbl.rank(i + 1) - idx.bwdbl.rank(i) for i in range(idx.bwdbl.length)]
    if bf != [1, 1, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1]:
        problems.append("bwdbf")
    if bl != [1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 1]:
        problems.append("bwdbl")
    trace = []
    state = idx.get_interval(b"she", trace)
    bwd = idx.get_bwd_id(state.lb, state.d)
    fwd = next(x.fwd_id for x in blocks if x.bwd_id == bwd)
    if trace != [(12, 16), (6, 7)] or bwd != 7 or fwd != 9:
        problems.append(f"she trace {trace} -> {bwd} -> {fwd}")
    say = Engine.from_loaded(loaded_from_built(built), "condensed").count(b"say")
    if idx.get_interval(b"say") is not None or say.value != 0 or say.stats.total != 0:
        problems.append("say")
    elapsed = time.perf_counter() - started
    ok = not problems and elapsed < 1.0
    report(capsys, 1, ok, f"worked example reproduced in {elapsed:.3f}s"
           + (f"; mismatched: {', '.join(problems)}" if problems else ""))
    assert not problems
    assert elapsed < 1.0


def test_criterion_2_oracle_equivalence(capsys, sweep):
    ok = (not sweep.mismatches and sweep.corpora >= 20 and min(sweep.patterns) >= 1000
          and sweep.seconds < 300)
    report(capsys, 2, ok,
           f"{sweep.corpora} corpora, {min(sweep.patterns)}-{max(sweep.patterns)} stratified "
           f"patterns each, b in {SWEEP_BS}, both index kinds, {sweep.queries} count/locate "
           f"queries, {len(sweep.mismatches)} mismatches, {sweep.seconds:.1f}s")
    assert not sweep.mismatches, sweep.mismatches[:5]
    assert sweep.corpora >= 20
    assert min(sweep.patterns) >= 1000
    assert sweep.seconds < 300


def test_criterion_3_condensed_full_agreement(capsys, sweep):
    ok = not sweep.trace_mismatches
    report(capsys, 3, ok, f"{sweep.trace_checks} pattern traces compared iteration by iteration, "
           f"{len(sweep.trace_mismatches)} disagreements")
    assert ok, sweep.trace_mismatches[:5]


def access_corpus() -> bytes:
    return word_text(np.random.default_rng(99), 200_000)


def test_criterion_4_disk_access_bounds(capsys):
    raw = access_corpus()
    b = 64
    built = build_index(raw, b)
    loaded = loaded_from_built(built)
    strata = extract_patterns(built.ctx, (4, 10, 20, 40, 100), (1, 10, 100, 1000, 10000), 1000,
                              seed=0)
    bench = run_bench(loaded, strata, seed=0)
    worst = max(r.mean_total for r in bench.rows if r.n_patterns)
    cbwt = Engine.from_loaded(loaded, "condensed")
    blind = Engine.from_loaded(loaded, "blindtree")
    frequent = zero_bad = blind_bad = 0
    blind_total = 0
    for st in strata:
        for p in st.samples:
            state = built.condensed.get_interval(p)
            if state is None or state.d < len(p) or state.width <= b:
                continue
            frequent += 1
            if cbwt.count(p).stats.total != 0:
                zero_bad += 1
            accesses = blind.count(p).stats.total
            blind_total += accesses
            if accesses < 1:
                blind_bad += 1
    filled = sum(1 for st in strata if not st.empty)
    ok = worst <= 2.0 and zero_bad == 0 and blind_bad == 0 and frequent > 0
    report(capsys, 4, ok,
           f"{filled}/{len(strata)} strata filled (n={built.n}, b={b}); worst stratum mean "
           f"{worst:.3f} accesses; {frequent} frequent patterns: condensed nonzero={zero_bad}, "
           f"blind-tree mean {blind_total / max(frequent, 1):.2f} with {blind_bad} below 1")
    assert worst <= 2.0
    assert frequent > 0
    assert zero_bad == 0
    assert blind_bad == 0


def test_criterion_5_space_properties(capsys, sweep):
    bad = [s for s in sweep.space
           if not (s["z"] == s["bwdbl"] == s["cL"] and s["z"] <= min(4 * s["B"], s["n"] + 1))]
    kappas = [s["kappa"] for s in sweep.space]
    big = [s["kappa"] for s in sweep.space if s["n"] >= 20_000]
    report(capsys, 5, not bad,
           f"{len(sweep.space)} indexes: z = ones(bwdbl) = |cL| and z <= min(4B, n+1) "
           f"({len(bad)} violations); kappa measured {min(kappas):.2f}-{max(kappas):.2f} "
           f"(n >= 20000: {min(big):.2f}-{max(big):.2f})")
    assert not bad, bad[:3]


def elision(raw: bytes, b: int) -> dict[str, float]:
    corpus = ingest(raw)
    ctx = build_suffix_context(corpus)
    rctx = build_suffix_context(corpus, reversed=True)
    return pointer_fractions(build_blocks(ctx, rctx, b)[0])


def test_criterion_6_pointer_elision(capsys):
    rng = np.random.default_rng(6)
    words = word_text(rng, 20_000)
    doubled = words + words
    asserted = {}
    for b in (4, 16, 64):
        fr = elision(doubled, b)
        asserted[b] = fr["reducible"] + fr["singleton"]
    uniform = random_text(rng, 26, 5000)
    reported = {b: sum(v for k, v in elision(uniform + uniform, b).items() if k != "irreducible")
                for b in (4, 16, 64)}
    single = {b: sum(v for k, v in elision(words, b).items() if k != "irreducible")
              for b in (4, 64, 4096)}
    ok = all(v >= 0.5 for v in asserted.values())
    report(capsys, 6, ok,
           "doubled word text (n=40000) reducible+singleton "
           + ", ".join(f"b={b}: {v:.3f}" for b, v in asserted.items())
           + "; reported only: doubled uniform sigma=26 "
           + ", ".join(f"b={b}: {v:.3f}" for b, v in reported.items())
           + "; single word text " + ", ".join(f"b={b}: {v:.3f}" for b, v in single.items()))
    assert ok, asserted


def test_criterion_7_serialization(capsys):
    rng = np.random.default_rng(77)
    blocks_checked = memory_checked = 0
    failures = []
    while blocks_checked < 1000 or memory_checked < 25:
        sigma = int(rng.choice([2, 4, 26, 128]))
        raw = random_text(rng, sigma, int(rng.integers(50, 1500)))
        b = int(rng.choice([2, 3, 4, 8, 16, 64]))
        built = build_index(raw, b)
        part = decode_memory_file(built.memory_file)
        memory_checked += 1
        if part.to_bytes() != built.memory_file:
            failures.append(f"memory part sigma={sigma} b={b}")
        for blk in built.disk_blocks:
            data = blk.to_bytes()
            back, end = DiskBlock.from_bytes(data)
            blocks_checked += 1
            if end != len(data) or back.to_bytes() != data or back.header != blk.header \
                    or back.offsets.tolist() != blk.offsets.tolist():
                failures.append(f"block sigma={sigma} b={b}")
    ok = not failures
    report(capsys, 7, ok, f"{blocks_checked} disk blocks and {memory_checked} memory parts "
           f"round-tripped byte-exact, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_8_paper_scale(capsys):
    with capsys.disabled():
        print("\nCRITERION 8: NOT RUN - 64 GB corpora and wall-clock tables are out of reach "
              "at desk scale; criteria 2-6 stand in for them")
    pytest.skip("paper-scale results are not reproducible at desk scale")
