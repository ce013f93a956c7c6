"""Stratified pattern extraction and the disk-access / space benchmark."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .blockmodel import BlockDescriptor, pointer_fractions
from .diskstore import block_file_breakdown
from .engine import Engine
from .index import LoadedIndex, corpus_digest, memory_breakdown
from .textcore import SuffixContext

log = logging.getLogger(__name__)

DEFAULT_LENGTHS = (4, 10, 20, 40, 100)
DEFAULT_FREQS = (1, 10, 100, 1000, 10000)
CSV_COLUMNS = ("stratum", "m", "k", "nPatterns", "meanFetches", "meanTextAccesses", "memOnlyFrac")


class BenchError(ValueError):
    pass


@dataclass
class PatternStratum:
    length: int
    frequency: int
    tolerance: float = 0.25
    samples: list[bytes] = field(default_factory=list)
    available: int = 0  # distinct patterns in the band before sampling
    digest: bytes = b""

    @property
    def empty(self) -> bool:
        return not self.samples

    @property
    def label(self) -> str:
        return f"m{self.length}k{self.frequency}"


def assign_target(k: int, targets: Sequence[int], tolerance: float = 0.25) -> int | None:
    """Nearest target (relative distance) whose band holds ``k``; ties go to the lower one."""
    best = None
    for t in sorted(targets):
        if (1 - tolerance) * t <= k <= (1 + tolerance) * t:
            dist = abs(k - t) / t
            if best is None or dist < best[0]:
                best = (dist, t)
    return None if best is None else best[1]


def extract_patterns(ctx: SuffixContext, lengths: Iterable[int], freqs: Iterable[int],
                     per_stratum: int, seed: int = 0, tolerance: float = 0.25
                     ) -> list[PatternStratum]:
    """Sample distinct substrings per (length, target frequency) stratum.

    Each maximal run of suffix-array rows sharing ``m`` leading symbols is one
    candidate pattern whose frequency is the run length.
    """
    freqs = sorted(set(int(f) for f in freqs))
    n = ctx.n
    digest = corpus_digest(ctx.text[:-1].tobytes())
    rng = np.random.default_rng(seed)
    out = []
    for m in sorted(set(int(x) for x in lengths)):
        strata = {t: PatternStratum(m, t, tolerance, digest=digest) for t in freqs}
        if 1 <= m <= n:
            breaks = ctx.lcp < m
            breaks[0] = True
            starts = np.flatnonzero(breaks)
            sizes = np.diff(np.append(starts, ctx.size))
            ok = ctx.sa[starts] + m <= n
            starts, sizes = starts[ok], sizes[ok]
            lo = np.floor((1 - tolerance) * np.asarray(freqs, dtype=float))
            keep = np.zeros(len(sizes), dtype=bool)
            for t, a in zip(freqs, lo):
                keep |= (sizes >= a) & (sizes <= (1 + tolerance) * t)
            buckets: dict[int, list[int]] = {t: [] for t in freqs}
            for row, k in zip(starts[keep].tolist(), sizes[keep].tolist()):
                t = assign_target(k, freqs, tolerance)
                if t is not None:
                    buckets[t].append(row)
            for t in freqs:
                rows = buckets[t]
                st = strata[t]
                st.available = len(rows)
                if not rows:
                    continue
                take = min(per_stratum, len(rows))
                pick = rng.choice(len(rows), size=take, replace=False)
                for i in pick.tolist():
                    p = int(ctx.sa[rows[i]])
                    st.samples.append(ctx.text[p:p + m].tobytes())
        out.extend(strata[t] for t in freqs)
    return out


@dataclass
class BenchRow:
    kind: str
    m: int
    k: int
    n_patterns: int
    mean_fetches: float = math.nan
    mean_text: float = math.nan
    mem_only_frac: float = math.nan
    max_accesses: int = 0

    @property
    def stratum(self) -> str:
        return f"{self.kind}:m{self.m}k{self.k}"

    @property
    def mean_total(self) -> float:
        return self.mean_fetches + self.mean_text


@dataclass
class BenchReport:
    seed: int
    rows: list[BenchRow]
    sizes: dict
    monotonicity_exceptions: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            if r.n_patterns == 0:
                w.writerow([r.stratum, r.m, r.k, 0, "empty", "empty", "empty"])
            else:
                w.writerow([r.stratum, r.m, r.k, r.n_patterns, f"{r.mean_fetches:.4f}",
                            f"{r.mean_text:.4f}", f"{r.mem_only_frac:.4f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = dict(self.sizes)
        doc["seed"] = self.seed
        doc["monotonicityExceptions"] = self.monotonicity_exceptions
        return json.dumps(doc, indent=2, sort_keys=True)


def size_report(loaded: LoadedIndex, blocks: list[BlockDescriptor] | None = None,
                max_lcp: int | None = None) -> dict:
    """Component byte counts (summing to the file sizes), pointer fractions and kappa."""
    mem = loaded.memory
    memory = memory_breakdown(loaded.memory_data)
    disk = block_file_breakdown(loaded.blocks.data)
    doc: dict = {
        "b": mem.b, "n": mem.n, "sigma": mem.sigma,
        "files": {"memory.rosa": len(loaded.memory_data), "blocks.rosb": len(loaded.blocks.data)},
        "memory": memory,
        "blocks": disk,
    }
    if sum(memory.values()) != len(loaded.memory_data) or sum(disk.values()) != len(loaded.blocks.data):
        raise BenchError("size breakdown does not add up to the file sizes")
    if mem.condensed is not None:
        idx = mem.condensed
        doc["B"] = idx.num_blocks
        doc["z"] = idx.z
        doc["kappa"] = idx.space_constant()
    if blocks is not None:
        doc["pointerFractions"] = pointer_fractions(blocks)
    if max_lcp is not None:
        doc["sbTreeMinBits"] = sb_tree_min_bits(mem.n, mem.sigma, max_lcp)
    return doc


def sb_tree_min_bits(n: int, sigma: int, max_lcp: int) -> float:
    """Minimum static string B-tree size in bits, n(2 + log(n_hat log sigma) + log n)."""
    inner = max(max_lcp, 1) * max(math.log2(max(sigma, 2)), 1.0)
    return n * (2 + math.log2(inner) + math.log2(max(n, 2)))


def run_bench(loaded: LoadedIndex, strata: list[PatternStratum], kinds: Sequence[str] | None = None,
              seed: int = 0, blocks: list[BlockDescriptor] | None = None,
              max_lcp: int | None = None) -> BenchReport:
    mem = loaded.memory
    if kinds is None:
        kinds = [k for k, part in (("condensed", mem.condensed), ("blindtree", mem.blind))
                 if part is not None]
    for st in strata:
        if st.digest and st.digest != mem.digest:
            raise BenchError("patterns were extracted from a different corpus")
    rows = []
    for kind in kinds:
        engine = Engine.from_loaded(loaded, kind)
        for st in strata:
            row = BenchRow(kind, st.length, st.frequency, len(st.samples))
            if st.samples:
                fetches = texts = mem_only = 0
                for p in st.samples:
                    s = engine.count(p).stats
                    fetches += s.block_fetches
                    texts += s.text_accesses
                    mem_only += s.mem_only
                    row.max_accesses = max(row.max_accesses, s.total)
                row.mean_fetches = fetches / len(st.samples)
                row.mean_text = texts / len(st.samples)
                row.mem_only_frac = mem_only / len(st.samples)
            rows.append(row)
    report = BenchReport(seed, rows, size_report(loaded, blocks, max_lcp))
    report.monotonicity_exceptions = monotonicity_exceptions(rows)
    for msg in report.monotonicity_exceptions:
        log.warning("mean accesses rise with frequency: %s", msg)
    return report


def monotonicity_exceptions(rows: list[BenchRow]) -> list[str]:
    """Places where mean accesses grow with frequency at a fixed length and index kind."""
    out = []
    groups: dict[tuple[str, int], list[BenchRow]] = {}
    for r in rows:
        if r.n_patterns:
            groups.setdefault((r.kind, r.m), []).append(r)
    for (kind, m), rs in sorted(groups.items()):
        rs.sort(key=lambda r: r.k)
        for a, b in zip(rs, rs[1:]):
            if b.mean_total > a.mean_total + 1e-12:
                out.append(f"{kind} m={m}: k={a.k} {a.mean_total:.3f} < k={b.k} {b.mean_total:.3f}")
    return out

