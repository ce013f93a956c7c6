"""Text ingestion and suffix array / LCP / BWT construction.

Texts are byte strings terminated by a unique sentinel byte ``0x00``;
interior null bytes are mapped to ``0xFF`` on ingestion.  The reversed
context describes ``reverse(T[0..n-1])`` followed by its own sentinel.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SENTINEL = 0
NULL_REPLACEMENT = 0xFF


class EmptyTextError(ValueError):
    pass


@dataclass(frozen=True)
class TextCorpus:
    data: bytes  # the n text symbols, sentinel excluded

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def alphabet(self) -> list[int]:
        return sorted(set(self.data))

    @property
    def sigma(self) -> int:
        return len(set(self.data))

    def symbols(self) -> np.ndarray:
        """The n+1 symbols of T including the trailing sentinel."""
        out = np.empty(self.n + 1, dtype=np.uint8)
        out[:self.n] = np.frombuffer(self.data, dtype=np.uint8)
        out[self.n] = SENTINEL
        return out

    def reversed(self) -> "TextCorpus":
        return TextCorpus(self.data[::-1])


def normalize(raw: bytes) -> bytes:
    return bytes(raw).replace(b"\x00", bytes([NULL_REPLACEMENT]))


def ingest(raw: bytes) -> TextCorpus:
    if not raw:
        raise EmptyTextError("no indexable text")
    return TextCorpus(normalize(raw))


def suffix_array(t: np.ndarray) -> np.ndarray:
    """Prefix-doubling suffix sort; ``t`` must end with a unique smallest symbol."""
    n = len(t)
    rank = t.astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[:n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        step = np.empty(n, dtype=np.int64)
        step[0] = 0
        step[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = np.cumsum(step)
        if rank[sa[-1]] == n - 1:
            return sa
        k *= 2


def kasai_lcp(t: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """LCP[i] = lcp(suffix SA[i-1], suffix SA[i]); LCP[0] is stored as 0."""
    n = len(t)
    text = t.tolist()
    sal = sa.tolist()
    isa = [0] * n
    for i, p in enumerate(sal):
        isa[p] = i
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = isa[p]
        if r == 0:
            h = 0
            continue
        q = sal[r - 1]
        while p + h < n and q + h < n and text[p + h] == text[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


@dataclass
class SuffixContext:
    text: np.ndarray  # n+1 symbols including the sentinel
    sa: np.ndarray
    lcp: np.ndarray
    bwt: np.ndarray
    C: np.ndarray  # C[c] = number of symbols smaller than c, for c in 0..256
    reversed: bool = False
    _occ: list | None = field(default=None, repr=False)
    _isa: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.text) - 1

    @property
    def size(self) -> int:
        return len(self.text)

    @property
    def isa(self) -> np.ndarray:
        if self._isa is None:
            isa = np.empty_like(self.sa)
            isa[self.sa] = np.arange(len(self.sa))
            self._isa = isa
        return self._isa

    def occurrences(self) -> list[list[int]]:
        """Per-symbol sorted BWT positions, for O(log n) BWT rank."""
        if self._occ is None:
            order = np.argsort(self.bwt, kind="stable")
            bounds = np.searchsorted(self.bwt[order], np.arange(257))
            self._occ = [order[bounds[c]:bounds[c + 1]].tolist() for c in range(256)]
        return self._occ

    def bwt_rank(self, i: int, c: int) -> int:
        if not 0 <= c < 256:
            return 0
        return bisect_left(self.occurrences()[c], i)

    def lf(self, i: int) -> int:
        c = int(self.bwt[i])
        return int(self.C[c]) + self.bwt_rank(i, c)

    def suffix(self, i: int) -> bytes:
        return self.text[int(self.sa[i]):].tobytes()

    def save_sidecars(self, directory: Path, stem: str) -> None:
        directory = Path(directory)
        for name in ("sa", "lcp", "bwt"):
            arr = getattr(self, name).astype("<u8")
            arr.tofile(directory / f"{stem}.{name}")


def build_suffix_context(corpus: TextCorpus, reversed: bool = False) -> SuffixContext:
    src = corpus.reversed() if reversed else corpus
    t = src.symbols()
    sa = suffix_array(t)
    lcp = kasai_lcp(t, sa)
    bwt = t[(sa - 1) % len(t)]
    counts = np.bincount(t, minlength=256)
    C = np.zeros(257, dtype=np.int64)
    C[1:] = np.cumsum(counts)
    return SuffixContext(t, sa, lcp, bwt, C, reversed)


def load_sidecars(corpus: TextCorpus, directory: Path, stem: str,
                  reversed: bool = False) -> SuffixContext:
    directory = Path(directory)
    src = corpus.reversed() if reversed else corpus
    t = src.symbols()
    sa, lcp, bwt = (np.fromfile(directory / f"{stem}.{name}", dtype="<u8").astype(np.int64)
                    for name in ("sa", "lcp", "bwt"))
    counts = np.bincount(t, minlength=256)
    C = np.zeros(257, dtype=np.int64)
    C[1:] = np.cumsum(counts)
    return SuffixContext(t, sa, lcp, bwt.astype(np.uint8), C, reversed)


def naive_locate(corpus: TextCorpus, pattern: bytes) -> list[int]:
    if not pattern:
        raise ValueError("empty pattern")
    data = corpus.data
    out = []
    i = data.find(pattern)
    while i >= 0:
        out.append(i)
        i = data.find(pattern, i + 1)
    return out


def naive_count(corpus: TextCorpus, pattern: bytes) -> int:
    return len(naive_locate(corpus, pattern))


def fm_backward_step(ctx: SuffixContext, state: tuple[int, int], c: int) -> tuple[int, int]:
    """Interval of suffixes prefixed by ``c`` followed by the current match.

    An empty result has ``lb > rb``.
    """
    lb, rb = state
    if not (0 <= lb <= rb + 1 <= ctx.size):
        raise ValueError(f"invalid interval {state}")
    if not 0 <= c < 256:
        return (1, 0)
    base = int(ctx.C[c])
    return base + ctx.bwt_rank(lb, c), base + ctx.bwt_rank(rb + 1, c) - 1


def backward_search_trace(ctx: SuffixContext, symbols: bytes) -> list[tuple[int, int]]:
    """Intervals after prepending each of ``symbols`` in turn, from the full range."""
    state = (0, ctx.size - 1)
    out = []
    for c in symbols:
        state = fm_backward_step(ctx, state, c)
        out.append(state)
        if state[0] > state[1]:
            break
    return out


def invert_bwt(ctx: SuffixContext) -> bytes:
    """Rebuild the text (without sentinel) by walking LF from the sentinel row."""
    n = ctx.n
    out = bytearray(n)
    i = 0  # row of the sentinel suffix
    for k in range(n - 1, -1, -1):
        c = int(ctx.bwt[i])
        out[k] = c
        i = int(ctx.C[c]) + ctx.bwt_rank(i, c)
    return bytes(out)
