"""Bit-level building blocks: rank/select bitvectors, an Elias-Fano sparse
bitvector, a Huffman-shaped wavelet tree, packed integer arrays and
Elias-delta streams with sampled random access.

Every structure serializes to a framed record: an 8-byte little-endian
payload length followed by the payload.  Bit payloads are packed
least-significant-bit first into little-endian 64-bit words.
"""

from __future__ import annotations

import heapq
import struct
from bisect import bisect_left, bisect_right
from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64
_MASK64 = (1 << 64) - 1

_U64 = struct.Struct("<Q")


# --------------------------------------------------------------------------
# framing helpers


def frame(payload: bytes) -> bytes:
    return _U64.pack(len(payload)) + payload


def unframe(buf, offset: int) -> tuple[memoryview, int]:
    """Return the payload of the framed record at ``offset`` and the offset after it."""
    view = memoryview(buf)
    if offset + 8 > len(view):
        raise ValueError("truncated record header")
    (size,) = _U64.unpack_from(view, offset)
    start = offset + 8
    if start + size > len(view):
        raise ValueError("truncated record payload")
    return view[start:start + size], start + size


def _words_to_bytes(words: Sequence[int]) -> bytes:
    return np.asarray(words, dtype="<u8").tobytes()


def _bytes_to_words(raw) -> list[int]:
    if len(raw) % 8:
        raise ValueError("word payload not a multiple of 8 bytes")
    return np.frombuffer(raw, dtype="<u8").tolist()


def _bools_to_words(bits: np.ndarray) -> list[int]:
    nwords = (len(bits) + WORD_BITS - 1) // WORD_BITS
    padded = np.zeros(nwords * WORD_BITS, dtype=bool)
    padded[:len(bits)] = bits
    packed = np.packbits(padded, bitorder="little")
    return np.frombuffer(packed.tobytes(), dtype="<u8").tolist()


def _words_to_bools(words: Sequence[int], length: int) -> np.ndarray:
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].astype(bool)


_POP8 = [bin(v).count("1") for v in range(256)]
_SEL8 = [[k for k in range(8) if v >> k & 1] for v in range(256)]


def _select_in_word(word: int, r: int) -> int:
    shift = 0
    while True:
        byte = (word >> shift) & 0xFF
        c = _POP8[byte]
        if r < c:
            return shift + _SEL8[byte][r]
        r -= c
        shift += 8


# --------------------------------------------------------------------------
# plain bitvector


class BitVector:
    """Static bitvector with constant-time rank and logarithmic select.

    The directory holds the cumulative count of ones before every 64-bit
    word.  It is rebuilt on load and never serialized.
    """

    __slots__ = ("length", "ones", "_words", "_cum", "_cum0", "_tens")

    def __init__(self, bits: Iterable[int] | np.ndarray = ()):
        arr = np.asarray(bits if isinstance(bits, np.ndarray) else list(bits), dtype=bool)
        self._init_words(len(arr), _bools_to_words(arr))

    @classmethod
    def from_words(cls, length: int, words: Sequence[int]) -> "BitVector":
        bv = cls.__new__(cls)
        bv._init_words(length, list(words))
        return bv

    @classmethod
    def from_positions(cls, length: int, positions: Iterable[int]) -> "BitVector":
        arr = np.zeros(length, dtype=bool)
        pos = np.fromiter(positions, dtype=np.int64)
        if len(pos) and (pos.min() < 0 or pos.max() >= length):
            raise IndexError("bit position outside bitvector")
        arr[pos] = True
        return cls(arr)

    def _init_words(self, length: int, words: list[int]) -> None:
        need = (length + WORD_BITS - 1) // WORD_BITS
        if len(words) != need:
            raise ValueError(f"expected {need} words for {length} bits, got {len(words)}")
        if length % WORD_BITS and words and words[-1] >> (length % WORD_BITS):
            raise ValueError("padding bits must be zero")
        self.length = length
        self._words = words + [0]  # sentinel word keeps rank(length) branch-free
        counts = np.bitwise_count(np.asarray(words, dtype=np.uint64)).astype(np.int64)
        self._cum = [0] + np.cumsum(counts).tolist()
        self.ones = self._cum[-1]
        self._cum0 = None
        self._tens = None

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range [0, {self.length})")
        return (self._words[i >> 6] >> (i & 63)) & 1

    def __iter__(self):
        return iter(self.to_numpy().astype(np.uint8).tolist())

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitVector) and self.length == other.length
                and self._words == other._words)

    def to_numpy(self) -> np.ndarray:
        return _words_to_bools(self._words[:-1], self.length)

    @property
    def zeros(self) -> int:
        return self.length - self.ones

    def rank(self, i: int, bit: int = 1) -> int:
        """Number of ``bit`` values in positions ``[0, i)``."""
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} out of range [0, {self.length}]")
        w = i >> 6
        r = self._cum[w] + (self._words[w] & ((1 << (i & 63)) - 1)).bit_count()
        return r if bit else i - r

    def select(self, j: int, bit: int = 1) -> int:
        """Position of the ``j``-th (zero-based) occurrence of ``bit``."""
        cum = self._cum
        if bit:
            if not 0 <= j < self.ones:
                raise IndexError(f"select({j}, 1) with only {self.ones} ones")
            k = bisect_right(cum, j) - 1
            return (k << 6) + _select_in_word(self._words[k], j - cum[k])
        if not 0 <= j < self.zeros:
            raise IndexError(f"select({j}, 0) with only {self.zeros} zeros")
        if self._cum0 is None:
            self._cum0 = [(t << 6) - c for t, c in enumerate(cum)]
        cum0 = self._cum0
        k = bisect_right(cum0, j) - 1
        inv = ~self._words[k] & _MASK64
        return (k << 6) + _select_in_word(inv, j - cum0[k])

    def rank10(self, i: int) -> int:
        """Occurrences of the pattern ``10`` whose start index is below ``i``."""
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} out of range [0, {self.length}]")
        if self._tens is None:
            a = self.to_numpy()
            starts = np.zeros(self.length, dtype=bool)
            if self.length > 1:
                starts[:-1] = a[:-1] & ~a[1:]
            self._tens = BitVector(starts)
        return self._tens.rank(i, 1)

    @property
    def directory_bits(self) -> int:
        return 32 * len(self._cum)

    @property
    def overhead(self) -> float:
        """Rank directory size relative to the raw payload."""
        return self.directory_bits / max(self.length, 1)

    def to_bytes(self) -> bytes:
        return frame(_U64.pack(self.length) + _words_to_bytes(self._words[:-1]))

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["BitVector", int]:
        payload, end = unframe(buf, offset)
        (length,) = _U64.unpack_from(payload, 0)
        return cls.from_words(length, _bytes_to_words(payload[8:])), end

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitVector('{''.join(map(str, self))}')"
        return f"BitVector(length={self.length}, ones={self.ones})"


# --------------------------------------------------------------------------
# packed fixed-width integers


class PackedArray:
    """Fixed-width unsigned integers; width is the minimum for the largest value."""

    __slots__ = ("width", "_values")

    def __init__(self, values: Iterable[int] = (), width: int | None = None):
        vals = [int(v) for v in values]
        if any(v < 0 for v in vals):
            raise ValueError("PackedArray holds non-negative integers only")
        need = max(vals).bit_length() if vals else 0
        if width is None:
            width = need
        elif width < need:
            raise ValueError(f"width {width} too small for values needing {need} bits")
        if width > 64:
            raise ValueError("width above 64 bits")
        self.width = width
        self._values = vals

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, i):
        return self._values[i]

    def __iter__(self):
        return iter(self._values)

    def __eq__(self, other) -> bool:
        return isinstance(other, PackedArray) and self._values == other._values

    def tolist(self) -> list[int]:
        return list(self._values)

    @property
    def payload_bits(self) -> int:
        return self.width * len(self._values)

    def raw_bytes(self) -> bytes:
        """Values as consecutive ``width``-bit fields in 64-bit little-endian words."""
        n, w = len(self._values), self.width
        if not (n and w):
            return b""
        v = np.asarray(self._values, dtype=np.uint64)
        bits = ((v[:, None] >> np.arange(w, dtype=np.uint64)) & np.uint64(1)).astype(bool).ravel()
        return _words_to_bytes(_bools_to_words(bits))

    @classmethod
    def from_raw(cls, raw, width: int, n: int) -> "PackedArray":
        if not (n and width):
            return cls([0] * n, width=width)
        words = _bytes_to_words(raw)
        bits = _words_to_bools(words, n * width).reshape(n, width).astype(np.uint64)
        vals = (bits << np.arange(width, dtype=np.uint64)).sum(axis=1, dtype=np.uint64).tolist()
        return cls(vals, width=width)

    def to_bytes(self) -> bytes:
        return frame(struct.pack("<BQ", self.width, len(self._values)) + self.raw_bytes())

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["PackedArray", int]:
        payload, end = unframe(buf, offset)
        w, n = struct.unpack_from("<BQ", payload, 0)
        return cls.from_raw(payload[9:], w, n), end

    def __repr__(self) -> str:
        return f"PackedArray(width={self.width}, n={len(self._values)})"


# --------------------------------------------------------------------------
# Elias-Fano sparse bitvector


class SparseBitVector:
    """Elias-Fano (SD-array) encoding of a sparse bit set.

    Positions split into ``low`` bits stored verbatim and ``high`` parts
    stored in unary inside a plain bitvector with select support.
    """

    __slots__ = ("length", "ones", "_low_bits", "_lows", "_high")

    def __init__(self, length: int, positions: Iterable[int]):
        pos = sorted(int(p) for p in positions)
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")
        if pos and (pos[0] < 0 or pos[-1] >= length):
            raise IndexError("position outside universe")
        m = len(pos)
        low_bits = max(0, (length // m).bit_length() - 1) if m else 0
        mask = (1 << low_bits) - 1
        lows = [p & mask for p in pos]
        nhigh = (length >> low_bits) + 1
        high_pos = [(p >> low_bits) + i for i, p in enumerate(pos)]
        self._init(length, low_bits, lows, BitVector.from_positions(m + nhigh, high_pos))

    def _init(self, length, low_bits, lows, high) -> None:
        self.length = length
        self.ones = len(lows)
        self._low_bits = low_bits
        self._lows = lows
        self._high = high

    @classmethod
    def from_bitvector(cls, bv: BitVector) -> "SparseBitVector":
        return cls(bv.length, np.flatnonzero(bv.to_numpy()).tolist())

    def __len__(self) -> int:
        return self.length

    @property
    def zeros(self) -> int:
        return self.length - self.ones

    def select(self, j: int, bit: int = 1) -> int:
        if not bit:
            if not 0 <= j < self.zeros:
                raise IndexError(f"select({j}, 0) with only {self.zeros} zeros")
            # smallest p with rank0(p + 1) > j
            return bisect_right(range(self.length), j, key=lambda p: self.rank(p + 1, 0))
        if not 0 <= j < self.ones:
            raise IndexError(f"select({j}, 1) with only {self.ones} ones")
        return ((self._high.select(j, 1) - j) << self._low_bits) | self._lows[j]

    def rank(self, i: int, bit: int = 1) -> int:
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} out of range [0, {self.length}]")
        if i == self.length:
            r = self.ones
        else:
            hi = i >> self._low_bits
            start = self._high.select(hi - 1, 0) - (hi - 1) if hi else 0
            end = self._high.select(hi, 0) - hi
            r = bisect_left(self._lows, i & ((1 << self._low_bits) - 1), start, end)
        return r if bit else i - r

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range [0, {self.length})")
        return self.rank(i + 1) - self.rank(i)

    def positions(self) -> list[int]:
        return [self.select(j) for j in range(self.ones)]

    def to_bitvector(self) -> BitVector:
        return BitVector.from_positions(self.length, self.positions())

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseBitVector) and self.length == other.length
                and self._lows == other._lows and self._high == other._high)

    @property
    def payload_bits(self) -> int:
        return self._low_bits * self.ones + self._high.length

    def to_bytes(self) -> bytes:
        lows = PackedArray(self._lows, width=self._low_bits)
        head = struct.pack("<QB", self.length, self._low_bits)
        return frame(head + lows.to_bytes() + self._high.to_bytes())

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["SparseBitVector", int]:
        payload, end = unframe(buf, offset)
        length, low_bits = struct.unpack_from("<QB", payload, 0)
        lows, off = PackedArray.from_bytes(payload, 9)
        high, _ = BitVector.from_bytes(payload, off)
        sv = cls.__new__(cls)
        sv._init(length, low_bits, lows.tolist(), high)
        return sv, end

    def __repr__(self) -> str:
        return f"SparseBitVector(length={self.length}, ones={self.ones})"


def bv_rank(bv, i: int, pat=1) -> int:
    """Rank of a bit (0/1) or of the two-bit pattern ``"10"``."""
    if pat == "10":
        if isinstance(bv, SparseBitVector):
            bv = bv.to_bitvector()
        return bv.rank10(i)
    if pat in ("0", "1"):
        pat = int(pat)
    return bv.rank(i, pat)


def bv_select(bv, j: int, bit: int = 1) -> int:
    return bv.select(j, int(bit))


# --------------------------------------------------------------------------
# Huffman-shaped wavelet tree


def huffman_codes(freqs: dict[int, int]) -> dict[int, tuple[int, int]]:
    """Map symbol -> (code, length), code bits read most-significant first."""
    if not freqs:
        return {}
    if len(freqs) == 1:
        (sym,) = freqs
        return {sym: (0, 0)}
    heap = [(cnt, sym, sym) for sym, cnt in sorted(freqs.items())]
    heapq.heapify(heap)
    while len(heap) > 1:
        c1, k1, t1 = heapq.heappop(heap)
        c2, k2, t2 = heapq.heappop(heap)
        heapq.heappush(heap, (c1 + c2, min(k1, k2), (t1, t2)))
    codes = {}
    stack = [(heap[0][2], 0, 0)]
    while stack:
        node, code, depth = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], code << 1, depth + 1))
            stack.append((node[1], (code << 1) | 1, depth + 1))
        else:
            codes[node] = (code, depth)
    return codes


class WaveletTree:
    """Huffman-shaped wavelet tree over a sequence of small non-negative ints."""

    def __init__(self, seq: Sequence[int] | np.ndarray):
        arr = np.asarray(seq, dtype=np.int64)
        syms, counts = np.unique(arr, return_counts=True)
        codes = huffman_codes(dict(zip(syms.tolist(), counts.tolist())))
        self._setup(len(arr), codes)
        bitvectors: list[BitVector | None] = [None] * len(self._nodes)
        if len(self._nodes):
            table_size = int(syms.max()) + 1
            code_of = np.zeros(table_size, dtype=np.int64)
            len_of = np.zeros(table_size, dtype=np.int64)
            for s, (c, ln) in codes.items():
                code_of[s], len_of[s] = c, ln
            stack = [(0, arr, 0)]
            while stack:
                node, sub, depth = stack.pop()
                bits = ((code_of[sub] >> (len_of[sub] - 1 - depth)) & 1).astype(bool)
                bitvectors[node] = BitVector(bits)
                for side, part in ((0, sub[~bits]), (1, sub[bits])):
                    child = self._nodes[node][side]
                    if child >= 0:
                        stack.append((child, part, depth + 1))
        self._bvs = bitvectors

    def _setup(self, length: int, codes: dict[int, tuple[int, int]]) -> None:
        self.length = length
        self.codes = codes
        # internal nodes as [left, right]; leaves encoded as -1 - symbol
        nodes: list[list[int]] = []
        if codes and next(iter(codes.values()))[1] > 0:
            nodes.append([0, 0])
            for sym, (code, ln) in sorted(codes.items()):
                node = 0
                for depth in range(ln):
                    bit = (code >> (ln - 1 - depth)) & 1
                    if depth == ln - 1:
                        nodes[node][bit] = -1 - sym
                        continue
                    nxt = nodes[node][bit]
                    if nxt <= 0:  # 0 never names a child: the root is node 0
                        nodes.append([0, 0])
                        nxt = len(nodes) - 1
                        nodes[node][bit] = nxt
                    node = nxt
        self._nodes = nodes

    @property
    def alphabet(self) -> list[int]:
        return sorted(self.codes)

    def __len__(self) -> int:
        return self.length

    def rank(self, i: int, c: int) -> int:
        """Occurrences of ``c`` in the first ``i`` symbols; 0 for unknown symbols."""
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} out of range [0, {self.length}]")
        entry = self.codes.get(c)
        if entry is None:
            return 0
        code, ln = entry
        node = 0
        for depth in range(ln):
            bit = (code >> (ln - 1 - depth)) & 1
            i = self._bvs[node].rank(i, bit)
            node = self._nodes[node][bit]
        return i

    def access(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} out of range [0, {self.length})")
        if not self._nodes:
            return next(iter(self.codes))
        node = 0
        while node >= 0:
            bv = self._bvs[node]
            bit = bv[i]
            i = bv.rank(i, bit)
            node = self._nodes[node][bit]
        return -1 - node

    def __getitem__(self, i: int) -> int:
        return self.access(i)

    def tolist(self) -> list[int]:
        return [self.access(i) for i in range(self.length)]

    def range_symbols(self, lo: int, hi: int) -> list[tuple[int, int]]:
        """Distinct symbols in positions ``[lo, hi)`` with their counts, sorted by symbol."""
        if not 0 <= lo <= hi <= self.length:
            raise IndexError("range outside sequence")
        if lo == hi:
            return []
        if not self._nodes:
            return [(next(iter(self.codes)), hi - lo)]
        out = []
        stack = [(0, lo, hi)]
        while stack:
            node, a, b = stack.pop()
            if node < 0:
                out.append((-1 - node, b - a))
                continue
            bv = self._bvs[node]
            a1, b1 = bv.rank(a, 1), bv.rank(b, 1)
            if b1 > a1:
                stack.append((self._nodes[node][1], a1, b1))
            if (b - b1) > (a - a1):
                stack.append((self._nodes[node][0], a - a1, b - b1))
        return sorted(out)

    @property
    def payload_bits(self) -> int:
        return sum(bv.length for bv in self._bvs)

    def to_bytes(self) -> bytes:
        parts = [struct.pack("<QI", self.length, len(self.codes))]
        for sym, (code, ln) in sorted(self.codes.items()):
            parts.append(struct.pack("<IBQ", sym, ln, code))
        parts.extend(bv.to_bytes() for bv in self._bvs)
        return frame(b"".join(parts))

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["WaveletTree", int]:
        payload, end = unframe(buf, offset)
        length, nsym = struct.unpack_from("<QI", payload, 0)
        off = 12
        codes = {}
        for _ in range(nsym):
            sym, ln, code = struct.unpack_from("<IBQ", payload, off)
            codes[sym] = (code, ln)
            off += 13
        wt = cls.__new__(cls)
        wt._setup(length, codes)
        bvs = []
        for _ in wt._nodes:
            bv, off = BitVector.from_bytes(payload, off)
            bvs.append(bv)
        wt._bvs = bvs
        return wt, end

    def __eq__(self, other) -> bool:
        return (isinstance(other, WaveletTree) and self.length == other.length
                and self.codes == other.codes and self._bvs == other._bvs)


def wt_rank(wt: WaveletTree, i: int, c: int) -> int:
    return wt.rank(i, c)


# --------------------------------------------------------------------------
# bit streams and Elias-delta


class BitWriter:
    """Append-only bit stream, least-significant bit first within 64-bit words."""

    def __init__(self):
        self.words: list[int] = []
        self._cur = 0
        self._fill = 0
        self.nbits = 0

    def write(self, value: int, width: int) -> None:
        while width:
            take = min(64 - self._fill, width)
            self._cur |= (value & ((1 << take) - 1)) << self._fill
            value >>= take
            width -= take
            self._fill += take
            self.nbits += take
            if self._fill == 64:
                self.words.append(self._cur)
                self._cur = 0
                self._fill = 0

    def finish(self) -> list[int]:
        return self.words + ([self._cur] if self._fill else [])


class BitReader:
    def __init__(self, words: Sequence[int], nbits: int, pos: int = 0):
        self.words = words
        self.nbits = nbits
        self.pos = pos

    def read(self, width: int) -> int:
        if self.pos + width > self.nbits:
            raise ValueError("read past end of bit stream")
        out = 0
        got = 0
        words = self.words
        while got < width:
            w, off = divmod(self.pos, 64)
            take = min(64 - off, width - got)
            out |= ((words[w] >> off) & ((1 << take) - 1)) << got
            got += take
            self.pos += take
        return out

    def read_zeros(self) -> int:
        """Skip zeros up to and including the next 1 bit; return the zero count."""
        words = self.words
        start = self.pos
        w, off = divmod(start, 64)
        cur = words[w] >> off if w < len(words) else 0
        base = start
        while not cur:
            w += 1
            if w >= len(words):
                raise ValueError("unterminated unary code")
            base = w * 64
            cur = words[w]
        z = base - start + (cur & -cur).bit_length() - 1
        self.pos = start + z + 1
        if self.pos > self.nbits:
            raise ValueError("read past end of bit stream")
        return z


def delta_code_length(x: int) -> int:
    n = x.bit_length()
    ll = n.bit_length() - 1
    return 2 * ll + n


def write_delta(writer: BitWriter, x: int) -> None:
    """Elias-delta code of ``x >= 1``; length fields are stored LSB first."""
    if x < 1:
        raise ValueError("Elias-delta codes positive integers")
    n = x.bit_length()
    ll = n.bit_length() - 1
    writer.write(1 << ll, ll + 1)            # ll zeros then a 1
    writer.write(n & ((1 << ll) - 1), ll)
    writer.write(x & ((1 << (n - 1)) - 1), n - 1)


def read_delta(reader: BitReader) -> int:
    ll = reader.read_zeros()
    n = (1 << ll) | reader.read(ll)
    return (1 << (n - 1)) | reader.read(n - 1)


class DeltaStream:
    """Non-negative integers as Elias-delta codes of ``value + 1``.

    Every ``sample_rate`` values the bit offset and the running sum are
    sampled, so element ``i`` or the prefix sum up to ``i`` decode at
    most ``sample_rate`` codes.
    """

    def __init__(self, values: Iterable[int] = (), sample_rate: int = 64):
        if sample_rate < 1:
            raise ValueError("sample_rate must be >= 1")
        writer = BitWriter()
        pos, sums = [], []
        total = 0
        count = 0
        for v in values:
            v = int(v)
            if v < 0:
                raise ValueError("DeltaStream holds non-negative integers only")
            if count % sample_rate == 0:
                pos.append(writer.nbits)
                sums.append(total)
            write_delta(writer, v + 1)
            total += v
            count += 1
        self._init(count, sample_rate, writer.finish(), writer.nbits, pos, sums)

    def _init(self, count, sample_rate, words, nbits, pos, sums) -> None:
        self.count = count
        self.sample_rate = sample_rate
        self._words = words
        self.nbits = nbits
        self._pos = pos
        self._sums = sums

    def __len__(self) -> int:
        return self.count

    def _check(self, i: int) -> None:
        if not 0 <= i < self.count:
            raise IndexError(f"index {i} out of range [0, {self.count})")

    def access(self, i: int) -> int:
        self._check(i)
        k = i // self.sample_rate
        reader = BitReader(self._words, self.nbits, self._pos[k])
        for _ in range(i - k * self.sample_rate):
            read_delta(reader)
        return read_delta(reader) - 1

    __getitem__ = access

    def prefix_sum(self, i: int) -> int:
        """Sum of the first ``i`` values."""
        if not 0 <= i <= self.count:
            raise IndexError(f"prefix {i} out of range [0, {self.count}]")
        if not self._pos:
            return 0
        k = min(i // self.sample_rate, len(self._pos) - 1)
        reader = BitReader(self._words, self.nbits, self._pos[k])
        total = self._sums[k]
        for _ in range(i - k * self.sample_rate):
            total += read_delta(reader) - 1
        return total

    def tolist(self) -> list[int]:
        reader = BitReader(self._words, self.nbits)
        return [read_delta(reader) - 1 for _ in range(self.count)]

    def __iter__(self):
        return iter(self.tolist())

    def __eq__(self, other) -> bool:
        return (isinstance(other, DeltaStream) and self.count == other.count
                and self.sample_rate == other.sample_rate and self._words == other._words)

    @property
    def sample_bits(self) -> int:
        return 128 * len(self._pos)

    def to_bytes(self) -> bytes:
        head = struct.pack("<QQQ", self.count, self.sample_rate, self.nbits)
        body = (PackedArray(self._pos).to_bytes() + PackedArray(self._sums).to_bytes()
                + frame(_words_to_bytes(self._words)))
        return frame(head + body)

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple["DeltaStream", int]:
        payload, end = unframe(buf, offset)
        count, rate, nbits = struct.unpack_from("<QQQ", payload, 0)
        pos, off = PackedArray.from_bytes(payload, 24)
        sums, off = PackedArray.from_bytes(payload, off)
        raw, _ = unframe(payload, off)
        ds = cls.__new__(cls)
        ds._init(count, rate, _bytes_to_words(raw), nbits, pos.tolist(), sums.tolist())
        return ds, end

    def __repr__(self) -> str:
        return f"DeltaStream(n={self.count}, bits={self.nbits})"


def delta_encode(values: Iterable[int], sample_rate: int = 64) -> DeltaStream:
    return DeltaStream(values, sample_rate)


def delta_access(ds: DeltaStream, i: int) -> int:
    return ds.access(i)
