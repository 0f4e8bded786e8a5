"""Flat storage and contraction engine for symmetric order-d tensors.

Only entries indexed by strictly increasing d-tuples exist.  The flat layout is
colexicographic: the entry for the tuple t = (t_0 < t_1 < ... < t_{d-1}) lives at

    rank(t) = sum_j C(t_j, j+1)

(combinatorial number system), which is a bijection between increasing tuples over
[0, p) and [0, C(p,d)).  This gives O(1) addressing, cache-linear iteration and no
hash-map overhead.  Tuples with repeated indices are simply never represented.

A SymTensor is immutable after construction and safe to share read-only across
parallel workers.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .errors import CapacityError, DimensionError, InvalidIndexError

# Default cap on the number of stored entries (float64), ~1 GiB of data.
MAX_ENTRIES = 1 << 27

_MAGIC = b"KDSH"
_FORMAT_VERSION = 1


def binom(n: int, j: int) -> int:
    """Exact binomial coefficient, 0 outside the triangle."""
    if j < 0 or n < 0 or j > n:
        return 0
    return math.comb(n, j)


def checked_binom(n: int, j: int) -> int:
    """binom(n, j), rejected if it does not fit a signed 64-bit integer."""
    v = binom(n, j)
    if v > 0x7FFFFFFFFFFFFFFF:
        raise CapacityError(f"binom({n},{j}) = {v} overflows 64-bit sizing arithmetic")
    return v


def binom_table(n_max: int, j_max: int) -> np.ndarray:
    """int64 table B[n, j] = C(n, j) for 0 <= n <= n_max, 0 <= j <= j_max."""
    checked_binom(n_max, min(j_max, n_max // 2))
    tbl = np.zeros((n_max + 1, j_max + 1), dtype=np.int64)
    tbl[:, 0] = 1
    for n in range(1, n_max + 1):
        for j in range(1, j_max + 1):
            tbl[n, j] = tbl[n - 1, j - 1] + tbl[n - 1, j]
    return tbl


def rank(t, p: int) -> int:
    """Colex rank of the strictly increasing tuple t over [0, p)."""
    t = tuple(int(i) for i in t)
    if not t:
        raise InvalidIndexError("empty index tuple")
    prev = -1
    for i in t:
        if i <= prev:
            raise InvalidIndexError(f"tuple {t} is not strictly increasing")
        prev = i
    if t[-1] >= p:
        raise InvalidIndexError(f"index {t[-1]} out of range for p={p}")
    return sum(binom(i, j + 1) for j, i in enumerate(t))


def unrank(r: int, p: int, d: int) -> tuple:
    """Inverse of rank: the increasing d-tuple over [0, p) with colex rank r."""
    n = checked_binom(p, d)
    if not 0 <= r < n:
        raise InvalidIndexError(f"rank {r} out of range [0, {n}) for p={p}, d={d}")
    out = []
    # Greedy from the largest coordinate: t_j is the largest c with C(c, j+1) <= r.
    for j in range(d, 0, -1):
        c = j - 1
        while binom(c + 1, j) <= r:
            c += 1
        out.append(c)
        r -= binom(c, j)
    out.reverse()
    return tuple(out)


def colex_tuples(p: int, d: int) -> np.ndarray:
    """All increasing d-tuples over [0, p) as a (C(p,d), d) int32 array, colex order.

    Built iteratively: the block of d-tuples whose last index is v consists of the
    first C(v, d-1) rows of the (d-1)-tuple array with v appended.
    """
    if d < 1:
        raise InvalidIndexError("tuple order d must be >= 1")
    n = checked_binom(p, d)
    if n > MAX_ENTRIES:
        raise CapacityError(f"binom({p},{d}) = {n} exceeds the entry cap {MAX_ENTRIES}")
    cur = np.arange(p, dtype=np.int32).reshape(-1, 1)
    for dd in range(2, d + 1):
        out = np.empty((binom(p, dd), dd), dtype=np.int32)
        off = 0
        for v in range(dd - 1, p):
            m = binom(v, dd - 1)
            out[off : off + m, : dd - 1] = cur[:m]
            out[off : off + m, dd - 1] = v
            off += m
        cur = out
    return cur


def rank_rows(tuples: np.ndarray, p: int, d: int) -> np.ndarray:
    """Vectorized colex rank of each row of an (n, d) increasing-tuple array."""
    tbl = binom_table(p, d)
    r = np.zeros(len(tuples), dtype=np.int64)
    for j in range(d):
        r += tbl[tuples[:, j], j + 1]
    return r


class SymTensor:
    """Symmetric order-d tensor over p nodes, stored flat on increasing tuples."""

    __slots__ = ("p", "d", "data", "_tuples")

    def __init__(self, p: int, d: int, data: np.ndarray):
        n = checked_binom(p, d)
        data = np.asarray(data, dtype=np.float64)
        if data.shape != (n,):
            raise DimensionError(
                f"data length {data.shape} != binom({p},{d}) = {n}"
            )
        self.p = int(p)
        self.d = int(d)
        self.data = data
        self._tuples = None

    @classmethod
    def zeros(cls, p: int, d: int, max_entries: int = MAX_ENTRIES) -> "SymTensor":
        n = checked_binom(p, d)
        if n > max_entries:
            raise CapacityError(
                f"binom({p},{d}) = {n} exceeds the memory budget of {max_entries} entries"
            )
        return cls(p, d, np.zeros(n))

    @property
    def n_entries(self) -> int:
        return self.data.shape[0]

    @property
    def tuples(self) -> np.ndarray:
        """(n_entries, d) index array in colex order; built lazily, then cached."""
        if self._tuples is None:
            self._tuples = colex_tuples(self.p, self.d)
        return self._tuples

    def value(self, t) -> float:
        return float(self.data[rank(t, self.p)])

    def elementwise_square(self) -> "SymTensor":
        sq = SymTensor(self.p, self.d, self.data * self.data)
        sq._tuples = self._tuples
        return sq

    # -- binary dump/load: magic, version, p, d (u32 LE), then little-endian f64 --

    def dump(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<III", _FORMAT_VERSION, self.p, self.d))
            fh.write(self.data.astype("<f8", copy=False).tobytes())

    @classmethod
    def load(cls, path) -> "SymTensor":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise InvalidIndexError(f"bad magic {magic!r} in tensor file {path}")
            version, p, d = struct.unpack("<III", fh.read(12))
            if version != _FORMAT_VERSION:
                raise InvalidIndexError(f"unsupported tensor format version {version}")
            raw = fh.read()
        data = np.frombuffer(raw, dtype="<f8").astype(np.float64)
        return cls(p, d, data)


def elementwise_square(t: SymTensor) -> SymTensor:
    return t.elementwise_square()


def _leave_one_out_products(vals: np.ndarray) -> np.ndarray:
    """Row-wise products of all columns but one, via prefix/suffix products.

    Exact also in the presence of zeros (no division).
    """
    n, d = vals.shape
    pre = np.empty((n, d))
    suf = np.empty((n, d))
    pre[:, 0] = 1.0
    suf[:, d - 1] = 1.0
    for j in range(1, d):
        np.multiply(pre[:, j - 1], vals[:, j - 1], out=pre[:, j])
        np.multiply(suf[:, d - j], vals[:, d - j], out=suf[:, d - 1 - j])
    pre *= suf
    return pre


def contract_map(u: SymTensor, x: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """The node-indexed contraction on increasing tuples:

        out_i = sum over tuples t containing i of u_t * prod_{j in t, j != i} x_j.

    Single pass over all C(p,d) entries, scattering d contributions per entry
    (O(C(p,d) * d) instead of a per-node gather).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (u.p,):
        raise DimensionError(f"vector length {x.shape} != node count {u.p}")
    out = np.zeros(u.p)
    tuples = u.tuples
    for lo in range(0, u.n_entries, chunk):
        t = tuples[lo : lo + chunk]
        vals = u.data[lo : lo + chunk]
        loo = _leave_one_out_products(x[t])
        for a in range(u.d):
            out += np.bincount(t[:, a], weights=vals * loo[:, a], minlength=u.p)
    return out


def inner_with_power(y: SymTensor, x: np.ndarray, chunk: int = 1 << 22) -> float:
    """<Y, x^(outer d)> restricted to increasing tuples: sum_t Y_t * prod_{i in t} x_i.

    For a 0/1 vector x this is the total weight of the hyperedges inside the
    selected node set.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (y.p,):
        raise DimensionError(f"vector length {x.shape} != node count {y.p}")
    total = 0.0
    tuples = y.tuples
    for lo in range(0, y.n_entries, chunk):
        t = tuples[lo : lo + chunk]
        total += float(np.dot(y.data[lo : lo + chunk], np.prod(x[t], axis=1)))
    return total
