"""Dense graphs as bit-matrices, G(n,p) generation, and the edge-resampling noise operator.

Vertices are labeled 0..n-1.  Adjacency is stored one Python int per vertex
(bit v of ``rows[u]`` set iff uv is an edge), which gives O(1) edge queries and
word-parallel neighborhood intersection -- the hot loop shared by the samplers,
the independence tests, and the exact maximum-independent-set solver.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExceededError
from .seeding import make_rng

__all__ = [
    "VertexSet",
    "NoiseParams",
    "Graph",
    "gen_gnp",
    "resample_noise",
    "is_independent",
    "up_degree",
    "compatible_mask",
    "ell_up_degree",
    "induced_subgraph",
    "max_independent_set_size",
    "expected_zk",
    "expected_zk_log2",
    "d_j",
    "save_graph",
    "load_graph",
]

# Row-block height for generation keeps peak memory bounded while leaving the
# random stream's pair->draw mapping fixed (needed for common-random-numbers
# noise sweeps).  Must not change once results are committed.
_GEN_BLOCK_CELLS = 1 << 22
_DENSE_GEN_LIMIT = 1 << 14

_NOISE_TAG = 0x6E6F6973  # stream domain separator ("nois")


def _bit(v: int) -> int:
    return 1 << v


def full_mask(n: int) -> int:
    return (1 << n) - 1


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set-bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def nth_set_bit(mask: int, index: int) -> int:
    """Position of the ``index``-th (0-based) set bit of ``mask``."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    offset = 0
    while True:
        word = mask & 0xFFFFFFFFFFFFFFFF
        c = word.bit_count()
        if index < c:
            for _ in range(index):
                word &= word - 1
            return offset + (word & -word).bit_length() - 1
        index -= c
        mask >>= 64
        offset += 64
        if mask == 0:
            raise ValueError("fewer set bits than index")


@dataclass(frozen=True)
class VertexSet:
    """Subset of [n] as a bit-vector; doubles as a 0/1 indicator point.

    The squared Euclidean norm of the indicator equals ``size``.
    """

    n: int
    bits: int
    size: int = field(init=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits outside [0, 2^n)")
        object.__setattr__(self, "size", self.bits.bit_count())

    @classmethod
    def from_iter(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in vertices:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} outside [0,{n})")
            bits |= _bit(v)
        return cls(n, bits)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(n, 0)

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def contains(self, v: int) -> bool:
        return bool((self.bits >> v) & 1)

    def add(self, v: int) -> "VertexSet":
        return VertexSet(self.n, self.bits | _bit(v))

    def overlap(self, other: "VertexSet") -> int:
        """|self ∩ other| = inner product of the indicator vectors."""
        return (self.bits & other.bits).bit_count()

    def to_hex(self) -> str:
        return format(self.bits, "x")

    @classmethod
    def from_hex(cls, n: int, text: str) -> "VertexSet":
        return cls(n, int(text, 16))

    def __repr__(self):
        return f"VertexSet(n={self.n}, {{{','.join(map(str, self.members()))}}})"


@dataclass(frozen=True)
class NoiseParams:
    """Edge-resampling noise: each pair is redrawn Bernoulli(p) with probability s."""

    s: float
    p: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError("s must lie in [0,1]")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0,1)")


class Graph:
    """Undirected loop-free graph over n labeled vertices.

    ``rows[u]`` is the neighbor bitmask of u.  Instances are immutable after
    construction and safe to share across concurrent trials.  n = 0 is allowed
    so that induced subgraphs of the empty vertex set are representable.
    """

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: list[int], validate: bool = True):
        if n < 0:
            raise ValueError("n must be >= 0")
        if len(rows) != n:
            raise ValueError("rows length must equal n")
        self.n = n
        self.rows = rows
        self._hash: str | None = None
        if validate:
            self.validate()

    def validate(self) -> None:
        n, rows = self.n, self.rows
        fm = full_mask(n)
        for u in range(n):
            if rows[u] & ~fm:
                raise ValueError(f"row {u} has bits outside [0,{n})")
            if (rows[u] >> u) & 1:
                raise ValueError(f"self-loop at {u}")
        for u in range(n):
            for v in iter_bits(rows[u]):
                if v > u and not (rows[v] >> u) & 1:
                    raise ValueError(f"asymmetric edge {u},{v}")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, validate=False)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        fm = full_mask(n)
        return cls(n, [fm ^ _bit(v) for v in range(n)], validate=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside [0,{n})")
            rows[u] |= _bit(v)
            rows[v] |= _bit(u)
        return cls(n, rows, validate=False)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def from_bool_matrix(cls, adj: np.ndarray, validate: bool = True) -> "Graph":
        n = adj.shape[0]
        packed = np.packbits(adj.astype(bool), axis=1, bitorder="little")
        rows = [int.from_bytes(packed[u].tobytes(), "little") for u in range(n)]
        return cls(n, rows, validate=validate)

    def to_bool_matrix(self) -> np.ndarray:
        n = self.n
        nbytes = (n + 7) // 8
        buf = np.frombuffer(
            b"".join(r.to_bytes(nbytes, "little") for r in self.rows), dtype=np.uint8
        ).reshape(n, nbytes)
        return np.unpackbits(buf, axis=1, bitorder="little")[:, :n].astype(bool)

    def nonadjacency_words_above(self) -> np.ndarray:
        """(n, ceil(n/64)) uint64 table: word-packed {v' > v : v'v not an edge}.

        Feed for the compiled independent-set counting kernel.
        """
        n = self.n
        nwords = (n + 63) // 64
        out = np.zeros((n, nwords), dtype=np.uint64)
        fm = full_mask(n)
        nbytes = nwords * 8
        for v in range(n):
            mask = (~self.rows[v] & fm) & ~(full_mask(v + 1))
            out[v] = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint64)
        return out

    def edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.rows[u] >> (u + 1)):
                yield (u, u + 1 + v)

    def graph_hash(self) -> str:
        """sha256 over the packed adjacency bits; stable disorder-instance id."""
        if self._hash is None:
            h = hashlib.sha256()
            h.update(b"hcg-bits-v1")
            h.update(self.n.to_bytes(8, "little"))
            nbytes = (self.n + 7) // 8
            for r in self.rows:
                h.update(r.to_bytes(nbytes, "little"))
            self._hash = h.hexdigest()
        return self._hash

    def relabel(self, perm: list[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        rows = [0] * self.n
        for u in range(self.n):
            m = 0
            for v in iter_bits(self.rows[u]):
                m |= _bit(perm[v])
            rows[perm[u]] = m
        return Graph(self.n, rows, validate=False)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count()})"


def _gen_blocks(n: int):
    # Block geometry depends only on n, so the random stream's pair->draw
    # positions are reproducible across calls (common-random-numbers mode).
    block = max(1, _GEN_BLOCK_CELLS // max(n, 1))
    for r0 in range(0, n, block):
        yield r0, min(r0 + block, n)


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n,p): each unordered pair is an edge independently w.p. p.

    Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    if n > _DENSE_GEN_LIMIT:
        raise BudgetExceededError(
            f"gen_gnp dense path supports n <= {_DENSE_GEN_LIMIT}", n
        )
    rng = make_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    for r0, r1 in _gen_blocks(n):
        adj[r0:r1] = rng.random((r1 - r0, n)) < p
    upper = np.triu(adj, 1)
    return Graph.from_bool_matrix(upper | upper.T, validate=False)


def _float_key(x: float) -> int:
    """Stable 64-bit key of a float, for salting per-parameter random streams."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def resample_noise(
    g: Graph,
    params: NoiseParams,
    seed: int,
    common_random_numbers: bool = False,
) -> Graph:
    """Independently resample each unordered pair of ``g`` with probability s.

    A resampled pair becomes an edge with fresh probability p; at p = 1/2 this
    flips each edge with probability s/2.  Selection decisions and fresh edges
    come from two independent streams derived from ``seed``.  By default the
    selection stream is also salted with s, so sweeps over s at a fixed seed
    make independent selections; with ``common_random_numbers=True`` the same
    per-pair uniforms are thresholded at every s, nesting the selections.
    """
    n = g.n
    s, p = params.s, params.p
    if s == 0.0:
        return Graph(n, list(g.rows), validate=False)
    if common_random_numbers:
        root = np.random.SeedSequence([int(seed), _NOISE_TAG])
    else:
        root = np.random.SeedSequence([int(seed), _NOISE_TAG, _float_key(s)])
    sel_ss, fresh_ss = root.spawn(2)
    rng_sel = np.random.default_rng(sel_ss)
    rng_fresh = np.random.default_rng(fresh_ss)
    old = g.to_bool_matrix()
    new = np.zeros((n, n), dtype=bool)
    for r0, r1 in _gen_blocks(n):
        sel = rng_sel.random((r1 - r0, n)) < s
        fresh = rng_fresh.random((r1 - r0, n)) < p
        new[r0:r1] = np.where(sel, fresh, old[r0:r1])
    upper = np.triu(new, 1)
    return Graph.from_bool_matrix(upper | upper.T, validate=False)


def is_independent(g: Graph, s: VertexSet) -> bool:
    """True iff no edge of g has both endpoints in s; the empty set qualifies."""
    bits = s.bits
    rem = bits
    while rem:
        low = rem & -rem
        v = low.bit_length() - 1
        rem ^= low
        if g.rows[v] & bits:
            return False
    return True


def compatible_mask(g: Graph, bits: int) -> int:
    """Bitmask of vertices outside ``bits`` adjacent to none of its members."""
    cand = full_mask(g.n) & ~bits
    rem = bits
    while rem and cand:
        low = rem & -rem
        rem ^= low
        cand &= ~g.rows[low.bit_length() - 1]
    return cand


def _require_independent(g: Graph, s: VertexSet) -> None:
    if s.n != g.n:
        raise ValueError("vertex set and graph sizes differ")
    if not is_independent(g, s):
        raise ValueError("set is not independent in the graph")


def up_degree(g: Graph, s: VertexSet) -> int:
    """Number of single vertices that extend the independent set s."""
    _require_independent(g, s)
    return compatible_mask(g, s.bits).bit_count()


def _count_indep_subsets(g: Graph, cand: int, ell: int) -> int:
    """Count independent ell-subsets of the vertices in ``cand``."""
    if ell == 0:
        return 1
    if ell == 1:
        return cand.bit_count()
    total = 0
    rem = cand
    while rem:
        low = rem & -rem
        rem ^= low
        v = low.bit_length() - 1
        # only vertices above v remain: enforces one ordering per subset
        total += _count_indep_subsets(g, rem & ~g.rows[v], ell - 1)
    return total


def ell_up_degree(g: Graph, s: VertexSet, ell: int) -> int:
    """Number of independent ell-sets T, disjoint from s, with s ∪ T independent.

    ell=1 coincides with up_degree; ell=0 is 1 by convention.
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    _require_independent(g, s)
    if ell == 0:
        return 1
    return _count_indep_subsets(g, compatible_mask(g, s.bits), ell)


def induced_subgraph(g: Graph, s: VertexSet) -> Graph:
    """Subgraph on s with vertices relabeled 0..|s|-1 in ascending original order."""
    members = s.members()
    k = len(members)
    pos = {v: i for i, v in enumerate(members)}
    rows = [0] * k
    for i, v in enumerate(members):
        m = g.rows[v] & s.bits
        acc = 0
        for w in iter_bits(m):
            acc |= _bit(pos[w])
        rows[i] = acc
    return Graph(k, rows, validate=False)


def max_independent_set_size(g: Graph, vertex_cap: int = 64) -> int:
    """Exact maximum independent set cardinality by branch and bound.

    Intended for small graphs; rejects graphs above ``vertex_cap`` vertices.
    """
    if g.n == 0:
        return 0
    if g.n > vertex_cap:
        raise ValueError(
            f"exact solve capped at {vertex_cap} vertices (got {g.n})"
        )
    rows = g.rows
    best = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        count = cand.bit_count()
        if size + count <= best or count == 0:
            return
        # pivot on the max-degree candidate; include-branch first
        pivot, pivot_deg = -1, -1
        rem = cand
        while rem:
            low = rem & -rem
            rem ^= low
            v = low.bit_length() - 1
            d = (rows[v] & cand).bit_count()
            if d > pivot_deg:
                pivot, pivot_deg = v, d
        if pivot_deg <= 1:
            # matching plus isolated vertices: one pick per edge, rest free
            edges = sum((rows[v] & cand).bit_count() for v in iter_bits(cand)) // 2
            if size + count - edges > best:
                best = size + count - edges
            return
        pb = _bit(pivot)
        expand(cand & ~rows[pivot] & ~pb, size + 1)
        expand(cand & ~pb, size)

    expand(full_mask(g.n), 0)
    return best


def expected_zk(n: int, k: int, exact: bool = False):
    """Expected number of k-independent sets in G(n,1/2): C(n,k) * 2^(-C(k,2)).

    Log-space float by default; exact big-rational behind the flag.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if exact:
        return Fraction(math.comb(n, k), 1 << math.comb(k, 2))
    return 2.0 ** expected_zk_log2(n, k)


def expected_zk_log2(n: int, k: int) -> float:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    log2_binom = (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / math.log(2)
    return log2_binom - math.comb(k, 2)


def d_j(n: int, j: int) -> float:
    """Expected up-degree of a j-set in G(n,1/2): (n-j) * 2^(-j)."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    return (n - j) * 2.0 ** (-j)


def save_graph(g: Graph, path) -> None:
    """Write the text format: header ``hcg v1 <n>``, one ``u v`` line per edge."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"hcg v1 {g.n}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "hcg" or header[1] != "v1":
            raise ValueError(f"bad graph header in {path}")
        n = int(header[2])
        edges = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            u, v = map(int, line.split())
            if not u < v:
                raise ValueError(f"edge lines must have u < v, got {u} {v}")
            edges.append((u, v))
    g = Graph.from_edges(n, edges)
    g.validate()
    return g
