# -*- coding: utf-8 -*-

"""
Constructors mapping combinatorial relaxation families onto DNN-SDP data,
plus seeded random generators, a brute-force binary oracle, and readers
for the common external text formats.

Constraint rows are emitted in a documented canonical order per family
(diagonal / per-node rows ascending first, then the corner or trace row,
then any remaining families in their definition order), so Gram
factorizations are reproducible across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cones import FREE, NONNEG, ZERO, ConePattern
from .dnnsdp import DnnSdpProblem
from .linalg import SparseSymList, frob_inner, is_symmetric


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are (i, j) pairs with i < j."""

    n: int
    edges: tuple
    weights: Optional[dict] = None

    def __post_init__(self):
        seen = set()
        for (i, j) in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j})")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    def weight(self, i: int, j: int) -> float:
        if self.weights is None:
            return 1.0
        return float(self.weights.get((i, j), self.weights.get((j, i), 0.0)))

    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for (i, j) in self.edges:
            w[i, j] = w[j, i] = self.weight(i, j)
        return w


@dataclass(frozen=True)
class BiqData:
    """Binary quadratic data: minimize x'Qx/2 + <c, x> over binary x."""

    Q: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if not is_symmetric(self.Q, 1e-10):
            raise ValueError("Q must be symmetric")
        if self.Q.shape[0] != len(self.c):
            raise ValueError("Q and c dimensions disagree")

    @property
    def n(self) -> int:
        return len(self.c)


def _row(i, j, v):
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    v = np.asarray(v, dtype=float)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    return (lo, hi, v)


def build_biq(d: BiqData, name: str = "biq") -> DnnSdpProblem:
    """Order n+1 relaxation of the binary quadratic problem.

    Rows: n rows pinning diag(Y) to the linear column (ascending), then
    the corner row fixing the lower-right entry to 1.
    """
    n = d.n
    order = n + 1
    C = np.zeros((order, order))
    C[:n, :n] = 0.5 * d.Q
    C[:n, n] = 0.5 * d.c
    C[n, :n] = 0.5 * d.c
    rows = []
    b = np.zeros(n + 1)
    for i in range(n):
        rows.append(_row([i, i], [i, n], [1.0, -0.5]))
    rows.append(_row([order - 1], [order - 1], [1.0]))
    b[n] = 1.0
    a_e = SparseSymList(order, rows)
    return DnnSdpProblem(
        n=order, C=C, A_E=a_e, b_E=b,
        pattern=ConePattern.all_nonneg(order),
        meta={"family": "biq", "name": name, "obj_sense": "min", "obj_offset": 0.0})


def ext_biq_inequality_rows(n: int):
    """Index sets of the valid cuts added to the order n+1 relaxation.

    Pairwise cuts run over all i < j with j up to n-2 (0-based), three
    rows per pair in the listed order; triangle rows run over unordered
    triples i < j < k. Returns (pair list, triple list).
    """
    pairs = [(i, j) for j in range(1, n - 1) for i in range(j)]
    triples = list(itertools.combinations(range(n), 3))
    return pairs, triples


def build_ext_biq(d: BiqData, name: str = "ebiq", triangle_cap: Optional[int] = None,
                  cap_seed: int = 0) -> DnnSdpProblem:
    """BIQ relaxation plus the pairwise and triangle valid cuts.

    For n > 25 (or when ``triangle_cap`` is given) the O(n^3) triangle
    family is subsampled uniformly with the given seed.
    """
    base = build_biq(d, name)
    n = d.n
    corner = n
    pairs, triples = ext_biq_inequality_rows(n)
    if triangle_cap is None and n > 25:
        triangle_cap = 2000
    if triangle_cap is not None and len(triples) > triangle_cap:
        rng = np.random.default_rng(cap_seed)
        keep = rng.choice(len(triples), size=triangle_cap, replace=False)
        triples = [triples[t] for t in sorted(keep)]
    rows = []
    b = []
    for (i, j) in pairs:
        rows.append(_row([i, i], [j, corner], [-0.5, 0.5]))     # -Y_ij + x_i >= 0
        b.append(0.0)
        rows.append(_row([i, j], [j, corner], [-0.5, 0.5]))     # -Y_ij + x_j >= 0
        b.append(0.0)
        rows.append(_row([i, i, j], [j, corner, corner], [0.5, -0.5, -0.5]))
        b.append(-1.0)                                          # Y_ij - x_i - x_j >= -1
    for (i, j, k) in triples:
        rows.append(_row([i, i, j, i, j, k],
                         [j, k, k, corner, corner, corner],
                         [0.5, 0.5, 0.5, -0.5, -0.5, -0.5]))
        b.append(-1.0)
    a_i = SparseSymList(n + 1, rows)
    meta = dict(base.meta)
    meta.update({"family": "ebiq", "name": name})
    return DnnSdpProblem(
        n=n + 1, C=base.C, A_E=base.A_E, b_E=base.b_E,
        A_I=a_i, b_I=np.asarray(b), pattern=base.pattern, meta=meta)


def build_theta_plus(g: Graph, name: str = "theta") -> DnnSdpProblem:
    """Entrywise-nonnegative stable-set relaxation.

    Rows: one vanishing-entry row per edge (lexicographic), then the unit
    trace row.
    """
    n = g.n
    rows = [_row([i], [j], [1.0]) for (i, j) in sorted(g.edges)]
    rows.append(_row(list(range(n)), list(range(n)), [1.0] * n))
    b = np.zeros(len(rows))
    b[-1] = 1.0
    a_e = SparseSymList(n, rows)
    return DnnSdpProblem(
        n=n, C=-np.ones((n, n)), A_E=a_e, b_E=b,
        pattern=ConePattern.all_nonneg(n),
        meta={"family": "theta", "name": name, "obj_sense": "max", "obj_offset": 0.0})


def build_rcp(w: np.ndarray, kappa: int, name: str = "rcp") -> DnnSdpProblem:
    """Clustering relaxation: minimize <W, I - X> over doubly stochastic-ish
    PSD X with trace kappa.

    Rows: n row-sum rows ascending, then the trace row.
    """
    w = np.asarray(w, dtype=float)
    n = w.shape[0]
    if not is_symmetric(w, 1e-10):
        raise ValueError("affinity matrix must be symmetric")
    if not 1 <= kappa <= n:
        raise ValueError(f"kappa must lie in [1, {n}]")
    rows = []
    for i in range(n):
        idx_i = np.full(n, i)
        idx_j = np.arange(n)
        vals = np.where(idx_j == i, 1.0, 0.5)
        rows.append(_row(idx_i, idx_j, vals))
    rows.append(_row(list(range(n)), list(range(n)), [1.0] * n))
    b = np.ones(n + 1)
    b[n] = float(kappa)
    a_e = SparseSymList(n, rows)
    return DnnSdpProblem(
        n=n, C=-w, A_E=a_e, b_E=b, pattern=ConePattern.all_nonneg(n),
        meta={"family": "rcp", "name": name, "obj_sense": "min",
              "obj_offset": float(np.trace(w))})


def build_fap(g: Graph, u_edges: Sequence[tuple], kappa: int,
              name: str = "fap") -> DnnSdpProblem:
    """Frequency-assignment relaxation with a shifted pattern cone.

    Equalities pin the diagonal to one (ascending). The shift matrix has
    -1/(kappa-1) on every edge; edges in U are Zero-kind (their shifted
    entries are pinned), the remaining edges NonNeg, everything else Free.
    """
    if kappa < 2:
        raise ValueError("kappa must be an integer > 1")
    u_set = {(min(i, j), max(i, j)) for (i, j) in u_edges}
    if not u_set <= set(g.edges):
        raise ValueError("U must be a subset of the edge set")
    n = g.n
    w = g.weight_matrix()
    lap = np.diag(w.sum(axis=1)) - w
    obj = ((kappa - 1) / (2.0 * kappa)) * lap - 0.5 * np.diag(w.sum(axis=1))
    rows = [_row([i], [i], [1.0]) for i in range(n)]
    b = np.ones(n)
    a_e = SparseSymList(n, rows)
    m = np.zeros((n, n))
    kinds = np.full((n, n), FREE, dtype=np.int8)
    for (i, j) in g.edges:
        m[i, j] = m[j, i] = -1.0 / (kappa - 1)
        kind = ZERO if (i, j) in u_set else NONNEG
        kinds[i, j] = kinds[j, i] = kind
    return DnnSdpProblem(
        n=n, C=-obj, A_E=a_e, b_E=b, M=m, pattern=ConePattern(kinds),
        meta={"family": "fap", "name": name, "obj_sense": "max", "obj_offset": 0.0})


MAX_QAP_ORDER = 8


def build_qap(a: np.ndarray, b: np.ndarray, name: str = "qap") -> DnnSdpProblem:
    """Assignment relaxation over the lifted n^2 x n^2 matrix.

    Rows per family, in order: the block-sum-to-identity rows (one per
    upper-triangle entry (r, s), row-major), the per-block trace rows
    (blocks (i, j) with i <= j, row-major), then the per-block all-ones
    rows in the same block order. The trace and all-ones rows of the last
    diagonal block are implied by the rest (the families are rank
    deficient by exactly two) and are omitted so the equality map stays
    surjective.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    if a.shape != b.shape or not is_symmetric(a, 1e-10) or not is_symmetric(b, 1e-10):
        raise ValueError("A and B must be symmetric of the same order")
    if n > MAX_QAP_ORDER:
        raise ValueError(f"order {n} exceeds the desk-scale cap {MAX_QAP_ORDER} "
                         f"(lifted order would be {n * n})")
    order = n * n
    rows = []
    rhs = []
    # sum_i Y^{ii} = I, entry (r, s)
    for r in range(n):
        for s in range(r, n):
            ii = np.array([i * n + r for i in range(n)])
            jj = np.array([i * n + s for i in range(n)])
            vv = np.full(n, 1.0 if r == s else 0.5)
            rows.append(_row(ii, jj, vv))
            rhs.append(1.0 if r == s else 0.0)
    # <I, Y^{ij}> = delta_ij (last diagonal block implied, omitted)
    for i in range(n):
        for j in range(i, n):
            if i == j == n - 1:
                continue
            ii = np.array([i * n + r for r in range(n)])
            jj = np.array([j * n + r for r in range(n)])
            vv = np.full(n, 1.0 if i == j else 0.5)
            rows.append(_row(ii, jj, vv))
            rhs.append(1.0 if i == j else 0.0)
    # <ones, Y^{ij}> = 1 (last diagonal block implied, omitted)
    for i in range(n):
        for j in range(i, n):
            if i == j == n - 1:
                continue
            if i == j:
                rr, ss = np.triu_indices(n)
                ii = i * n + rr
                jj = j * n + ss
                vv = np.ones(rr.size)
            else:
                rr, ss = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
                ii = (i * n + rr).ravel()
                jj = (j * n + ss).ravel()
                vv = np.full(ii.size, 0.5)
            rows.append(_row(ii, jj, vv))
            rhs.append(1.0)
    a_e = SparseSymList(order, rows)
    c = np.kron(b, a)
    return DnnSdpProblem(
        n=order, C=c, A_E=a_e, b_E=np.asarray(rhs),
        pattern=ConePattern.all_nonneg(order),
        meta={"family": "qap", "name": name, "obj_sense": "min", "obj_offset": 0.0})


def family_objective(prob: DnnSdpProblem, x: np.ndarray) -> float:
    """The original family objective value at a primal matrix X."""
    cx = frob_inner(prob.C, x)
    sense = prob.meta.get("obj_sense", "max")
    offset = prob.meta.get("obj_offset", 0.0)
    return offset + (cx if sense == "min" else -cx)


def brute_force_biq(d: BiqData) -> float:
    """Exact binary minimum by enumeration; refuses n > 20."""
    n = d.n
    if n > 20:
        raise ValueError("enumeration limited to n <= 20")
    best = np.inf
    chunk = 1 << 14
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        x = ((codes[:, None] >> shifts) & 1).astype(float)
        vals = 0.5 * np.einsum("bi,ij,bj->b", x, d.Q, x) + x @ d.c
        best = min(best, float(vals.min()))
    return best


# ---------------------------------------------------------------------------
# Seeded random generators (the primary desk-scale instance source).

def random_biq(n: int, seed: int) -> BiqData:
    rng = np.random.default_rng(seed)
    q = rng.integers(-10, 11, size=(n, n)).astype(float)
    q = np.triu(q, 1)
    q = q + q.T
    np.fill_diagonal(q, rng.integers(-10, 11, size=n).astype(float))
    c = rng.integers(-10, 11, size=n).astype(float)
    return BiqData(Q=q, c=c)


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                  if rng.random() < p)
    return Graph(n=n, edges=edges)


def random_weighted_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    edges = []
    weights = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j))
                weights[(i, j)] = float(rng.integers(1, 11))
    return Graph(n=n, edges=tuple(edges), weights=weights)


def gaussian_affinity(points: np.ndarray, bandwidth: float = 1.0) -> np.ndarray:
    """Gaussian-kernel affinity W_ij = exp(-||p_i - p_j||^2 / (2 h^2))."""
    points = np.asarray(points, dtype=float)
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    return np.exp(-d2 / (2.0 * bandwidth ** 2))


def random_rcp(n: int, seed: int, kappa: int = 2) -> DnnSdpProblem:
    """Two-cluster points in the plane with a Gaussian-kernel affinity."""
    rng = np.random.default_rng(seed)
    half = n // 2
    pts = np.vstack([
        rng.normal(loc=(-2.0, 0.0), scale=0.5, size=(half, 2)),
        rng.normal(loc=(2.0, 0.0), scale=0.5, size=(n - half, 2)),
    ])
    w = gaussian_affinity(pts, bandwidth=1.0)
    return build_rcp(w, kappa, name=f"rcp{n}s{seed}")


def random_fap(n: int, seed: int, p: float = 0.4, kappa: int = 3,
               u_fraction: float = 0.25) -> DnnSdpProblem:
    # kappa = 2 pins the U-edge entries of X at -1, which together with the
    # unit diagonal puts every feasible point on the psd boundary; kappa >= 3
    # keeps the pinned value at -1/(kappa-1) and the instances well behaved.
    g = random_weighted_graph(n, p, seed)
    rng = np.random.default_rng(seed + 1)
    edges = sorted(g.edges)
    n_u = max(1, int(u_fraction * len(edges))) if edges else 0
    if not edges:
        raise ValueError("random graph came out empty; use a larger p or n")
    keep = rng.choice(len(edges), size=n_u, replace=False)
    u = [edges[k] for k in sorted(keep)]
    return build_fap(g, u, kappa, name=f"fap{n}s{seed}")


def random_qap(n: int, seed: int) -> DnnSdpProblem:
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 10, size=(n, n)).astype(float)
    a = symupper(a)
    b = rng.integers(0, 10, size=(n, n)).astype(float)
    b = symupper(b)
    return build_qap(a, b, name=f"qap{n}s{seed}")


def symupper(a: np.ndarray) -> np.ndarray:
    out = np.triu(a)
    return out + np.triu(out, 1).T


# ---------------------------------------------------------------------------
# External text-format readers (optional inputs; lenient on whitespace,
# strict on counts).

def read_biqmac(path) -> BiqData:
    """Read the sparse triple format: header "n m", then m lines "i j v"
    (1-based). The file encodes max x'Rx over binary x; this is converted
    to the min x'Qx/2 + <c, x> form with Q = -2 (R - Diag(R)) and
    c = -diag(R), using x_i^2 = x_i.
    """
    tokens = _tokens(path)
    if len(tokens) < 2:
        raise ValueError("truncated header: expected 'n m'")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 3 * m:
        raise ValueError(f"expected {3 * m} entry tokens, found {len(body)}")
    r = np.zeros((n, n))
    for k in range(m):
        i = int(body[3 * k]) - 1
        j = int(body[3 * k + 1]) - 1
        v = float(body[3 * k + 2])
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"entry {k}: index out of range")
        r[i, j] = v
        r[j, i] = v
    q = -2.0 * (r - np.diag(np.diag(r)))
    c = -np.diag(r).copy()
    return BiqData(Q=q, c=c)


def read_qaplib(path):
    """Read "n, then A rows, then B rows"; returns (A, B)."""
    tokens = _tokens(path)
    if not tokens:
        raise ValueError("empty file")
    n = int(tokens[0])
    need = 1 + 2 * n * n
    if len(tokens) != need:
        raise ValueError(f"expected {need} tokens for order {n}, found {len(tokens)}")
    vals = np.asarray([float(t) for t in tokens[1:]], dtype=float)
    a = vals[:n * n].reshape(n, n)
    b = vals[n * n:].reshape(n, n)
    return a, b


def read_dimacs(path) -> Graph:
    """Read the edge format: "p edge n m" then m lines "e i j" (1-based);
    comment lines starting with "c" are skipped."""
    n = None
    m = None
    edges = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                if len(parts) < 4 or parts[1] != "edge":
                    raise ValueError(f"line {lineno}: malformed problem line")
                n, m = int(parts[2]), int(parts[3])
            elif parts[0] == "e":
                if n is None:
                    raise ValueError(f"line {lineno}: edge before problem line")
                i, j = int(parts[1]) - 1, int(parts[2]) - 1
                if i == j:
                    raise ValueError(f"line {lineno}: self-loop")
                edges.add((min(i, j), max(i, j)))
            else:
                raise ValueError(f"line {lineno}: unknown record '{parts[0]}'")
    if n is None:
        raise ValueError("missing problem line")
    if m is not None and len(edges) != m:
        raise ValueError(f"edge count mismatch: header says {m}, found {len(edges)}")
    return Graph(n=n, edges=tuple(sorted(edges)))


def _tokens(path) -> list:
    with open(path) as fh:
        return fh.read().split()
