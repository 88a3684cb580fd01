"""Random Schreier graphs of rep-stable actions of G wr S_n and their spectra."""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .oracle import WreathElement

MAX_POINTS = 10**6
DENSE_LIMIT = 2000
TOL = 1e-8

ACTIONS = ("projection", "signed_points", "labeled_k_subsets")
_ALIASES = {"projection": "projection", "proj": "projection", "signed": "signed_points",
            "signed_points": "signed_points", "labeled": "labeled_k_subsets",
            "labeled_k_subsets": "labeled_k_subsets", "subsets": "labeled_k_subsets"}


@dataclass(frozen=True)
class ActionSpec:
    kind: str
    k: int = 1

    def __post_init__(self):
        kind = _ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown action {self.kind!r}; choose from {ACTIONS}")
        object.__setattr__(self, "kind", kind)

    @property
    def degree(self):
        """Stable degree of the permutation character."""
        return self.k if self.kind == "labeled_k_subsets" else 1


class PointSet:
    def __init__(self, spec, G, n):
        self.spec, self.G, self.n = spec, G, n
        m = G.order
        if spec.kind == "projection":
            size = n
        elif spec.kind == "signed_points":
            size = n * m
        else:
            size = math.comb(n, spec.k) * m**spec.k
        if size > MAX_POINTS:
            raise ValueError(f"|X| = {size} exceeds the cap {MAX_POINTS}")
        self.size = size
        if spec.kind == "labeled_k_subsets":
            self.points = [(A, f) for A in itertools.combinations(range(n), spec.k)
                           for f in itertools.product(range(m), repeat=spec.k)]
            self.index = {p: i for i, p in enumerate(self.points)}

    def __len__(self):
        return self.size

    def point(self, idx):
        if self.spec.kind == "projection":
            return idx
        if self.spec.kind == "signed_points":
            return divmod(idx, self.G.order)
        return self.points[idx]

    def apply(self, g, x):
        """g . x for a WreathElement g and a point (not an index)."""
        mul = self.G.mul
        if self.spec.kind == "projection":
            return g.sigma[x]
        if self.spec.kind == "signed_points":
            i, h = x
            j = g.sigma[i]
            return (j, int(mul[g.v[j], h]))
        A, f = x
        labels = dict(zip(A, f))
        sinv = {g.sigma[i]: i for i in range(self.n)}
        B = tuple(sorted(g.sigma[i] for i in A))
        return (B, tuple(int(mul[g.v[i], labels[sinv[i]]]) for i in B))

    def perm_array(self, g):
        """Index array x -> g.x."""
        if self.spec.kind == "projection":
            return np.array(g.sigma, dtype=np.int64)
        if self.spec.kind == "signed_points":
            m = self.G.order
            sig = np.array(g.sigma)
            v = np.array(g.v)
            i, h = np.divmod(np.arange(self.size), m)
            j = sig[i]
            return j * m + self.G.mul[v[j], h]
        return np.array([self.index[self.apply(g, p)] for p in self.points], dtype=np.int64)


def enumerate_points(spec, G, n):
    return PointSet(spec, G, n)


@dataclass
class SchreierGraph:
    size: int
    gens: list

    @property
    def r(self):
        return len(self.gens)

    def adjacency(self, sparse=False):
        X = self.size
        rows, cols = [], []
        for p in self.gens:
            rows.append(np.arange(X))
            cols.append(p)
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        P = sp.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(X, X)).tocsr()
        A = P + P.T
        return A if sparse else A.toarray()

    def relabel(self, perm):
        """Graph with vertex x renamed perm[x]."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        return SchreierGraph(self.size, [perm[p[inv]] for p in self.gens])


def random_schreier(spec, G, n, r, seed):
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    X = enumerate_points(spec, G, n)
    gens = []
    for _ in range(r):
        g = WreathElement.random(G, n, rng)
        arr = X.perm_array(g)
        if len(np.unique(arr)) != X.size:
            raise AssertionError("generator does not act bijectively")
        gens.append(arr)
    return SchreierGraph(X.size, gens)


@dataclass
class SpectralReport:
    mu: float
    lambda2: float
    lambda_min: float
    connected: bool
    components: int
    method: str
    tolerance: float
    trivial: bool = False
    converged: bool = True


def adjacency_mu(graph, dense_limit=DENSE_LIMIT):
    d = 2 * graph.r
    A = graph.adjacency(sparse=True)
    ncomp, labels = connected_components(A, directed=False)
    X = graph.size
    if X == ncomp:
        # every component is a single vertex: nothing nontrivial
        return SpectralReport(0.0, float("nan"), float("nan"), ncomp == 1, ncomp, "dense", TOL, trivial=True)
    if X <= dense_limit:
        nontrivial = []
        for c in range(ncomp):
            idx = np.nonzero(labels == c)[0]
            ev = np.linalg.eigvalsh(A[idx][:, idx].toarray())
            nontrivial.extend(ev[:-1])  # drop the constant eigenvalue d of this component
        ev = np.sort(np.array(nontrivial))
        lam2, lmin = float(ev[-1]), float(ev[0])
        return SpectralReport(max(lam2, -lmin), lam2, lmin, ncomp == 1, ncomp, "dense", TOL)
    sizes = np.bincount(labels)

    def project(x):
        means = np.bincount(labels, weights=x, minlength=ncomp) / sizes
        return x - means[labels]

    op = LinearOperator((X, X), matvec=lambda x: project(A @ project(np.ravel(x))), dtype=float)
    converged = True
    try:
        hi = eigsh(op, k=1, which="LA", tol=TOL, maxiter=10**5, return_eigenvectors=False)[0]
        lo = eigsh(op, k=1, which="SA", tol=TOL, maxiter=10**5, return_eigenvectors=False)[0]
    except ArpackNoConvergence as e:
        converged = False
        vals = e.eigenvalues if len(e.eigenvalues) else np.array([np.nan])
        hi = lo = float(vals[0])
    return SpectralReport(float(max(hi, -lo)), float(hi), float(lo), ncomp == 1, ncomp, "iterative", TOL,
                          converged=converged)


def hashimoto_matrix(graph):
    """Non-backtracking operator on the 2 r |X| directed edges."""
    X, r = graph.size, graph.r
    src, dst, rev = [], [], []
    E = r * X
    for i, p in enumerate(graph.gens):
        for x in range(X):
            src.append(x)
            dst.append(int(p[x]))
    src2 = src + dst
    dst2 = dst + src
    rev = list(range(E, 2 * E)) + list(range(E))
    M = 2 * E
    out_of = [[] for _ in range(X)]
    for e in range(M):
        out_of[src2[e]].append(e)
    B = np.zeros((M, M))
    for e in range(M):
        for f in out_of[dst2[e]]:
            if f != rev[e]:
                B[e, f] = 1.0
    return B


def hashimoto_nu(graph, max_edges=4000):
    """Largest |eigenvalue| of the non-backtracking operator other than 1 and d - 1."""
    if 2 * graph.r * graph.size > max_edges:
        raise ValueError("graph too large for the dense Hashimoto check")
    d = 2 * graph.r
    ev = scipy.linalg.eigvals(hashimoto_matrix(graph))
    keep = [abs(z) for z in ev if abs(z - 1) > 1e-6 and abs(z - (d - 1)) > 1e-6]
    nu = max(keep) if keep else 0.0
    return float(nu), bool(abs(nu - 1) < 1e-6)


def ihara_nu(graph):
    """nu predicted from the adjacency spectrum via mu^2 - lam mu + (d - 1) = 0."""
    d = 2 * graph.r
    A = graph.adjacency()
    ncomp, labels = connected_components(sp.csr_matrix(A), directed=False)
    best = 0.0
    for c in range(ncomp):
        idx = np.nonzero(labels == c)[0]
        ev = np.linalg.eigvalsh(A[np.ix_(idx, idx)])[:-1]
        for lam in ev:
            for z in np.roots([1.0, -lam, d - 1.0]):
                if abs(z - 1) > 1e-6 and abs(z - (d - 1)) > 1e-6:
                    best = max(best, abs(z))
    return best


def alon_bound(r):
    return 2 * math.sqrt(2 * r - 1)


def thm_bound(r, k):
    if r < 2:
        raise ValueError("r >= 2 required")
    return 2 * math.sqrt(2 * r - 1) * math.exp(2 * k * k / (math.e**2 * (2 * r - 1)))


CSV_COLUMNS = ["action", "G", "n", "r", "k", "trial", "seed", "X_size", "connected", "mu",
               "alon_bound", "thm_bound", "pass"]


def trial_seed(seed, n, trial):
    """Per-trial seed: first word of SeedSequence([seed, n, trial])."""
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1)[0])


def run_experiment(spec, G, n_list, r, trials, seed=1):
    rows = []
    bound = thm_bound(r, spec.degree)
    for n in n_list:
        for t in range(trials):
            s = trial_seed(seed, n, t)
            graph = random_schreier(spec, G, n, r, s)
            rep = adjacency_mu(graph)
            rows.append({"action": spec.kind, "G": G.name, "n": n, "r": r, "k": spec.degree, "trial": t,
                         "seed": s, "X_size": graph.size, "connected": rep.connected,
                         "mu": round(rep.mu, 10), "alon_bound": round(alon_bound(r), 10),
                         "thm_bound": round(bound, 10), "pass": bool(rep.mu <= bound)})
    return rows


def summarize(rows):
    out = {}
    for row in rows:
        s = out.setdefault(row["n"], {"trials": 0, "passed": 0, "min_mu": float("inf"), "max_mu": 0.0,
                                      "disconnected": 0})
        s["trials"] += 1
        s["passed"] += row["pass"]
        s["min_mu"] = min(s["min_mu"], row["mu"])
        s["max_mu"] = max(s["max_mu"], row["mu"])
        s["disconnected"] += not row["connected"]
    for s in out.values():
        s["pass_rate"] = s["passed"] / s["trials"]
    return out


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
