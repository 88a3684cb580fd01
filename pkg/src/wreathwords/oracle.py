"""Ground truth on G wr S_n: element arithmetic, direct evaluation, enumeration and sampling."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exactnum import CycloNumber
from .stable import MultiPartition, StableFunction

DEFAULT_BUDGET = 10**8


class OracleBudgetExceeded(RuntimeError):
    pass


class WreathElement:
    """(v, sigma) with sigma an image array and v a tuple of G ids."""

    __slots__ = ("G", "v", "sigma")

    def __init__(self, G, v, sigma):
        if len(v) != len(sigma):
            raise ValueError("v and sigma have different lengths")
        if sorted(sigma) != list(range(len(sigma))):
            raise ValueError("sigma is not a permutation")
        self.G = G
        self.v = tuple(int(x) for x in v)
        self.sigma = tuple(int(x) for x in sigma)

    @property
    def n(self):
        return len(self.sigma)

    @classmethod
    def identity(cls, G, n):
        return cls(G, [G.identity] * n, range(n))

    @classmethod
    def random(cls, G, n, rng):
        rng = np.random.default_rng(rng)
        return cls(G, rng.integers(0, G.order, size=n), rng.permutation(n))

    def __mul__(self, other):
        if other.n != self.n:
            raise ValueError("size mismatch")
        mul = self.G.mul
        s1 = self.sigma
        s1inv = [0] * self.n
        for i, j in enumerate(s1):
            s1inv[j] = i
        v = [mul[self.v[i], other.v[s1inv[i]]] for i in range(self.n)]
        sigma = [s1[other.sigma[i]] for i in range(self.n)]
        return WreathElement(self.G, v, sigma)

    def inverse(self):
        inv = self.G.inv
        sinv = [0] * self.n
        for i, j in enumerate(self.sigma):
            sinv[j] = i
        return WreathElement(self.G, [inv[self.v[self.sigma[j]]] for j in range(self.n)], sinv)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = WreathElement.identity(self.G, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, WreathElement) and self.v == other.v and self.sigma == other.sigma

    def __hash__(self):
        return hash((self.v, self.sigma))

    def cycles(self):
        """Cycles of sigma as lists i_1, sigma(i_1), ..."""
        seen = [False] * self.n
        out = []
        for i in range(self.n):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = self.sigma[j]
                out.append(cyc)
        return out

    def cycle_product(self, cyc):
        """v(i_t) ... v(i_1) for the cycle i_1 -> i_2 -> ... -> i_t."""
        mul = self.G.mul
        x = self.G.identity
        for i in cyc:
            x = mul[self.v[i], x]
        return int(x)

    def signature(self):
        """Sorted (cycle length, class of cycle product): the conjugacy class of the element."""
        return tuple(sorted((len(c), int(self.G.class_of[self.cycle_product(c)])) for c in self.cycles()))

    def __repr__(self):
        return f"WreathElement(v={self.v}, sigma={self.sigma})"


def _char(G, phi):
    return G.characters[phi] if isinstance(phi, int) else phi


def eval_Ind_phi(g, phi):
    chi = _char(g.G, phi)
    acc = CycloNumber.rational(0)
    for i, j in enumerate(g.sigma):
        if i == j:
            acc = acc + chi(g.v[i])
    return acc


def eval_a_tc(g, t, c):
    cid = c.id if hasattr(c, "id") else int(c)
    G = g.G
    count = 0
    for cyc in g.cycles():
        if len(cyc) != t:
            continue
        classes = {int(G.class_of[g.cycle_product(cyc[s:] + cyc[:s])]) for s in range(t)}
        assert len(classes) == 1, "cycle class depends on the starting point"
        if classes.pop() == cid:
            count += 1
    return count


def eval_sInd(g, lam):
    acc = CycloNumber.rational(1)
    powers = {}
    for phi, p in lam.parts:
        if p not in powers:
            powers[p] = g ** p
        acc = acc * eval_Ind_phi(powers[p], phi)
        if acc.is_zero():
            break
    return acc


def eval_sInd_hom_formula(g, lam):
    """Sum over assignments of parts to cycles whose length divides the part."""
    G = g.G
    cycs = [(len(c), g.cycle_product(c)) for c in g.cycles()]
    acc = CycloNumber.rational(1)
    for phi, p in lam.parts:
        chi = _char(G, phi)
        s = CycloNumber.rational(0)
        for length, x in cycs:
            if p % length == 0:
                s = s + chi(G.power_map(p // length)[x]) * length
        acc = acc * s
        if acc.is_zero():
            break
    return acc


def evaluate(f, g):
    if isinstance(f, MultiPartition):
        return eval_sInd(g, f)
    if not isinstance(f, StableFunction):
        return f(g)
    acc = CycloNumber.rational(0)
    for key, v in f.terms.items():
        if f.basis == "sInd":
            acc = acc + v * eval_sInd(g, key)
        else:
            term = v
            for t, c in key:
                term = term * eval_a_tc(g, t, c)
            acc = acc + term
    return acc


# ------------------------------------------------------------ enumeration

class WreathTable:
    """All elements of G wr S_n indexed by rank(sigma)*|G|^n + sum v_i |G|^i."""

    def __init__(self, G, n, budget=DEFAULT_BUDGET):
        m = G.order
        self.G, self.n = G, n
        perms = list(itertools.permutations(range(n)))
        P = len(perms)
        self.size = P * m**n
        if self.size**2 > budget:
            raise OracleBudgetExceeded(f"|G wr S_{n}|^2 = {self.size**2} exceeds the budget {budget}")
        S = np.array(perms, dtype=np.int64).reshape(P, n)
        pcode = (S * (n ** np.arange(n))).sum(axis=1) if n else np.zeros(1, dtype=np.int64)
        lookup = np.full(max(n**n, 1), -1, dtype=np.int64)
        lookup[pcode] = np.arange(P)
        Vs = np.indices((m,) * n).reshape(n, -1).T[:, ::-1] if n else np.zeros((1, 0), dtype=np.int64)
        self.V = np.tile(Vs, (P, 1))
        self.S = np.repeat(S, m**n, axis=0)
        self.Sinv = np.argsort(self.S, axis=1)
        weights = m ** np.arange(n)
        N = self.size
        table = np.empty((N, N), dtype=np.int32)
        for a in range(N):
            va, sa, sai = self.V[a], self.S[a], self.Sinv[a]
            v = G.mul[va[None, :], self.V[:, sai]]
            s = sa[self.S]
            code = (s * (n ** np.arange(n))).sum(axis=1) if n else np.zeros(N, dtype=np.int64)
            table[a] = lookup[code] * m**n + (v * weights).sum(axis=1)
        self.table = table
        ident = WreathElement.identity(G, n)
        self.identity = self.index(ident)
        self.inv = np.argmax(table == self.identity, axis=1)

    def index(self, g):
        m = self.G.order
        perms = list(itertools.permutations(range(self.n)))
        return perms.index(tuple(g.sigma)) * m**self.n + sum(x * m**i for i, x in enumerate(g.v))

    def element(self, idx):
        return WreathElement(self.G, self.V[idx], self.S[idx])

    def evaluate_word(self, w, r=None):
        """Element index of w(g_1..g_r) for every r-tuple, flattened in C order."""
        r = r or max(w.rank, 1)
        N = self.size
        total = N**r
        if total * max(len(w), 1) > DEFAULT_BUDGET:
            raise OracleBudgetExceeded(f"{N}^{r} tuples times |w| exceeds the budget")
        grids = np.indices((N,) * r).reshape(r, -1)
        cur = np.full(total, self.identity, dtype=np.int64)
        for x in w.letters:
            col = grids[abs(x) - 1]
            cur = self.table[cur, col if x > 0 else self.inv[col]]
        return cur

    def class_counts(self, idx_array=None):
        """Counts per conjugacy signature, with a representative element for each."""
        if idx_array is None:
            counts = np.ones(self.size, dtype=np.int64)
        else:
            counts = np.bincount(idx_array, minlength=self.size)
        out = {}
        for i in np.nonzero(counts)[0].tolist():
            g = self.element(i)
            sig = g.signature()
            if sig in out:
                out[sig][0] += int(counts[i])
            else:
                out[sig] = [int(counts[i]), g]
        return out


@lru_cache(maxsize=16)
def wreath_table(G, n, budget=DEFAULT_BUDGET):
    return WreathTable(G, n, budget)


def _average(classes, f, g=None, total=None):
    acc = CycloNumber.rational(0)
    for cnt, elem in classes.values():
        val = evaluate(f, elem)
        if g is not None:
            val = val * evaluate(g, elem).conj()
        acc = acc + val * cnt
    return acc / total


def exact_expectation(w, f, G, n, r=None, budget=DEFAULT_BUDGET):
    """E_w[f] on G wr S_n by enumerating every r-tuple."""
    r = r or max(w.rank, 1)
    if len(w) == 0:
        return _average({(): [1, WreathElement.identity(G, n)]}, f, total=1)
    classes, total = word_class_counts(G, n, w.letters, r, budget)
    return _average(classes, f, total=total)


@lru_cache(maxsize=256)
def word_class_counts(G, n, letters, r, budget=DEFAULT_BUDGET):
    """Distribution of the conjugacy signature of w(g_1..g_r) over all tuples."""
    W = wreath_table(G, n)
    if W.size**r * max(len(letters), 1) > budget:
        raise OracleBudgetExceeded(f"{W.size}^{r} word evaluations exceed the budget {budget}")
    from .freegrp import Word
    idx = W.evaluate_word(Word(letters, r), r)
    return W.class_counts(idx), W.size**r


def finite_inner(f, g, G, n, budget=DEFAULT_BUDGET):
    """(1/|G wr S_n|) sum_x f(x) conj(g(x))."""
    size = G.order**n * math.factorial(n)
    if size > budget:
        raise OracleBudgetExceeded(f"|G wr S_{n}| = {size} exceeds the budget")
    classes = {}
    m = G.order
    for sigma in itertools.permutations(range(n)):
        for v in itertools.product(range(m), repeat=n):
            x = WreathElement(G, v, sigma)
            sig = x.signature()
            if sig in classes:
                classes[sig][0] += 1
            else:
                classes[sig] = [1, x]
    return _average(classes, f, g, total=size)


@dataclass
class MCResult:
    mean_re: float
    mean_im: float
    stderr_re: float
    stderr_im: float
    samples: int
    seed: int

    @property
    def mean(self):
        return complex(self.mean_re, self.mean_im)

    @property
    def stderr(self):
        return max(self.stderr_re, self.stderr_im)


def word_value(w, gens):
    out = WreathElement.identity(gens[0].G, gens[0].n)
    invs = {}
    for x in w.letters:
        g = gens[abs(x) - 1]
        if x < 0:
            if abs(x) not in invs:
                invs[abs(x)] = g.inverse()
            g = invs[abs(x)]
        out = out * g
    return out


def mc_expectation(w, f, G, n, samples=1000, seed=1, r=None):
    """Sample mean with normal-approximation standard errors; deterministic in seed."""
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    r = r or max(w.rank, 1)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    vals = np.empty(samples, dtype=complex)
    cache = {}
    for s in range(samples):
        gens = [WreathElement.random(G, n, rng) for _ in range(r)]
        x = word_value(w, gens)
        sig = x.signature()
        if sig not in cache:
            cache[sig] = evaluate(f, x).to_complex()
        vals[s] = cache[sig]
    se = lambda a: float(np.std(a, ddof=1) / math.sqrt(samples))
    return MCResult(float(vals.real.mean()), float(vals.imag.mean()), se(vals.real), se(vals.imag), samples, seed)
