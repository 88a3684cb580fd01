"""Exact word measures on G wr S_n through the Induction-Convolution Lemma.

E_w[sInd(lam)] = sum over fold-closed partitions of the w-graph w^{lam} of
E_{eta1}[zeta] * (n)_{#V} / prod_b (n)_{#E_b}.
"""
from __future__ import annotations

import math
from fractions import Fraction
from collections import Counter
from dataclasses import dataclass, field

from .exactnum import (CycloNumber, Polynomial, RationalFunction, falling_factorial,
                       laurent_expand, reduce_linear_factors)
from .freegrp import (DEFAULT_VERTEX_CAP, Word, WordError, build_w_graph, cyclic_reduce,
                      enumerate_quotient_labels, QuotientClass, power_decompose)
from .groups import inner_product, power_class, words_expectation
from .stable import (MultiPartition, StableFunction, a_to_ind_basis, ind_power_to_a,
                     power_twist, stable_degree_one_chi)
from . import whitehead

_QUOTIENT_CACHE = {}


@dataclass
class ExpectationResult:
    value: RationalFunction
    quotient_count: int
    valid_from: int
    meta: dict = field(default_factory=dict)
    coeffs: dict = field(default_factory=dict, repr=False)

    def laurent(self, K):
        return laurent_expand(self.value, K)

    def evaluate_at(self, n0):
        """Exact E_w[f] on G wr S_{n0} for every n0 >= 1.

        Each L factor is read as the expected number of injective lifts, which is
        0 when n0 is below the image's vertex count; for n0 >= every such count
        this equals value(n0)."""
        return finite_value(self.coeffs, n0)

    __call__ = evaluate_at


class _Prepared:
    """Per quotient: L key and per-component (rank, [(cycle index, word)])."""

    __slots__ = ("L", "comps")

    def __init__(self, q, rank):
        self.L = q.L_key(rank)
        ranks, words = q.path_words()
        comps = {}
        for i, (cid, word) in enumerate(words):
            comps.setdefault(cid, []).append((i, word))
        self.comps = [(ranks[cid], tuple(items)) for cid, items in sorted(comps.items())]


def prepared_quotients(w, shape, cap=DEFAULT_VERTEX_CAP):
    key = (w.letters, w.rank, tuple(shape), cap)
    if key not in _QUOTIENT_CACHE:
        g = build_w_graph(w, shape)
        labels = enumerate_quotient_labels(g, cap)
        _QUOTIENT_CACHE[key] = [_Prepared(QuotientClass(g, lab), w.rank) for lab in labels]
    return _QUOTIENT_CACHE[key]


def _check_word(w, allow_power=False):
    if len(w) == 0:
        raise WordError("empty word")
    core, _ = cyclic_reduce(w)
    if core != w:
        raise WordError(f"{w} is not cyclically reduced")
    if not allow_power and power_decompose(w)[1] > 1:
        raise WordError(f"{w} is a proper power; use expect_stable, which reduces to the root")


def sInd_coefficients(w, lam, G, cap=DEFAULT_VERTEX_CAP, allow_power=False):
    """{(V, (E_1..E_r)): sum of E_{eta1}[zeta]} over the quotients of w^lam."""
    if not lam.parts:
        return {None: CycloNumber.rational(1)}, 0
    _check_word(w, allow_power)
    zetas = [G.characters[phi] for phi in lam.labels()]
    quotients = prepared_quotients(w, lam.shape(), cap)
    coeffs = {}
    for q in quotients:
        E = CycloNumber.rational(1)
        for rank, items in q.comps:
            E = E * words_expectation(G, [wd for _, wd in items], rank, [zetas[i] for i, _ in items])
            if E.is_zero():
                break
        if not E.is_zero():
            coeffs[q.L] = coeffs[q.L] + E if q.L in coeffs else E
    return coeffs, len(quotients)


def assemble(coeffs):
    """Sum_key c * (n)_V / prod_b (n)_{E_b} as a reduced rational function."""
    const = coeffs.get(None, CycloNumber.rational(0))
    keys = [k for k in coeffs if k is not None and not coeffs[k].is_zero()]
    if not keys:
        return RationalFunction.constant(const)
    den_roots = Counter()
    key_roots = {}
    for k in keys:
        V, Es = k
        c = Counter()
        for e in Es:
            for j in range(e):
                c[j] += 1
        key_roots[k] = c
        for j, m in c.items():
            den_roots[j] = max(den_roots[j], m)
    num = Polynomial()
    for k in keys:
        V, _ = k
        extra = Polynomial([1])
        for j, m in den_roots.items():
            for _ in range(m - key_roots[k][j]):
                extra = extra * Polynomial.linear_root(j)
        num = num + falling_factorial(V) * extra * coeffs[k]
    roots = sorted(den_roots.elements())
    den_poly = Polynomial([1])
    for j in roots:
        den_poly = den_poly * Polynomial.linear_root(j)
    num = num + den_poly * const
    num, remaining = reduce_linear_factors(num, roots)
    den = Polynomial([1])
    for j in remaining:
        den = den * Polynomial.linear_root(j)
    return RationalFunction(num, den, reduced=True)


def finite_value(coeffs, n0):
    acc = CycloNumber.rational(0)
    for k, c in coeffs.items():
        if k is None:
            acc = acc + c
            continue
        V, Es = k
        if V > n0:
            continue
        L = Fraction(math.perm(n0, V))
        for e in Es:
            L /= math.perm(n0, e)
        acc = acc + c * L
    return acc


def _merge(into, coeffs, scale):
    for k, v in coeffs.items():
        v = v * scale
        into[k] = into[k] + v if k in into else v


def expect_sInd(w, lam, G, cap=DEFAULT_VERTEX_CAP, allow_power=False):
    if not isinstance(lam, MultiPartition):
        lam = MultiPartition(lam)
    coeffs, count = sInd_coefficients(w, lam, G, cap, allow_power)
    return ExpectationResult(assemble(coeffs), count, lam.size * len(w),
                             {"word": str(w), "group": G.name, "term": lam.text(G.char_names)}, coeffs)


def expect_stable(w, f, G, cap=DEFAULT_VERTEX_CAP):
    """E_w[f]: reduce w = c u^k c^-1, twist f by k, sum the ICL over sInd terms."""
    if len(w) == 0:
        raise WordError("empty word")
    core, _ = cyclic_reduce(w)
    u, k = power_decompose(core)
    f = power_twist(f.to_sInd(), k)
    total = {}
    count = 0
    for lam, c in f.terms.items():
        coeffs, qc = sInd_coefficients(u, lam, G, cap)
        count += qc
        _merge(total, coeffs, c)
    deg = max((lam.size for lam in f.terms), default=0) // k if f.terms else 0
    return ExpectationResult(assemble(total), count, deg * len(w),
                             {"word": str(w), "root": str(u), "power": k, "group": G.name}, total)


# ------------------------------------------------------------- inner products

_ONE_LETTER = Word((1,), 1)


def stable_inner_one(lam, G):
    """<sInd(lam), 1> via the one-letter ambient, where every L factor is 1."""
    if not isinstance(lam, MultiPartition):
        lam = MultiPartition(lam)
    if not lam.parts:
        return CycloNumber.rational(1)
    coeffs, _ = sInd_coefficients(_ONE_LETTER, lam, G, cap=max(DEFAULT_VERTEX_CAP, lam.size))
    val = assemble(coeffs)
    if not val.is_constant():
        raise AssertionError("one-letter ambient produced a non-constant value")
    return val.num.coeffs[0] if val.num.coeffs else CycloNumber.rational(0)


def inner_one(f):
    f = f.to_sInd()
    acc = CycloNumber.rational(0)
    for lam, c in f.terms.items():
        acc = acc + c * stable_inner_one(lam, f.G)
    return acc


def stable_inner(f, g):
    """<f, g> = <f * conj(g), 1> for any two stable functions."""
    return inner_one(f.to_sInd() * g.conj())


def summary_class_fn(lam, G):
    """s(tau)(g) = prod_{parts} zeta_p(g^{|p|}), as a class function."""
    from .groups import ClassFunction
    vals = []
    for c in G.classes:
        v = CycloNumber.rational(1)
        for phi, p in lam.parts:
            v = v * G.characters[phi].values[power_class(G, c, p)]
        vals.append(v)
    return ClassFunction(G, vals)


def frobenius_terms(lam, G, phi):
    """[(positions tau, <sInd(lam minus tau), 1>, <s(tau), phi>)] over all sub-multisets of parts."""
    chi = G.characters[phi]
    out = []
    L = len(lam.parts)
    for mask in range(1 << L):
        pos = [i for i in range(L) if mask >> i & 1]
        tau = MultiPartition([lam.parts[i] for i in pos])
        out.append((tuple(pos), stable_inner_one(lam.remove(pos), G), inner_product(summary_class_fn(tau, G), chi)))
    return out


def stable_inner_indphi(lam, G, phi):
    if not isinstance(lam, MultiPartition):
        lam = MultiPartition(lam)
    acc = CycloNumber.rational(0)
    for _, a, b in frobenius_terms(lam, G, phi):
        acc = acc + a * b
    return acc


def stable_inner_chi(f, phi):
    """<f, chi_phi> with chi_phi = Ind phi - 1_{phi = 1}."""
    f = f.to_sInd()
    G = f.G
    acc = CycloNumber.rational(0)
    for lam, c in f.terms.items():
        v = stable_inner_indphi(lam, G, phi)
        if phi == 0:
            v = v - stable_inner_one(lam, G)
        acc = acc + c * v
    return acc


# -------------------------------------------------------- asymptotic checks

def predicted_expansion(w, f, G):
    """(c0, c_sub, pi): <f,1> and sum_phi <f, chi_phi> C^pi_phi(w)."""
    core, _ = cyclic_reduce(w)
    rep = whitehead.primitivity_rank(core)
    c0 = inner_one(f)
    c_sub = CycloNumber.rational(0)
    if rep.pi != whitehead.INF:
        for phi, chi in enumerate(G.characters):
            m = stable_inner_chi(f, phi)
            if not m.is_zero():
                c_sub = c_sub + m * whitehead.critical_values(core, chi, G)[1]
    return c0, c_sub, rep.pi


def verify_main_theorem(w, f, G, K=None, perturb=None):
    c0, c_sub, pi = predicted_expansion(w, f, G)
    if perturb is not None:
        c_sub = c_sub + perturb
    res = expect_stable(w, f, G)
    finite = pi != whitehead.INF
    if K is None:
        K = (pi + 4) if finite else 4
    series = laurent_expand(res.value, K)
    rows = []
    ok = True
    top = (pi - 1) if finite else K
    for p in range(0, min(K, top) + 1):
        actual = series.coefficient(-p)
        if p == 0:
            expected = c0
        elif finite and p == pi - 1:
            expected = c_sub
        else:
            expected = CycloNumber.rational(0)
        good = actual == expected
        ok = ok and good
        rows.append({"power": -p, "expected": expected, "actual": actual, "ok": good})
    for p in range(min(K, top) + 1, K + 1):
        rows.append({"power": -p, "expected": None, "actual": series.coefficient(-p), "ok": True})
    return {"pass": ok, "pi": pi, "c0": c0, "c_sub": c_sub, "rows": rows, "series": series,
            "value": res.value}


def coefficient_bound_check(w, lam, G, K=None):
    """|a_p| <= sInd_lam(1) * T^{2(l + p)} with T = |w| ||lam||."""
    if not isinstance(lam, MultiPartition):
        lam = MultiPartition(lam)
    core, _ = cyclic_reduce(w)
    u, k = power_decompose(core)
    if K is None:
        pi = whitehead.primitivity_rank(u).pi if k == 1 else 1
        K = (pi + 4) if pi != whitehead.INF else 4
    res = expect_stable(w, StableFunction.sInd(G, lam), G)
    series = laurent_expand(res.value, K)
    s1 = 1
    for phi, _ in lam.parts:
        s1 *= abs(G.characters[phi].values[0].to_complex())
    T = len(core) * lam.size
    ell = len(lam.parts)
    rows = []
    ok = True
    for p in range(K + 1):
        a = abs(series.coefficient(-p).to_complex())
        bound = s1 * float(T) ** (2 * (ell + p))
        good = a <= bound * (1 + 1e-9)
        ok = ok and good
        rows.append({"p": p, "abs": a, "bound": bound, "ok": good})
    return {"pass": ok, "rows": rows}


def degree_one_chi(G, phi):
    return stable_degree_one_chi(G, phi)


__all__ = [
    "ExpectationResult", "expect_sInd", "expect_stable", "stable_inner_one", "stable_inner_indphi",
    "stable_inner_chi", "stable_inner", "inner_one", "predicted_expansion", "verify_main_theorem",
    "coefficient_bound_check", "ind_power_to_a", "a_to_ind_basis", "power_twist", "frobenius_terms",
]
