"""Primitivity via Whitehead descent; primitivity rank and critical subgroups."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .exactnum import CycloNumber
from .freegrp import (CapExceeded, Word, WordError, build_w_graph, cyclic_reduce,
                      enumerate_quotients, is_cyclically_reduced, power_decompose)
from .groups import graph_expectation

MAX_RANK = 6
INF = float("inf")


class ProperPowerError(WordError):
    pass


@dataclass(frozen=True)
class WhiteheadAuto:
    rank: int
    a: int
    S: frozenset

    def image(self, x):
        if abs(x) == abs(self.a):
            return (x,)
        if x < 0:
            return tuple(-y for y in reversed(self.image(-x)))
        out = []
        if -x in self.S:
            out.append(-self.a)
        out.append(x)
        if x in self.S:
            out.append(self.a)
        return tuple(out)

    def __call__(self, w):
        letters = []
        for x in w.letters:
            letters.extend(self.image(x))
        return Word(letters, w.rank)


@lru_cache(maxsize=None)
def whitehead_autos(k):
    if k > MAX_RANK:
        raise CapExceeded(f"Whitehead descent is limited to rank {MAX_RANK}, got {k}")
    letters = [x for i in range(1, k + 1) for x in (i, -i)]
    out = []
    for a in letters:
        rest = [x for x in letters if abs(x) != abs(a)]
        for bits in itertools.product((0, 1), repeat=len(rest)):
            S = frozenset([a] + [x for x, b in zip(rest, bits) if b])
            if len(S) == 1:
                continue  # inner/identity on cyclic words
            out.append(WhiteheadAuto(k, a, S))
    return tuple(out)


def cyclic_length(w):
    return len(cyclic_reduce(w)[0])


def min_cyclic_length(u, k=None):
    """Greedy descent: apply the best strictly shortening Whitehead auto until none."""
    k = k or u.rank
    cur = cyclic_reduce(u)[0]
    witness = []
    if len(cur) <= 1:
        return len(cur), witness
    autos = whitehead_autos(k)
    while True:
        best, best_len = None, len(cur)
        for phi in autos:
            L = cyclic_length(phi(cur))
            if L < best_len:
                best, best_len = phi, L
        if best is None:
            return len(cur), witness
        witness.append(best)
        cur = cyclic_reduce(best(cur))[0]
        if len(cur) <= 1:
            return len(cur), witness


def is_primitive(u, k=None):
    core = cyclic_reduce(u)[0]
    if len(core) == 0:
        return False
    return min_cyclic_length(core, k or u.rank)[0] == 1


@dataclass
class CriticalSubgroup:
    quotient: object
    rank: int
    w_word: Word
    expectation: CycloNumber = None


@dataclass
class CritReport:
    pi: object
    critical: list = field(default_factory=list)
    phi: str = None
    scanned: int = 0

    @property
    def crit_count(self):
        return len(self.critical)

    def pi_json(self):
        return "inf" if self.pi == INF else int(self.pi)


def _prepare(w):
    if len(w) == 0:
        raise WordError("empty word")
    core, _ = cyclic_reduce(w)
    _, k = power_decompose(core)
    if k > 1:
        raise ProperPowerError(
            f"{core} is a proper power (pi = 1); reduce it to its root and twist the function by f -> f^({k})")
    return core


@lru_cache(maxsize=256)
def _scan(w):
    """Quotients of the w-cycle with rank and w-image word, sorted by rank."""
    g = build_w_graph(w, (1,))
    out = []
    for q in enumerate_quotients(g):
        ranks, words = q.path_words()
        r = ranks[0]
        out.append((r, q, Word(words[0][1], max(r, 1))))
    out.sort(key=lambda t: t[0])
    return out


def primitivity_rank(w):
    w = _prepare(w)
    scan = _scan(w)
    report = CritReport(INF, scanned=len(scan))
    for r, q, u in scan:
        if r > report.pi:
            break
        if not is_primitive(u, r):
            report.pi = r
            report.critical.append(CriticalSubgroup(q, r, u, CycloNumber.rational(1)))
    return report


def _is_trivial_fn(phi):
    return all(v == 1 for v in phi.values)


def phi_rank(w, phi, G=None, name=None):
    if _is_trivial_fn(phi):
        rep = primitivity_rank(w)
        rep.phi = name
        return rep
    w = _prepare(w)
    scan = _scan(w)
    report = CritReport(INF, phi=name, scanned=len(scan))
    for r, q, u in scan:
        if r > report.pi:
            break
        E = graph_expectation(q.image, [(q.path_images[0], phi)], G)
        if not E.is_zero():
            report.pi = r
            report.critical.append(CriticalSubgroup(q, r, u, E))
    return report


def critical_values(w, phi, G=None):
    """(C_phi(w), C^pi_phi(w))."""
    crit_phi = phi_rank(w, phi, G)
    c_phi = sum((h.expectation for h in crit_phi.critical), CycloNumber.rational(0))
    plain = primitivity_rank(w)
    if _is_trivial_fn(phi):
        return c_phi, CycloNumber.rational(len(plain.critical))
    c_pi = CycloNumber.rational(0)
    for h in plain.critical:
        c_pi = c_pi + graph_expectation(h.quotient.image, [(h.quotient.path_images[0], phi)], G)
    return c_phi, c_pi
