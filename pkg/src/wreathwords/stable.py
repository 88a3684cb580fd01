"""Stable class functions on G wr S_n: the sInd basis, the a_{t,c} basis, and a text syntax."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactnum import CycloNumber, as_cyclo
from .groups import inner_product, power_class, power_twist_class_fn


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


class MultiPartition:
    """A multiset of labeled parts (phi, p): sInd = prod_parts (Ind phi)^{(p)}."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        if isinstance(parts, dict):
            parts = [(phi, p) for phi, lam in parts.items() for p in lam]
        parts = [(int(phi), int(p)) for phi, p in parts]
        if any(p < 1 for _, p in parts):
            raise ValueError("parts must be positive")
        self.parts = tuple(sorted(parts, key=lambda t: (-t[1], t[0])))

    @property
    def size(self):
        return sum(p for _, p in self.parts)

    def __len__(self):
        return len(self.parts)

    def shape(self):
        return tuple(p for _, p in self.parts)

    def labels(self):
        return tuple(phi for phi, _ in self.parts)

    def as_dict(self):
        out = {}
        for phi, p in self.parts:
            out.setdefault(phi, []).append(p)
        return out

    def __mul__(self, other):
        return MultiPartition(self.parts + other.parts)

    def scaled(self, k):
        return MultiPartition([(phi, p * k) for phi, p in self.parts])

    def remove(self, positions):
        drop = set(positions)
        return MultiPartition([t for i, t in enumerate(self.parts) if i not in drop])

    def __eq__(self, other):
        return isinstance(other, MultiPartition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return (self.size, self.parts) < (other.size, other.parts)

    def text(self, names=None):
        if not self.parts:
            return "1"
        d = self.as_dict()
        name = (lambda i: names[i]) if names else (lambda i: f"phi{i}")
        return "sInd{" + "; ".join(f"{name(phi)}:{d[phi]}" for phi in sorted(d)) + "}"

    def __repr__(self):
        return f"MultiPartition({self.text()})"


ONE_MP = MultiPartition()


class StableFunction:
    """A finite linear combination of basis monomials with CycloNumber coefficients.

    basis 'sInd': keys are MultiPartitions; basis 'a': keys are sorted tuples of
    (t, c) pairs (a monomial prod a_{t,c})."""

    def __init__(self, G, terms=None, basis="sInd"):
        self.G = G
        self.basis = basis
        self.terms = {}
        for k, v in (terms or {}).items():
            v = as_cyclo(v)
            if not v.is_zero():
                self.terms[k] = v

    # -- constructors
    @classmethod
    def constant(cls, G, c, basis="sInd"):
        key = ONE_MP if basis == "sInd" else ()
        return cls(G, {key: c}, basis)

    @classmethod
    def sInd(cls, G, lam):
        if not isinstance(lam, MultiPartition):
            lam = MultiPartition(lam)
        return cls(G, {lam: 1})

    @classmethod
    def ind(cls, G, phi, k=1):
        return cls(G, {MultiPartition([(phi, k)]): 1})

    @classmethod
    def a(cls, G, t, c):
        return cls(G, {((t, c),): 1}, "a")

    # -- algebra
    def _unit_key(self):
        return ONE_MP if self.basis == "sInd" else ()

    def _align(self, other):
        if not isinstance(other, StableFunction):
            return self, StableFunction.constant(self.G, other, self.basis)
        if other.basis == self.basis:
            return self, other
        return self.to_sInd(), other.to_sInd()

    def __add__(self, other):
        a, b = self._align(other)
        terms = dict(a.terms)
        for k, v in b.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return StableFunction(a.G, terms, a.basis)

    __radd__ = __add__

    def __neg__(self):
        return StableFunction(self.G, {k: -v for k, v in self.terms.items()}, self.basis)

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, StableFunction):
            c = as_cyclo(other)
            return StableFunction(self.G, {k: v * c for k, v in self.terms.items()}, self.basis)
        a, b = self._align(other)
        terms = {}
        for k1, v1 in a.terms.items():
            for k2, v2 in b.terms.items():
                k = k1 * k2 if a.basis == "sInd" else tuple(sorted(k1 + k2))
                terms[k] = terms[k] + v1 * v2 if k in terms else v1 * v2
        return StableFunction(a.G, terms, a.basis)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = StableFunction.constant(self.G, 1, self.basis)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, StableFunction):
            return False
        a, b = self._align(other)
        return a.terms == b.terms

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        if not self.terms:
            return 0
        if self.basis == "sInd":
            return max(k.size for k in self.terms)
        return max(sum(t for t, _ in k) for k in self.terms)

    def constant_term(self):
        return self.terms.get(self._unit_key(), CycloNumber.rational(0))

    # -- basis changes
    def to_sInd(self):
        if self.basis == "sInd":
            return self
        out = StableFunction.constant(self.G, 0)
        for key, v in self.terms.items():
            term = StableFunction.constant(self.G, v)
            for t, c in key:
                term = term * a_to_ind_basis(self.G, t, c)
            out = out + term
        return out

    def to_a(self):
        if self.basis == "a":
            return self
        out = StableFunction.constant(self.G, 0, "a")
        for lam, v in self.terms.items():
            term = StableFunction.constant(self.G, v, "a")
            for phi, p in lam.parts:
                term = term * ind_power_to_a(self.G, phi, p)
            out = out + term
        return out

    def power_twist(self, k):
        return power_twist(self, k)

    def conj(self):
        G = self.G
        f = self.to_sInd()
        cmap = conj_index_map(G)
        terms = {}
        for lam, v in f.terms.items():
            key = MultiPartition([(cmap[phi], p) for phi, p in lam.parts])
            terms[key] = terms[key] + v.conj() if key in terms else v.conj()
        return StableFunction(G, terms)

    def text(self):
        names = self.G.char_names
        parts = []
        for k in sorted(self.terms, key=_sort_key):
            v = self.terms[k]
            mono = k.text(names) if self.basis == "sInd" else (
                "*".join(f"a[{t},{c}]" for t, c in k) or "1")
            if mono == "1":
                parts.append(f"({v})")
            else:
                parts.append(mono if v == 1 else f"({v})*{mono}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"StableFunction({self.text()})"


def _sort_key(k):
    if isinstance(k, MultiPartition):
        return (k.size, k.parts)
    return (sum(t for t, _ in k), k)


def conj_index_map(G):
    out = []
    for chi in G.characters:
        cc = chi.conj()
        out.append(next(j for j, psi in enumerate(G.characters) if psi == cc))
    return out


def ind_power_to_a(G, phi, k):
    """(Ind phi)^{(k)} = sum_{t|k} t sum_c phi(c^{k/t}) a_{t,c}."""
    chi = G.characters[phi] if isinstance(phi, int) else phi
    terms = {}
    for t in divisors(k):
        for c in G.classes:
            v = chi.values[power_class(G, c, k // t)] * t
            if not v.is_zero():
                terms[((t, c.id),)] = v
    return StableFunction(G, terms, "a")


@lru_cache(maxsize=None)
def _class_sum_in_ind(G, phi, t):
    """sum_c phi(c) a_{t,c} in the sInd basis, by the triangular recursion."""
    out = StableFunction.ind(G, phi, t)
    for s in divisors(t)[:-1]:
        twisted = power_twist_class_fn(G.characters[phi], t // s)
        for psi, chi in enumerate(G.characters):
            m = inner_product(twisted, chi)
            if not m.is_zero():
                out = out - _class_sum_in_ind(G, psi, s) * (m * s)
    return out * Fraction(1, t)


@lru_cache(maxsize=None)
def _a_to_ind(G, t, c):
    size = len(G.classes[c])
    out = StableFunction.constant(G, 0)
    for phi, chi in enumerate(G.characters):
        coef = chi.values[c].conj() * Fraction(size, G.order)
        if not coef.is_zero():
            out = out + _class_sum_in_ind(G, phi, t) * coef
    return out


def a_to_ind_basis(G, t, c):
    if t < 1:
        raise ValueError("t must be positive")
    cid = c.id if hasattr(c, "id") else int(c)
    return _a_to_ind(G, t, cid)


def power_twist(f, k):
    if k < 1:
        raise ValueError("power twist needs k >= 1")
    f = f.to_sInd()
    return StableFunction(f.G, {lam.scaled(k): v for lam, v in f.terms.items()})


def stable_degree_one_chi(G, phi):
    """chi_phi = Ind phi - 1_{phi trivial}."""
    f = StableFunction.ind(G, phi)
    return f - 1 if phi == 0 else f


def sInd_basis(G, max_degree, min_degree=0):
    """All sInd monomials with min_degree <= ||lam|| <= max_degree."""
    k = len(G.characters)
    out = []

    def parts_of(n, maxpart):
        if n == 0:
            yield ()
            return
        for p in range(min(n, maxpart), 0, -1):
            for rest in parts_of(n - p, p):
                yield (p,) + rest

    labeled = [(phi, p) for p in range(1, max_degree + 1) for phi in range(k)]

    def rec(start, remaining, acc):
        if acc and min_degree <= sum(p for _, p in acc):
            out.append(MultiPartition(acc))
        for i in range(start, len(labeled)):
            phi, p = labeled[i]
            if p <= remaining:
                rec(i, remaining - p, acc + [labeled[i]])

    if min_degree == 0:
        out.append(ONE_MP)
    rec(0, max_degree, [])
    return sorted(set(out))


# -------------------------------------------------------------------- parser

class FunctionSyntaxError(ValueError):
    pass


class _FnParser:
    def __init__(self, text, G):
        self.text = text
        self.pos = 0
        self.G = G

    def error(self, msg):
        raise FunctionSyntaxError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self, k=1):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos:self.pos + k]

    def eat(self, s):
        if self.peek(len(s)) != s:
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self):
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.text[start:self.pos] in ("", "-"):
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def name(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def char_index(self):
        nm = self.name()
        names = self.G.char_names or []
        if nm in names:
            return names.index(nm)
        if nm.startswith("phi") and nm[3:].isdigit():
            i = int(nm[3:])
            if i < len(self.G.characters):
                return i
        self.error(f"unknown character {nm!r}")

    def expr(self):
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek() == "*":
            self.pos += 1
            out = out * self.factor()
        return out

    def factor(self):
        G = self.G
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.factor()
        if c == "(":
            self.pos += 1
            val = self.expr()
            self.eat(")")
        elif c.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                val = StableFunction.constant(G, Fraction(num, self.integer()))
            else:
                val = StableFunction.constant(G, num)
        elif self.peek(4) == "sInd":
            self.pos += 4
            self.eat("{")
            parts = []
            while True:
                phi = self.char_index()
                self.eat(":")
                self.eat("[")
                while True:
                    parts.append((phi, self.integer()))
                    if self.peek() == ",":
                        self.pos += 1
                        continue
                    break
                self.eat("]")
                if self.peek() == ";":
                    self.pos += 1
                    continue
                break
            self.eat("}")
            val = StableFunction.sInd(G, MultiPartition(parts))
        elif self.peek(3) == "Ind":
            self.pos += 3
            self.eat("(")
            phi = self.char_index()
            self.eat(")")
            val = StableFunction.ind(G, phi)
        elif self.peek(2) == "a[":
            self.pos += 2
            t = self.integer()
            self.eat(",")
            cls = self.integer()
            self.eat("]")
            if t < 1 or not 0 <= cls < G.num_classes:
                self.error("a[t,c] out of range")
            val = a_to_ind_basis(G, t, cls)
        elif c == "z":
            self.pos += 1
            val = StableFunction.constant(G, CycloNumber.zeta(G.exponent))
        else:
            self.error(f"unexpected {c!r}" if c else "unexpected end of input")
        if self.peek(2) == "^(":
            self.pos += 2
            k = self.integer()
            self.eat(")")
            if k < 1:
                self.error("twist exponent must be positive")
            val = power_twist(val, k)
        elif self.peek() == "^":
            self.pos += 1
            k = self.integer()
            if k < 0:
                self.error("negative powers are not stable functions")
            val = val ** k
        return val


def parse_stable(text, G):
    p = _FnParser(text, G)
    out = p.expr()
    if p.peek() != "":
        p.error("trailing input")
    return out


def parse_multipartition(text, G):
    f = parse_stable(text, G)
    if len(f.terms) != 1:
        raise FunctionSyntaxError(f"{text!r} is not a single sInd monomial")
    (lam, v), = f.terms.items()
    if v != 1:
        raise FunctionSyntaxError(f"{text!r} is not a single sInd monomial")
    return lam
