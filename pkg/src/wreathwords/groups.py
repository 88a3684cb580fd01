"""Finite groups given by tables, their classes and characters, and E_eta[zeta]."""
from __future__ import annotations

import itertools
import json
import math
import os
import re
from functools import lru_cache, reduce

import numpy as np

from .exactnum import CycloNumber, as_cyclo, cyclo_from_json, cyclo_to_json

DEFAULT_ENUM_CAP = 10**8


class GroupError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class ConjClass:
    __slots__ = ("id", "members", "rep")

    def __init__(self, id, members):
        self.id = id
        self.members = tuple(sorted(members))
        self.rep = self.members[0]

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"ConjClass({self.id}, rep={self.rep}, size={len(self.members)})"


class GroupTable:
    """A finite group as a multiplication table on ids 0..m-1."""

    def __init__(self, mul, name="G", check=True):
        mul = np.asarray(mul, dtype=np.int64)
        m = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (m, m) or m < 1:
            raise GroupError("cayley table must be square and nonempty")
        if mul.min() < 0 or mul.max() >= m:
            raise GroupError("cayley table entries out of range")
        self.name = name
        self.order = m
        self.mul = mul
        ids = np.arange(m)
        ident = [e for e in range(m) if np.array_equal(mul[e], ids) and np.array_equal(mul[:, e], ids)]
        if not ident:
            raise GroupError(f"{name}: not a group (no identity)")
        self.identity = ident[0]
        inv = np.full(m, -1, dtype=np.int64)
        for a in range(m):
            hits = np.nonzero(mul[a] == self.identity)[0]
            if len(hits) != 1 or mul[hits[0], a] != self.identity:
                raise GroupError(f"{name}: not a group (element {a} has no inverse)")
            inv[a] = hits[0]
        self.inv = inv
        if check:
            self._check_assoc()
        self.classes = self._conjugacy_classes()
        self.class_of = np.empty(m, dtype=np.int64)
        for c in self.classes:
            self.class_of[list(c.members)] = c.id
        self.class_sizes = [len(c) for c in self.classes]
        self.exponent = reduce(lambda a, b: a * b // math.gcd(a, b), (self.element_order(g) for g in range(m)), 1)
        self.characters = None
        self.char_names = None
        self._pow_cache = {}

    def _check_assoc(self):
        m = self.order
        mul = self.mul
        for row in mul:
            if len(set(row.tolist())) != m:
                raise GroupError(f"{self.name}: not a group (table is not a Latin square)")
        if m <= 64:
            a, b, c = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
            ok = np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, m, size=(3, 20000))
            ok = np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
        if not ok:
            raise GroupError(f"{self.name}: not a group (multiplication is not associative)")

    def _conjugacy_classes(self):
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            orbit = set(self.mul[self.mul[np.arange(self.order), g], self.inv].tolist())
            seen |= orbit
            classes.append(ConjClass(len(classes), orbit))
        return classes

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = self.mul[x, g]
            k += 1
        return k

    def power_map(self, k):
        """Array g -> g^k (k may be negative)."""
        k %= self.exponent
        if k not in self._pow_cache:
            out = np.full(self.order, self.identity, dtype=np.int64)
            base = np.arange(self.order)
            e = k
            while e:
                if e & 1:
                    out = self.mul[out, base]
                base = self.mul[base, base]
                e >>= 1
            self._pow_cache[k] = out
        return self._pow_cache[k]

    @property
    def num_classes(self):
        return len(self.classes)

    def trivial_fn(self):
        return ClassFunction(self, [1] * self.num_classes)

    def irreducible(self, i):
        if self.characters is None:
            raise GroupError(f"{self.name} has no character table")
        return self.characters[i]

    def set_characters(self, rows, names=None):
        rows = [r if isinstance(r, ClassFunction) else ClassFunction(self, r) for r in rows]
        if not rows or any(v != 1 for v in rows[0].values):
            raise GroupError("the trivial character must come first")
        self.characters = rows
        self.char_names = names or [f"phi{i}" for i in range(len(rows))]
        check_character_table(self)

    def __repr__(self):
        return f"GroupTable({self.name}, order={self.order})"


class ClassFunction:
    __slots__ = ("group", "values")

    def __init__(self, group, values):
        values = tuple(as_cyclo(v) for v in values)
        if len(values) != group.num_classes:
            raise GroupError("class function length does not match the number of classes")
        self.group = group
        self.values = values

    def __call__(self, g):
        return self.values[self.group.class_of[g]]

    def at_class(self, c):
        return self.values[c]

    def __add__(self, other):
        _same(self, other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        _same(self, other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            _same(self, other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conj(self):
        return ClassFunction(self.group, [a.conj() for a in self.values])

    def degree(self):
        return self.values[0]

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and other.group is self.group and other.values == self.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"ClassFunction({[str(v) for v in self.values]})"


def _same(f, g):
    if f.group is not g.group:
        raise GroupError("class functions live on different groups")


def conjugacy_classes(G):
    return G.classes


def power_class(G, c, k):
    """Class id of rep(c)^k; checked on every member."""
    cid = c.id if isinstance(c, ConjClass) else c
    pm = G.power_map(k)
    members = G.classes[cid].members
    out = {int(G.class_of[pm[g]]) for g in members}
    assert len(out) == 1, "power class depends on the representative"
    return out.pop()


def inner_product(f, g):
    _same(f, g)
    G = f.group
    acc = CycloNumber.rational(0)
    for c, a, b in zip(G.classes, f.values, g.values):
        acc = acc + a * b.conj() * len(c)
    return acc / G.order


def power_twist_class_fn(f, k):
    G = f.group
    return ClassFunction(G, [f.values[power_class(G, c, k)] for c in G.classes])


def check_character_table(G):
    rows = G.characters
    one = CycloNumber.rational(1)
    zero = CycloNumber.rational(0)
    for i, a in enumerate(rows):
        d = a.values[0]
        if not d.is_rational() or d.to_fraction() <= 0 or d.to_fraction().denominator != 1:
            raise GroupError(f"character {i} has a degree that is not a positive integer")
        for j, b in enumerate(rows):
            if inner_product(a, b) != (one if i == j else zero):
                raise GroupError(f"character table fails orthogonality at ({i}, {j})")
    if sum(r.values[0].to_fraction() ** 2 for r in rows) != G.order:
        raise GroupError("sum of squared degrees differs from the group order")


# ------------------------------------------------------------------ builtins

def cyclic(m):
    mul = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    G = GroupTable(mul, name="trivial" if m == 1 else f"cyclic{m}", check=False)
    rows = [[CycloNumber.zeta(m, j * x) for x in range(m)] for j in range(m)]
    G.set_characters(rows)
    return G


def trivial():
    return cyclic(1)


def _perm_mul(p, q):
    # (p q)(i) = p(q(i))
    return tuple(p[i] for i in q)


def sym3():
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[_perm_mul(p, q)] for q in perms] for p in perms]
    G = GroupTable(mul, name="sym3", check=False)
    # classes: {id}, {transpositions}, {3-cycles}
    G.set_characters([[1, 1, 1], [1, -1, 1], [2, 0, -1]], ["phi0", "sgn", "std"])
    return G


def builtin(name):
    key = name.strip().lower().replace(" ", "")
    if key in ("trivial", "1", "c1", "cyclic1", "cyclic(1)"):
        return _builtin(1)
    if key in ("sym3", "s3"):
        return _builtin("sym3")
    m = re.fullmatch(r"(?:cyclic|c|z)\(?(\d+)\)?", key)
    if m and int(m.group(1)) >= 1:
        return _builtin(int(m.group(1)))
    raise GroupError(f"unknown builtin group {name!r}")


@lru_cache(maxsize=None)
def _builtin(key):
    # one shared object per group so that downstream caches keyed on G hit
    return sym3() if key == "sym3" else cyclic(key)


def _closure(gens, cap=5040):
    d = len(gens[0])
    ident = tuple(range(d))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_mul(p, g)
                if q not in index:
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
                    if len(elems) > cap:
                        raise GroupError(f"permutation group order exceeds {cap}")
        frontier = nxt
    mul = [[index[_perm_mul(p, q)] for q in elems] for p in elems]
    return mul


def load_group(source):
    """A builtin name, a JSON file path, or an already parsed dict."""
    if isinstance(source, GroupTable):
        return source
    if isinstance(source, dict):
        data = source
    elif os.path.exists(str(source)):
        try:
            with open(source) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as e:
            raise GroupError(f"malformed group file: {e}") from e
    else:
        return builtin(str(source))
    if "cayley" in data:
        mul = data["cayley"]
    elif "perm_gens" in data:
        mul = _closure([tuple(g) for g in data["perm_gens"]])
    else:
        raise GroupError("group file needs 'cayley' or 'perm_gens'")
    G = GroupTable(mul, name=data.get("name", "G"))
    if "order" in data and data["order"] != G.order:
        raise GroupError(f"declared order {data['order']} differs from table order {G.order}")
    ct = data.get("char_table")
    if ct:
        N = int(ct.get("conductor", G.exponent))
        rows = []
        for row in ct["rows"]:
            vals = [cyclo_from_json(v) for v in row]
            if any(v.N != 1 and N % v.N for v in vals):
                raise GroupError("character value outside the declared conductor")
            rows.append(vals)
        reps = data.get("class_reps")
        if reps is not None:
            order = [int(G.class_of[r]) for r in reps]
            if sorted(order) != list(range(G.num_classes)):
                raise GroupError("class_reps do not hit every class exactly once")
            rows = [[row[order.index(c)] for c in range(G.num_classes)] for row in rows]
        G.set_characters(rows, ct.get("names"))
    return G


def group_to_json(G):
    out = {"name": G.name, "order": G.order, "cayley": G.mul.tolist()}
    if G.characters is not None:
        out["char_table"] = {"conductor": G.exponent,
                             "rows": [[cyclo_to_json(v) for v in r.values] for r in G.characters]}
        out["class_reps"] = [c.rep for c in G.classes]
    return out


# ------------------------------------------------------- graph expectations

def _spanning_data(vertices, edges):
    """Per component: (vertex list, excess edge ids); tree edges get no generator."""
    adj = {v: [] for v in vertices}
    for k, (s, t, _) in enumerate(edges):
        adj[s].append((k, t))
        adj[t].append((k, s))
    seen = set()
    comps = []
    gen_of = {}
    comp_of = {}
    for root in sorted(vertices):
        if root in seen:
            continue
        seen.add(root)
        order = [root]
        tree = set()
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for k, u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    tree.add(k)
                    order.append(u)
        cid = len(comps)
        excess = sorted({k for v in order for k, _ in adj[v]} - tree)
        for j, k in enumerate(excess):
            gen_of[k] = j
        for v in order:
            comp_of[v] = cid
        comps.append((order, excess))
    return comps, gen_of, comp_of


def path_words(vertices, edges, paths):
    """Rewrite closed walks (lists of (edge id, +-1)) over the spanning-tree basis.

    Returns (ranks per component, [(component, word)]) with words as tuples of
    signed 1-based generator indices, freely reduced."""
    comps, gen_of, comp_of = _spanning_data(vertices, edges)
    ranks = [len(ex) for _, ex in comps]
    out = []
    for path in paths:
        if not path:
            raise GroupError("empty path")
        k0, d0 = path[0]
        start = edges[k0][0] if d0 > 0 else edges[k0][1]
        word = []
        for k, d in path:
            if k in gen_of:
                x = (gen_of[k] + 1) * d
                if word and word[-1] == -x:
                    word.pop()
                else:
                    word.append(x)
        out.append((comp_of[start], tuple(word)))
    return ranks, out


@lru_cache(maxsize=4096)
def class_histogram(G, words, rank):
    """Counts of class tuples of (w_1(beta), ..., w_k(beta)) over beta in G^rank."""
    m = G.order
    total = m**rank
    if total * max(1, sum(len(w) for w in words)) > DEFAULT_ENUM_CAP:
        raise BudgetExceeded(f"enumeration of {m}^{rank} assignments exceeds the cap")
    if rank:
        A = np.indices((m,) * rank).reshape(rank, -1)
    else:
        A = np.zeros((0, 1), dtype=np.int64)
    code = np.zeros(total, dtype=np.int64)
    nc = G.num_classes
    for w in words:
        cur = np.full(total, G.identity, dtype=np.int64)
        for x in w:
            col = A[abs(x) - 1]
            cur = G.mul[cur, col if x > 0 else G.inv[col]]
        code = code * nc + G.class_of[cur]
    keys, counts = np.unique(code, return_counts=True)
    hist = {}
    for key, cnt in zip(keys.tolist(), counts.tolist()):
        tup = []
        for _ in words:
            tup.append(key % nc)
            key //= nc
        hist[tuple(reversed(tup))] = cnt
    return hist, total


def words_expectation(G, words, rank, zetas):
    """E over beta in G^rank of prod_i zeta_i(w_i(beta))."""
    hist, total = class_histogram(G, tuple(words), rank)
    acc = CycloNumber.rational(0)
    for classes, cnt in hist.items():
        term = CycloNumber.rational(cnt)
        for z, c in zip(zetas, classes):
            term = term * z.values[c]
            if term.is_zero():
                break
        acc = acc + term
    return acc / total


def graph_expectation(graph, loads, G=None):
    """E_eta[zeta] for closed walks on a multi core graph.

    graph has .vertices and .edges (src, dst, label); loads is a list of
    (path, zeta) with path a list of (edge id, +-1)."""
    if not loads:
        return CycloNumber.rational(1)
    G = G or loads[0][1].group
    ranks, words = path_words(list(graph.vertices), list(graph.edges), [p for p, _ in loads])
    per_comp = {}
    for (cid, word), (_, z) in zip(words, loads):
        per_comp.setdefault(cid, []).append((word, z))
    budget = 1
    for cid in per_comp:
        budget *= G.order ** ranks[cid]
    if budget > DEFAULT_ENUM_CAP:
        raise BudgetExceeded(f"|G|^rank = {budget} exceeds the enumeration cap")
    result = CycloNumber.rational(1)
    for cid in sorted(per_comp):
        items = per_comp[cid]
        result = result * words_expectation(G, [w for w, _ in items], ranks[cid], [z for _, z in items])
        if result.is_zero():
            break
    return result


def cyclic_expectation_closed_form(w, m):
    """1 iff every signed letter count of w is divisible by m."""
    letters = getattr(w, "letters", w)
    counts = {}
    for x in letters:
        counts[abs(x)] = counts.get(abs(x), 0) + (1 if x > 0 else -1)
    return 1 if all(v % m == 0 for v in counts.values()) else 0
