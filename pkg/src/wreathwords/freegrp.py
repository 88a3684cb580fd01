"""Words in free groups, labeled core graphs, Stallings folding and quotient lattices."""
from __future__ import annotations

from collections import deque

from . import groups as _groups

DEFAULT_VERTEX_CAP = 14


class WordError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


def _free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word; letters are +-i for b_i^{+-1}."""

    __slots__ = ("letters", "rank")

    def __init__(self, letters=(), rank=None):
        letters = tuple(int(x) for x in letters)
        if any(x == 0 for x in letters):
            raise WordError("letter 0 is not allowed")
        self.letters = _free_reduce(letters)
        top = max((abs(x) for x in letters), default=0)
        self.rank = top if rank is None else rank
        if top > self.rank:
            raise WordError(f"letter b{top} exceeds rank {self.rank}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other):
        return Word(self.letters + other.letters, max(self.rank, other.rank))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k, self.rank)

    def inverse(self):
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(letter_name(x) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def pretty(self):
        if not self.letters:
            return "1"
        out = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            x = L[i]
            e = (j - i) * (1 if x > 0 else -1)
            out.append(f"b{abs(x)}" + ("" if e == 1 else f"^{e}"))
            i = j
        return " ".join(out)


def letter_name(x):
    if abs(x) <= 26:
        c = chr(ord("a") + abs(x) - 1)
        return c if x > 0 else c.upper()
    return f"b{abs(x)}" + ("" if x > 0 else "'")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise WordError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self, stop=""):
        out = []
        while True:
            c = self.peek()
            if c == "" or c in stop:
                return out
            out.extend(self.item())

    def item(self):
        c = self.peek()
        if c.isalpha() and c.isascii():
            self.pos += 1
            x = ord(c.lower()) - ord("a") + 1
            atom = [x if c.islower() else -x]
        elif c == "(":
            self.pos += 1
            atom = self.expr(")")
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c == "[":
            self.pos += 1
            a = self.expr(",")
            if self.peek() != ",":
                self.error("expected ','")
            self.pos += 1
            b = self.expr("]")
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            atom = a + b + [-x for x in reversed(a)] + [-x for x in reversed(b)]
        else:
            self.error(f"unexpected character {c!r}")
        if self.peek() == "^":
            self.pos += 1
            start = self.pos
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            digits = self.text[start:self.pos]
            if digits in ("", "+", "-"):
                self.error("expected an integer exponent")
            k = int(digits)
            atom = atom * k if k >= 0 else [-x for x in reversed(atom)] * (-k)
        return atom


def parse_word(text, rank=None):
    p = _Parser(text)
    letters = p.expr()
    if p.peek() != "":
        p.error("trailing input")
    return Word(letters, rank)


def cyclic_reduce(w):
    """(core, c) with w = c core c^-1 and core cyclically reduced."""
    L = list(w.letters)
    i = 0
    while len(L) - 2 * i >= 2 and L[i] == -L[len(L) - 1 - i]:
        i += 1
    core = Word(L[i:len(L) - i], w.rank)
    return core, Word(L[:i], w.rank)


def power_decompose(w):
    n = len(w)
    if n == 0:
        raise WordError("empty word has no root")
    for p in range(1, n + 1):
        if n % p == 0 and all(w.letters[i] == w.letters[i % p] for i in range(n)):
            return Word(w.letters[:p], w.rank), n // p
    raise AssertionError("unreachable")


def abelian_counts(w, rank=None):
    r = rank or w.rank
    nu = [0] * r
    for x in w.letters:
        nu[abs(x) - 1] += 1 if x > 0 else -1
    return nu


def is_cyclically_reduced(w):
    return len(w) == 0 or w.letters[0] != -w.letters[-1]


# ------------------------------------------------------------------ graphs

class MultiCoreGraph:
    """Vertices 0..V-1 and labeled directed edges (src, dst, label)."""

    __slots__ = ("vertices", "edges")

    def __init__(self, num_vertices, edges):
        self.vertices = range(num_vertices)
        self.edges = tuple(edges)

    @property
    def num_vertices(self):
        return len(self.vertices)

    def euler_char(self):
        return len(self.vertices) - len(self.edges)

    def label_counts(self, rank):
        out = [0] * rank
        for _, _, b in self.edges:
            out[b - 1] += 1
        return tuple(out)

    def is_folded(self):
        seen = set()
        for s, t, b in self.edges:
            if (s, b, 1) in seen or (t, b, -1) in seen:
                return False
            seen.add((s, b, 1))
            seen.add((t, b, -1))
        return True

    def degrees(self):
        deg = [0] * len(self.vertices)
        for s, t, _ in self.edges:
            deg[s] += 1
            deg[t] += 1
        return deg

    def components(self):
        parent = list(self.vertices)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t, _ in self.edges:
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps = {}
        for v in self.vertices:
            comps.setdefault(find(v), []).append(v)
        return [comps[k] for k in sorted(comps)]

    def dump(self):
        return "\n".join(f"{s} --{letter_name(b)}--> {t}" for s, t, b in sorted(self.edges))

    def __repr__(self):
        return f"MultiCoreGraph(V={len(self.vertices)}, E={len(self.edges)})"


def euler_char(graph):
    return graph.euler_char()


def _component_code(graph, comp, start, marked):
    order = {start: 0}
    queue = deque([start])
    out_adj = {}
    for s, t, b in graph.edges:
        out_adj.setdefault(s, []).append((b, 1, t))
        out_adj.setdefault(t, []).append((b, -1, s))
    code = []
    while queue:
        v = queue.popleft()
        for b, d, u in sorted(out_adj.get(v, ()), key=lambda e: (e[0], e[1])):
            if u not in order:
                order[u] = len(order)
                queue.append(u)
    for s, t, b in graph.edges:
        if s in order:
            code.append((order[s], b, order[t]))
    code.sort()
    marks = tuple(sorted((order[v], marked[v]) for v in comp if v in marked)) if marked else ()
    return (len(comp), tuple(code), marks)


def canonical_key(graph, marked=None):
    """Label-respecting canonical form; equal keys iff isomorphic over the bouquet.

    The BFS numbering is forced once the start vertex is fixed because the graph
    is folded, so the minimum over start vertices is a complete invariant."""
    marked = marked or {}
    keys = []
    for comp in graph.components():
        keys.append(min(_component_code(graph, comp, v, marked) for v in comp))
    keys.sort()
    return repr(keys)


class WGraph:
    """Disjoint cycles spelling w^{lam_i}; paths are lists of (edge id, +-1)."""

    def __init__(self, word, lam, graph, paths, roots):
        self.word = word
        self.lam = tuple(lam)
        self.graph = graph
        self.paths = paths
        self.roots = roots

    @property
    def num_vertices(self):
        return self.graph.num_vertices

    def __repr__(self):
        return f"WGraph({self.word}, {self.lam})"


def build_w_graph(w, lam, words=None):
    """w-graph of w^lam; with words given, cycle i spells words[i]^{lam_i} instead."""
    if words is None:
        if len(w) == 0:
            raise WordError("empty word")
        if not is_cyclically_reduced(w):
            raise WordError("w must be cyclically reduced")
        words = [w] * len(lam)
    edges = []
    paths = []
    roots = []
    base = 0
    for u, part in zip(words, lam):
        letters = u.letters * part
        L = len(letters)
        path = []
        for j, x in enumerate(letters):
            a, b = base + j, base + (j + 1) % L
            if x > 0:
                edges.append((a, b, x))
                path.append((len(edges) - 1, 1))
            else:
                edges.append((b, a, -x))
                path.append((len(edges) - 1, -1))
        paths.append(path)
        roots.append([base + k * len(u) for k in range(part)])
        base += L
    g = MultiCoreGraph(base, edges)
    return WGraph(w, lam, g, paths, roots)


class QuotientClass:
    __slots__ = ("source", "partition", "image", "path_images", "vertex_map", "edge_map", "edge_fiber")

    def __init__(self, source, blocks_of):
        # blocks_of: canonical block index per source vertex
        g = source.graph
        self.source = source
        nb = max(blocks_of) + 1 if len(blocks_of) else 0
        blocks = [[] for _ in range(nb)]
        for v, b in enumerate(blocks_of):
            blocks[b].append(v)
        self.partition = tuple(tuple(b) for b in blocks)
        self.vertex_map = tuple(blocks_of)
        index = {}
        img_edges = []
        emap = []
        fiber = []
        for s, t, b in g.edges:
            key = (blocks_of[s], blocks_of[t], b)
            if key not in index:
                index[key] = len(img_edges)
                img_edges.append(key)
                fiber.append(0)
            emap.append(index[key])
            fiber[index[key]] += 1
        self.image = MultiCoreGraph(nb, img_edges)
        self.edge_map = tuple(emap)
        self.edge_fiber = tuple(fiber)
        self.path_images = [[(emap[k], d) for k, d in path] for path in source.paths]

    def key(self):
        return self.partition

    def rank(self):
        """1 - chi of the image (meaningful for connected images)."""
        return 1 - self.image.euler_char()

    def L_key(self, rank):
        return (self.image.num_vertices, self.image.label_counts(rank))

    def path_words(self):
        """(ranks per image component, [(component, word)]) in a spanning-tree basis."""
        img = self.image
        return _groups.path_words(list(img.vertices), list(img.edges), self.path_images)

    def __repr__(self):
        return f"QuotientClass({self.partition})"


def _canonical_labels(find, n):
    relabel = {}
    out = []
    for v in range(n):
        r = find(v)
        if r not in relabel:
            relabel[r] = len(relabel)
        out.append(relabel[r])
    return tuple(out)


def _close(edges, n, labels):
    """Smallest fold-closed coarsening of the partition given by labels."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a == b:
            return False
        parent[max(a, b)] = min(a, b)
        return True

    first = {}
    for v, lab in enumerate(labels):
        if lab in first:
            union(first[lab], v)
        else:
            first[lab] = v
    changed = True
    while changed:
        changed = False
        out_of = {}
        in_of = {}
        for s, t, b in edges:
            fs, ft = find(s), find(t)
            k = (fs, b)
            if k in out_of:
                if union(out_of[k], ft):
                    changed = True
            else:
                out_of[k] = ft
            k = (ft, b)
            if k in in_of:
                if union(in_of[k], fs):
                    changed = True
            else:
                in_of[k] = fs
    return _canonical_labels(find, n)


def fold_closure(g, seed):
    """seed: a list of blocks or a per-vertex label tuple."""
    n = g.num_vertices
    if seed and isinstance(seed[0], (list, tuple, set, frozenset)):
        labels = [0] * n
        for i, block in enumerate(seed):
            for v in block:
                labels[v] = i
    else:
        labels = list(seed)
    return QuotientClass(g, _close(g.graph.edges, n, labels))


def enumerate_quotient_labels(g, cap=DEFAULT_VERTEX_CAP):
    """All fold-closed partitions of g, as canonical label tuples.

    Depth-first over vertices in index order: each vertex joins an existing block
    or opens a new one, and a choice survives only if the partial quotient stays
    folded. Restricted growth labels make every partition appear exactly once."""
    n = g.num_vertices
    if n > cap:
        raise CapExceeded(f"w-graph has {n} vertices, above the quotient cap {cap}")
    back = [[] for _ in range(n)]
    for s, t, b in g.graph.edges:
        back[max(s, t)].append((s, t, b))
    img = [0] * n
    outm, inm = [], []
    found = []

    def place(v, c):
        log = []
        img[v] = c
        for s, t, b in back[v]:
            cs, ct = img[s], img[t]
            o = outm[cs].get(b)
            i = inm[ct].get(b)
            if (o is not None and o != ct) or (i is not None and i != cs):
                return log, False
            if o is None:
                outm[cs][b] = ct
                log.append((outm[cs], b))
            if i is None:
                inm[ct][b] = cs
                log.append((inm[ct], b))
        return log, True

    def rec(v, nb):
        if v == n:
            found.append(tuple(img))
            return
        forced = None
        for s, t, b in back[v]:
            if s != t:
                forced = outm[img[s]].get(b) if t == v else inm[img[t]].get(b)
                if forced is not None:
                    break
        for c in ([forced] if forced is not None else range(nb + 1)):
            new = c == nb
            if new:
                outm.append({})
                inm.append({})
            log, ok = place(v, c)
            if ok:
                rec(v + 1, nb + new)
            for d, b in log:
                del d[b]
            if new:
                outm.pop()
                inm.pop()

    rec(0, 0)
    found.sort(key=lambda lab: (-max(lab, default=0), lab))
    return found


def closure_quotient_labels(g, cap=DEFAULT_VERTEX_CAP):
    """Same set as enumerate_quotient_labels, by BFS over pairwise merges and fold closure."""
    n = g.num_vertices
    if n > cap:
        raise CapExceeded(f"w-graph has {n} vertices, above the quotient cap {cap}")
    edges = g.graph.edges
    start = _close(edges, n, tuple(range(n)))
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        nb = max(p) + 1
        for i in range(nb):
            for j in range(i + 1, nb):
                labels = [i if x == j else x for x in p]
                q = _close(edges, n, labels)
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return sorted(seen, key=lambda lab: (-max(lab), lab))


def enumerate_quotients(g, cap=DEFAULT_VERTEX_CAP):
    return [QuotientClass(g, lab) for lab in enumerate_quotient_labels(g, cap)]


def set_partitions(n):
    """All partitions of range(n) as restricted growth label tuples."""
    if n == 0:
        yield ()
        return

    def rec(prefix, m):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(m + 1):
            prefix.append(b)
            yield from rec(prefix, max(m, b + 1))
            prefix.pop()

    yield from rec([0], 1)


def brute_force_quotient_labels(g):
    """Bell-number oracle: fold every vertex partition and dedupe."""
    n = g.num_vertices
    return {_close(g.graph.edges, n, lab) for lab in set_partitions(n)}
