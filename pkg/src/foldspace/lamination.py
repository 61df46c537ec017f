"""Legal structures, language approximations, and cylinder weights.

The lamination carried by an unfolding sequence is approximated through
finite data: turns that stay nondegenerate under the composite maps (legal),
turns actually crossed by deep composite images (taken), the set of length-L
words occurring in images of deep paths, and the cylinder-weight sums that
identify currents with shift-invariant measures.

Word harvesting defaults to paths through taken turns — the windows that
genuinely occur in deep images.  Harvesting over all legal paths is kept as
an explicit mode (``source="legal"``); it is the right control for
degenerate sequences where nothing folds.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log

from .errors import (BudgetExceededError, DirectionError, InvalidTrackError,
                     ShallowDepthError)
from .paths import count_occurrences, require_reduced, reverse_path
from .sequences import _turn, path_turns


@dataclass(frozen=True)
class LegalStructure:
    """Turn legality at one level: gates partition directions at a vertex."""
    level: int
    graph: object
    legal_turns: frozenset

    def is_legal(self, x, y):
        return _turn(x, y) in self.legal_turns

    def gates_at(self, vertex):
        """Partition of outgoing directions into gates (illegality classes)."""
        out = list(self.graph.out_edges(vertex))
        gates = []
        for e in out:
            for gate in gates:
                if not self.is_legal(e, gate[0]):
                    gate.append(e)
                    break
            else:
                gates.append([e])
        return tuple(tuple(g) for g in gates)

    def has_legal_continuation(self, e):
        v = self.graph.term(e)
        return any(ep != -e and self.is_legal(-e, ep)
                   for ep in self.graph.out_edges(v))


def gates(seq, level):
    """Legal structure at a level of an unfolding sequence, from first edges
    of composite images."""
    if seq.direction != "unfolding":
        raise DirectionError("legal structures live on unfolding sequences")
    g = seq.graph_at(level)
    fmap = seq.first_edge_composite(level)
    legal = set()
    for v in g.vertices:
        out = g.out_edges(v)
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                if fmap[out[i]] != fmap[out[j]]:
                    legal.add(_turn(out[i], out[j]))
    return LegalStructure(level=level, graph=g, legal_turns=frozenset(legal))


@dataclass(frozen=True)
class LanguageApprox:
    """Length-L words found in deep images, up to flip."""
    depth: int
    L: int
    words: frozenset
    source: str

    @property
    def count(self):
        return len(self.words)


def _flip_canonical(word):
    return min(word, reverse_path(word))


def _harvest_paths(graph, allowed_turns, max_len, budget):
    """Reduced paths of length <= max_len whose turns all lie in the set."""
    paths = []
    stack = [(e,) for e in graph.oriented_edges()]
    while stack:
        p = stack.pop()
        paths.append(p)
        if len(paths) > budget:
            raise BudgetExceededError(
                f"legal-path enumeration exceeded {budget} paths")
        if len(p) == max_len:
            continue
        last = p[-1]
        for nxt in graph.out_edges(graph.term(last)):
            if nxt != -last and _turn(-last, nxt) in allowed_turns:
                stack.append(p + (nxt,))
    return paths


def _windows(seq, level, paths, L, *, canonical=True):
    words = set()
    for p in paths:
        image = []
        for e in p:
            image.extend(seq.expansion(level, e))
        for k in range(len(image) - L + 1):
            w = tuple(image[k:k + L])
            words.add(_flip_canonical(w) if canonical else w)
    return words


def _harvest(seq, depth, L, source, require_depth, budget, canonical):
    if seq.direction != "unfolding":
        raise DirectionError("language harvesting needs an unfolding "
                             "sequence")
    if depth < 1 or depth > seq.n_steps:
        raise ShallowDepthError(
            f"depth {depth} outside the stored range 1..{seq.n_steps}")
    level = -depth
    g = seq.graph_at(level)
    lengths = seq.image_lengths(level)
    if require_depth and max(lengths) < L:
        raise ShallowDepthError(
            f"longest composite image at depth {depth} has {max(lengths)} "
            f"edges < window length {L}; deepen the truncation")
    if source == "taken":
        allowed = seq.taken_turns_at(level)
    elif source == "legal":
        allowed = gates(seq, level).legal_turns
    else:
        raise ValueError(f"unknown harvesting source {source!r}")
    cap = 2 + ceil(L / max(1, min(lengths)))
    paths = _harvest_paths(g, allowed, cap, budget)
    return _windows(seq, level, paths, L, canonical=canonical)


def allowed_words(seq, depth, L, *, source="taken", require_depth=True,
                  budget=200_000):
    """Length-L words of the right-end graph occurring in depth-m images.

    Windows are collected from composite images of short paths through
    allowed turns; words are stored up to flip (a word and its reverse
    count once).
    """
    words = _harvest(seq, depth, L, source, require_depth, budget,
                     canonical=True)
    return LanguageApprox(depth=depth, L=L, words=frozenset(words),
                          source=source)


@dataclass(frozen=True)
class ComplexityProfile:
    depths: tuple
    L_max: int
    counts: dict
    entropy: float
    entropy_series: tuple
    subexponential: bool
    stable: bool


def complexity_profile(seq, depths, L_max, *, source="taken",
                       require_depth=True):
    """|B_L| table at the deepest depth, entropy estimate at L_max.

    ``stable`` reports whether the two deepest depths agree on every count;
    ``subexponential`` whether log|B_L|/L is nonincreasing over trailing L.
    """
    depths = sorted(set(depths))
    if not depths:
        raise ValueError("no depths supplied")
    deepest = depths[-1]
    counts = {}
    for L in range(1, L_max + 1):
        counts[L] = allowed_words(seq, deepest, L, source=source,
                                  require_depth=require_depth).count
    stable = True
    if len(depths) >= 2:
        for L in range(1, L_max + 1):
            other = allowed_words(seq, depths[-2], L, source=source,
                                  require_depth=require_depth).count
            if other != counts[L]:
                stable = False
                break
    series = tuple(log(counts[L]) / L if counts[L] else 0.0
                   for L in range(1, L_max + 1))
    tail = series[L_max // 2:]
    subexp = all(a >= b for a, b in zip(tail, tail[1:]))
    return ComplexityProfile(depths=tuple(depths), L_max=L_max,
                             counts=counts, entropy=series[-1],
                             entropy_series=series, subexponential=subexp,
                             stable=stable)


# -- cylinder weights ----------------------------------------------------


def cylinder_weight(seq, current_track, gamma, level):
    """The sum over oriented edges of mu_n(e) times the number of oriented
    occurrences of gamma in the composite image of e.

    Nondecreasing as the level moves toward the deep end; the defect against
    the one-edge-extension sum is bounded by the oriented mass of mu_n.
    """
    if current_track.kind != "current":
        raise InvalidTrackError("cylinder weights pair with current tracks")
    if current_track.seq is not seq:
        raise InvalidTrackError("track belongs to a different sequence")
    gamma = tuple(gamma)
    require_reduced(gamma, what="cylinder word")
    seq.graph_at(seq.levels[-1]).check_path(gamma)
    g = seq.graph_at(level)
    mu = current_track.at(level)
    rev = reverse_path(gamma)
    total = Fraction(0)
    for j in range(g.n_edges):
        image = seq.expansion(level, j + 1)
        hits = count_occurrences(image, gamma)
        if rev != gamma:
            hits += count_occurrences(image, rev)
        else:
            hits *= 2
        total += Fraction(mu[j]) * hits
    return total


def flip_cylinder_weight(seq, current_track, gamma, level):
    """Weight of gamma plus its reverse (flip-symmetrized accessor)."""
    return (cylinder_weight(seq, current_track, gamma, level)
            + cylinder_weight(seq, current_track, reverse_path(gamma), level))


def one_edge_extensions(graph, gamma):
    """Reduced one-edge forward extensions of a reduced path."""
    last = gamma[-1]
    return tuple(gamma + (e,) for e in graph.out_edges(graph.term(last))
                 if e != -last)


def oriented_mass(current_track, level):
    """Sum of mu_n over oriented edges (twice the unoriented sum)."""
    return 2 * sum(current_track.at(level), Fraction(0))


def sandwich_report(seq, current_track, gamma, level):
    """Exact lower/upper bounds around the cylinder weight of gamma.

    Lower: sum of weights of one-edge extensions; upper: lower plus the
    oriented mass of mu at the level (each edge image can end mid-word at
    most once per orientation).
    """
    g0 = seq.graph_at(seq.levels[-1])
    lo = sum((cylinder_weight(seq, current_track, ext, level)
              for ext in one_edge_extensions(g0, tuple(gamma))), Fraction(0))
    w = cylinder_weight(seq, current_track, gamma, level)
    hi = lo + oriented_mass(current_track, level)
    return {"lower": lo, "weight": w, "upper": hi,
            "ok": lo <= w <= hi}


# -- minimal components --------------------------------------------------


def _tarjan_scc(nodes, edges):
    """Iterative Tarjan; returns list of components (lists of nodes)."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    cstack = []
    counter = [0]
    comps = []
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        cstack.append(root)
        onstack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    cstack.append(nxt)
                    onstack.add(nxt)
                    work.append((nxt, iter(edges.get(nxt, ()))))
                    advanced = True
                    break
                if nxt in onstack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = cstack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                comps.append(comp)
    return comps


@dataclass(frozen=True)
class MinimalComponentsReport:
    count: int
    sizes: tuple
    bound: int
    bound_ok: bool
    depth: int
    L: int


def minimal_components(seq, depth, L, *, source="taken", require_depth=True):
    """Sink components of the word-overlap (Rauzy) graph, up to flip.

    Words of length L are nodes; each (L+1)-word contributes the edge
    prefix -> suffix.  Sink strongly connected components approximate
    minimal sublaminations; flipped pairs count once.  The count is checked
    against the 3N-3 bound.
    """
    words = _harvest(seq, depth, L, source, require_depth,
                     budget=200_000, canonical=False)
    longer = _harvest(seq, depth, L + 1, source, require_depth,
                      budget=200_000, canonical=False)
    edges = {}
    for u in longer:
        a, b = u[:L], u[1:]
        if a in words and b in words:
            edges.setdefault(a, []).append(b)
    comps = _tarjan_scc(sorted(words), edges)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for w in comp:
            comp_of[w] = ci
    sinks = []
    for ci, comp in enumerate(comps):
        if all(comp_of[v] == ci for w in comp
               for v in edges.get(w, ())):
            sinks.append(frozenset(comp))
    orbits = set()
    for comp in sinks:
        flipped = frozenset(reverse_path(w) for w in comp)
        key = min(tuple(sorted(comp)), tuple(sorted(flipped)))
        orbits.add(key)
    N = seq.graph_at(seq.levels[-1]).betti()
    bound = 3 * N - 3
    count = len(orbits)
    return MinimalComponentsReport(count=count,
                                   sizes=tuple(sorted(len(c) for c in sinks)),
                                   bound=bound, bound_ok=count <= bound,
                                   depth=depth, L=L)
