"""Stretch distances via candidate loops, length/current pairing, and the
slow-progress diagnostics (non-filling support horizons, linear speed).

Candidate enumeration is exact for embedded circles, figure-eights and
barbells; the one-sided distance maximizes the stretch over candidates of
the domain graph.  A brute-force check over short cyclic words is provided
for cross-validation on small graphs.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (BudgetExceededError, DirectionError, GraphStructureError,
                     MalformedPathError)
from .graphs import MarkedGraph
from .linalg import frac_log
from .paths import (canonical_cycle, cyclic_tighten, reverse_path, tighten)


# -- candidates ----------------------------------------------------------


@dataclass(frozen=True)
class CandidateLoop:
    kind: str        # circle | figure-eight | barbell
    path: tuple


def _graph_of(obj):
    return obj.graph if isinstance(obj, MarkedGraph) else obj


def _embedded_circles(g):
    """Vertex-simple cycles as reduced edge paths, up to rotation and
    reversal."""
    out = {}

    def rec(v, path, visited, v0):
        for e in g.out_edges(v):
            if path and e == -path[-1]:
                continue
            w = g.term(e)
            if w == v0:
                cyc = path + (e,)
                if len(cyc) == 1 or cyc[0] != -e:
                    out.setdefault(canonical_cycle(cyc), cyc)
            elif w not in visited:
                rec(w, path + (e,), visited | {w}, v0)

    for v0 in g.vertices:
        rec(v0, (), frozenset((v0,)), v0)
    return list(out.values())


def _cycle_vertices(g, cyc):
    return [g.init(e) for e in cyc]


def _rotate_to(g, cyc, u):
    verts = _cycle_vertices(g, cyc)
    i = verts.index(u)
    return cyc[i:] + cyc[:i]


def _arcs_between(g, vs1, vs2):
    """Embedded arcs from a vertex of vs1 to a vertex of vs2 whose interior
    avoids both."""
    arcs = []

    def rec(v, path, visited):
        for e in g.out_edges(v):
            if path and e == -path[-1]:
                continue
            w = g.term(e)
            if w in vs2:
                arcs.append(path + (e,))
            elif w not in vs1 and w not in visited:
                rec(w, path + (e,), visited | {w})

    for u in sorted(vs1):
        rec(u, (), frozenset())
    return arcs


def candidates(graph, *, max_betti=5):
    """Candidate loops: embedded circles, figure-eights (circles meeting in
    one vertex, both relative orientations) and barbells (disjoint circles
    joined by an embedded arc, both orientations)."""
    g = _graph_of(graph)
    if g.betti() > max_betti:
        raise BudgetExceededError(
            f"candidate enumeration capped at rank {max_betti}, "
            f"got {g.betti()}")
    circles = _embedded_circles(g)
    seen = {}
    loops = []

    def record(kind, path):
        key = canonical_cycle(path)
        if key not in seen:
            seen[key] = True
            loops.append(CandidateLoop(kind=kind, path=path))

    for c in circles:
        record("circle", c)
    for i in range(len(circles)):
        vi = set(_cycle_vertices(g, circles[i]))
        for j in range(i + 1, len(circles)):
            vj = set(_cycle_vertices(g, circles[j]))
            shared = vi & vj
            if len(shared) == 1:
                u = next(iter(shared))
                w1 = _rotate_to(g, circles[i], u)
                w2 = _rotate_to(g, circles[j], u)
                record("figure-eight", w1 + w2)
                record("figure-eight", w1 + reverse_path(w2))
            elif not shared:
                for arc in _arcs_between(g, vi, vj):
                    u, v = g.init(arc[0]), g.term(arc[-1])
                    w1 = _rotate_to(g, circles[i], u)
                    w2 = _rotate_to(g, circles[j], v)
                    back = reverse_path(arc)
                    record("barbell", w1 + arc + w2 + back)
                    record("barbell", w1 + arc + reverse_path(w2) + back)
    return tuple(loops)


def thickness(marked):
    """Length of the shortest embedded circle."""
    g = marked.graph
    circles = _embedded_circles(g)
    if not circles:
        raise GraphStructureError("graph has no circles")
    return min(marked.length_of_path(c) for c in circles)


# -- stretch distances ---------------------------------------------------


@dataclass(frozen=True)
class LipschitzReport:
    distance: float
    ratio: Fraction
    witness: CandidateLoop
    witness_word: tuple
    per_candidate: tuple      # ((kind, path, ratio), ...)


def lipschitz_distance(T, U):
    """One-sided stretch distance log max l_U(w)/l_T(w), the max taken over
    candidate loops of T (which realize the supremum over all loops)."""
    T.require_positive()
    U.require_positive()
    if T.marking.rank != U.marking.rank:
        raise GraphStructureError("ranks differ")
    best = None
    rows = []
    for cand in candidates(T.graph):
        lt = T.length_of_path(cand.path)
        word = T.marking.word_of_loop(cand.path)
        if not word:
            raise MalformedPathError("candidate has trivial marking image")
        lu = U.translation_length(word)
        ratio = Fraction(lu) / Fraction(lt)
        rows.append((cand.kind, cand.path, ratio))
        if best is None or ratio > best[0]:
            best = (ratio, cand, word)
    ratio, cand, word = best
    return LipschitzReport(distance=frac_log(ratio), ratio=ratio,
                           witness=cand, witness_word=word,
                           per_candidate=tuple(rows))


def _cyclic_words(rank, max_len):
    """Cyclically reduced words in a rank-N free group up to length
    max_len, one representative per rotation/inversion class."""
    letters = [i for i in range(1, rank + 1)] + \
              [-i for i in range(1, rank + 1)]
    seen = set()
    out = []

    def rec(word):
        if word and word[0] != -word[-1]:
            key = canonical_cycle(word)
            if key not in seen:
                seen.add(key)
                out.append(word)
        if len(word) == max_len:
            return
        for x in letters:
            if word and x == -word[-1]:
                continue
            rec(word + (x,))

    rec(())
    return out


@dataclass(frozen=True)
class BruteforceReport:
    distance: float
    ratio: Fraction
    witness_word: tuple
    words_checked: int


def lipschitz_bruteforce(T, U, max_len):
    """Stretch maximum over all cyclically reduced words up to max_len.

    Requires max_len >= 2 * |edges of T| so the search space provably
    contains every candidate word; agrees exactly with
    ``lipschitz_distance`` under that bound.
    """
    T.require_positive()
    U.require_positive()
    if max_len < 2 * T.graph.n_edges:
        raise BudgetExceededError(
            f"need max_len >= {2 * T.graph.n_edges} to cover candidates")
    if (2 * T.marking.rank - 1) ** max_len > 5_000_000:
        raise BudgetExceededError(
            "brute-force word tree too large at this rank and length")
    best = None
    words = _cyclic_words(T.marking.rank, max_len)
    for w in words:
        lt = T.translation_length(w)
        if lt == 0:
            continue
        ratio = Fraction(U.translation_length(w)) / Fraction(lt)
        if best is None or ratio > best[0]:
            best = (ratio, w)
    ratio, w = best
    return BruteforceReport(distance=frac_log(ratio), ratio=ratio,
                            witness_word=w, words_checked=len(words))


# -- pairing -------------------------------------------------------------


def edge_current_of_word(marked, word):
    """Unoriented edge crossings of the cyclic geodesic representing a
    word (zero vector for the trivial class)."""
    loop = marked.geodesic_loop(word)
    counts = [0] * marked.graph.n_edges
    for e in loop:
        counts[abs(e) - 1] += 1
    return tuple(counts)


def kl_pairing(lengths, current):
    """Sum of length(e) * current(e); accepts a marked graph or a raw
    length vector."""
    if isinstance(lengths, MarkedGraph):
        lengths = lengths.lengths
    if len(lengths) != len(current):
        raise GraphStructureError("pairing dimensions differ")
    return sum((Fraction(l) * Fraction(c)
                for l, c in zip(lengths, current)), Fraction(0))


# -- non-filling support horizons ---------------------------------------


def _support_step(step):
    cache = getattr(step, "_support_cache", None)
    if cache is None:
        cache = {}
        g = step.domain
        for j, name in enumerate(g.edge_ids):
            img = step.edge_image(j + 1)
            cache[name] = frozenset(step.codomain.edge_name(abs(e))
                                    for e in img)
        step._support_cache = cache
    return cache


def _apply_support(step, support):
    table = _support_step(step)
    out = set()
    for name in support:
        out |= table[name]
    return frozenset(out)


def _advance_run(step, support, length, full):
    """Push a support through ``length`` repeats of one step.

    Returns (offset where it first fills, or None; support at run end when
    it never fills).  Cycle detection keeps this O(#states) regardless of
    run length.
    """
    if support == full:
        return 0, None
    seen = {support: 0}
    trail = [support]
    t = 0
    s = support
    while t < length:
        s = _apply_support(step, s)
        t += 1
        if s == full:
            return t, None
        if s in seen:
            start = seen[s]
            period = t - start
            rem = (length - start) % period
            return None, trail[start + rem]
        seen[s] = t
        trail.append(s)
    return None, s


def fills(seq, level, support):
    """Least m >= 0 such that pushing the support forward m steps covers
    every edge, or None if it stays proper through the final level.

    Full support is absorbing: change-of-marking steps are surjective on
    edges, so once everything is covered it stays covered.
    """
    i = seq._internal(level)
    g = seq.graph_at(level)
    support = frozenset(support)
    for name in support:
        g.edge_index(name)
    memo = seq.__dict__.setdefault("_fill_memo", {})
    offset = 0
    runs = seq.step_runs
    # locate the run containing internal step i and handle the partial run
    for ridx, (start, length, step) in enumerate(runs):
        if i >= start + length:
            continue
        full = frozenset(step.domain.edge_ids)
        if i > start:
            hit, support = _advance_run(step, support, start + length - i,
                                        full)
            if hit is not None:
                return offset + hit
            offset += start + length - i
        else:
            key = (ridx, support)
            if key in memo:
                hit, end = memo[key]
                if hit is not None:
                    return offset + hit
                support = end
                offset += length
                continue
            hit, end = _advance_run(step, support, length, full)
            memo[key] = (hit, end)
            if hit is not None:
                return offset + hit
            support = end
            offset += length
    return None


@dataclass(frozen=True)
class NonFillingWitness:
    edge: str
    horizon: int
    survives: bool     # proper all the way to the final level


def non_filling_witness(seq, level):
    """Single-edge support at ``level`` whose pushforward stays proper the
    longest; horizon counts the steps it remains proper."""
    g = seq.graph_at(level)
    remaining = seq.n_steps - seq._internal(level)
    best = None
    for name in g.edge_ids:
        hit = fills(seq, level, (name,))
        if hit is None:
            horizon, survives = remaining, True
        else:
            horizon, survives = hit - 1, False
        if best is None or horizon > best.horizon:
            best = NonFillingWitness(edge=name, horizon=horizon,
                                     survives=survives)
    return best


@dataclass(frozen=True)
class ProgressReport:
    levels: tuple
    horizons: tuple
    survives: tuple
    witnesses: tuple

    def horizon_at(self, level):
        return self.horizons[self.levels.index(level)]


def ff_progress_diagnostic(seq, levels=None):
    """Witness horizons w(n) along a folding sequence.

    Bounded horizons are consistent with definite progress in the factor
    graph; horizons growing without bound across the computed range flag a
    slow (non-linear) trajectory.
    """
    if seq.direction != "folding":
        raise DirectionError("progress diagnostic runs on folding sequences")
    if levels is None:
        levels = list(range(0, seq.n_steps))
    rows = [non_filling_witness(seq, n) for n in levels]
    return ProgressReport(levels=tuple(levels),
                          horizons=tuple(r.horizon for r in rows),
                          survives=tuple(r.survives for r in rows),
                          witnesses=tuple(r.edge for r in rows))


# -- linear speed --------------------------------------------------------


def _transport_cycle(seq, loop, level_from, gap):
    i = seq._internal(level_from)
    p = loop
    for t in range(i, i + gap):
        step = seq.morphisms[t]
        p = tighten(step.apply_to_path(p))
    p = cyclic_tighten(p)
    if not p:
        raise MalformedPathError("essential loop collapsed in transport")
    return p


@dataclass(frozen=True)
class SpeedReport:
    entry_max: int
    entries_grow: bool
    samples: tuple         # (level_from, level_to, distance)
    speed: float


def linearity_and_speed(seq, *, sample_gaps=(1, 2, 4, 8, 16),
                        pairs_per_gap=4):
    """Bounded step entries + sampled distances between levels.

    The distance between levels uses the unit-length volume-normalized
    graphs with the marking transported through the sequence; the speed is
    the max of distance/(gap+1) over the samples, so every sampled pair
    satisfies d <= speed * (gap + 1).
    """
    entries = []
    for m in seq.morphisms:
        M = m.incidence_matrix()
        entries.append(max(max(row) for row in M))
    half = len(entries) // 2
    entries_grow = (len(entries) >= 2 and half >= 1
                    and max(entries[half:]) > max(entries[:half]))
    levels = list(seq.levels)
    samples = []
    speed = 0.0
    for gap in sample_gaps:
        if gap > seq.n_steps:
            continue
        froms = [levels[k] for k in
                 sorted({round(j * (seq.n_steps - gap) / max(1, pairs_per_gap - 1))
                         for j in range(pairs_per_gap)})]
        for lf in froms:
            g_from = seq.graph_at(lf)
            g_to = seq.graph_at(lf + gap)
            d_best = None
            for cand in candidates(g_from):
                image = _transport_cycle(seq, cand.path, lf, gap)
                ratio = (Fraction(len(image), g_to.n_edges)
                         / Fraction(len(cand.path), g_from.n_edges))
                if d_best is None or ratio > d_best:
                    d_best = ratio
            d = frac_log(d_best) if d_best > 0 else 0.0
            samples.append((lf, lf + gap, d))
            speed = max(speed, d / (gap + 1))
    return SpeedReport(entry_max=max(entries), entries_grow=entries_grow,
                       samples=tuple(samples), speed=speed)


# -- free-factor supports ------------------------------------------------


def _fold_labeled(edges):
    """Stallings fold of a labeled directed multigraph given as
    [(u, v, letter)]; returns folded edge set."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    current = list(edges)
    changed = True
    while changed:
        changed = False
        ports = {}
        dedup = set()
        folded = []
        for (u, v, l) in current:
            u, v = find(u), find(v)
            if (u, v, l) in dedup:
                changed = True
                continue
            dedup.add((u, v, l))
            folded.append((u, v, l))
        current = folded
        for (u, v, l) in current:
            for (x, lab, y) in ((u, l, v), (v, -l, u)):
                prev = ports.get((find(x), lab))
                if prev is not None and find(prev) != find(y):
                    union(prev, y)
                    changed = True
                    break
                ports[(find(x), lab)] = y
            if changed:
                break
    return [(find(u), find(v), l) for (u, v, l) in current]


def _core(edges):
    """Trim valence-1 vertices repeatedly."""
    edges = list(edges)
    while True:
        degree = {}
        for (u, v, _) in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        drop = {x for x, d in degree.items() if d == 1}
        if not drop:
            return edges
        edges = [(u, v, l) for (u, v, l) in edges
                 if u not in drop and v not in drop]


def _canonical_immersion(edges):
    """Canonical string for a folded core: minimum over BFS numberings
    started at each vertex."""
    if not edges:
        return "trivial"
    adj = {}
    for (u, v, l) in edges:
        adj.setdefault(u, []).append((l, v))
        adj.setdefault(v, []).append((-l, u))
    best = None
    for start in adj:
        number = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            for (l, y) in sorted(adj[x]):
                if y not in number:
                    number[y] = len(number)
                    order.append(y)
        rows = sorted((number[u], l, number[v]) for (u, v, l) in edges)
        s = ";".join(f"{a},{l},{b}" for (a, l, b) in rows)
        if best is None or s < best:
            best = s
    return best


def _subgroup_core(words):
    """Folded core of the subgroup generated by the words, as a canonical
    string (conjugacy-class invariant)."""
    edges = []
    fresh = 1
    for word in words:
        prev = 0
        for k, letter in enumerate(word):
            nxt = 0 if k == len(word) - 1 else fresh
            if nxt:
                fresh += 1
            if letter > 0:
                edges.append((prev, nxt, letter))
            else:
                edges.append((nxt, prev, -letter))
            prev = nxt
    return _canonical_immersion(_core(_fold_labeled(edges)))


@dataclass(frozen=True)
class FactorReport:
    count: int
    factors: tuple            # canonical core strings, sorted
    by_subgraph: dict         # frozenset(edge names) -> core string


def factor_projection(marked, *, max_rank=6):
    """Distinct proper free factors carried by connected subgraphs.

    Each proper connected subgraph of positive rank determines a conjugacy
    class of free factors; the class is identified by the canonical folded
    core of a basis read through the marking.
    """
    g = marked.graph
    if g.betti() > max_rank:
        raise BudgetExceededError(
            f"subgraph enumeration capped at rank {max_rank}")
    names = list(g.edge_ids)
    by_subgraph = {}
    for mask in range(1, (1 << len(names)) - 1):
        subset = frozenset(names[j] for j in range(len(names))
                           if mask >> j & 1)
        if not g.subgraph_is_connected(subset):
            continue
        if g.subgraph_betti(subset) < 1:
            continue
        words = _subgraph_basis_words(marked, subset)
        by_subgraph[subset] = _subgroup_core(words)
    factors = tuple(sorted(set(by_subgraph.values())))
    return FactorReport(count=len(factors), factors=factors,
                        by_subgraph=by_subgraph)


def _subgraph_basis_words(marked, subset):
    """Basis loops of the subgraph, read as words via the ambient
    marking."""
    g = marked.graph
    verts = g.subgraph_vertices(subset)
    root = min(verts)
    tree_to = {root: ()}
    frontier = [root]
    inside = set(subset)
    while frontier:
        v = frontier.pop()
        for e in g.out_edges(v):
            if g.edge_name(abs(e)) not in inside:
                continue
            w = g.term(e)
            if w not in tree_to:
                tree_to[w] = tree_to[v] + (e,)
                frontier.append(w)
    tree_edges = {abs(e) for p in tree_to.values() for e in p}
    words = []
    for name in sorted(subset):
        j = g.edge_index(name)
        if j in tree_edges:
            continue
        loop = tree_to[g.init(j)] + (j,) + reverse_path(tree_to[g.term(j)])
        word = marked.marking.word_of_loop(tighten(loop))
        if word:
            words.append(word)
    return words
