"""Graph morphisms, incidence matrices, and fold decompositions.

A morphism sends vertices to vertices and each positively oriented edge to a
reduced (possibly empty) edge path; orientation reversal is respected.  The
central validation here is the change-of-marking test: factor through a
subdivision into a simplicial map (Stallings), fold until no two edges at a
common vertex have the same image, and check that what remains is an
isomorphism onto the codomain.
"""

from dataclasses import dataclass

from .errors import (BudgetExceededError, MalformedMorphismError,
                     NotChangeOfMarkingError)
from .graphs import OrientedGraph
from .paths import is_reduced, reverse_path, tighten


class GraphMorphism:
    """Map of oriented graphs given on vertices and positive edges.

    Parameters
    ----------
    domain, codomain : OrientedGraph
    vertex_map : dict vertex -> vertex
    edge_map : dict edge_id -> path
        Image of the positive orientation of each domain edge, as a tuple of
        signed codomain edge indices (or a token string parsed by the
        codomain).  Empty paths (collapsed edges) are allowed when the two
        endpoint images agree.
    """

    def __init__(self, domain, codomain, vertex_map, edge_map):
        self.domain = domain
        self.codomain = codomain
        self.vertex_map = {str(v): str(w) for v, w in vertex_map.items()}
        if set(self.vertex_map) != set(domain.vertices):
            raise MalformedMorphismError("vertex map must cover the domain")
        for v, w in self.vertex_map.items():
            if w not in codomain.vertices:
                raise MalformedMorphismError(
                    f"vertex {v} maps outside the codomain")
        images = []
        emap = {str(e): p for e, p in edge_map.items()}
        if set(emap) != set(domain.edge_ids):
            raise MalformedMorphismError("edge map must cover the domain")
        for j, eid in enumerate(domain.edge_ids):
            p = emap[eid]
            if isinstance(p, str):
                p = codomain.parse_path(p)
            p = tuple(int(x) for x in p)
            codomain.check_path(p)
            if not is_reduced(p):
                raise MalformedMorphismError(
                    f"image of edge {eid} is not a reduced path")
            u = self.vertex_map[domain._einit[j]]
            w = self.vertex_map[domain._eterm[j]]
            if p:
                if codomain.path_init(p) != u or codomain.path_term(p) != w:
                    raise MalformedMorphismError(
                        f"image of edge {eid} does not connect the "
                        "vertex images")
            elif u != w:
                raise MalformedMorphismError(
                    f"edge {eid} collapses but its endpoints map apart")
            images.append(p)
        self._images = tuple(images)

    # -- evaluation ------------------------------------------------------

    def edge_image(self, oriented):
        p = self._images[abs(oriented) - 1]
        return p if oriented > 0 else reverse_path(p)

    def vertex_image(self, vertex):
        return self.vertex_map[vertex]

    def apply_to_path(self, path):
        """Concatenated edge images, with no free reduction."""
        out = []
        for e in path:
            out.extend(self.edge_image(e))
        return tuple(out)

    def map_path(self, path):
        return tighten(self.apply_to_path(path))

    def is_simplicial(self):
        return all(len(p) == 1 for p in self._images)

    def has_collapsed_edges(self):
        return any(not p for p in self._images)

    def first_edge_map(self):
        """Oriented edge -> first oriented edge of its image.

        Only defined when no edge collapses.
        """
        if self.has_collapsed_edges():
            raise MalformedMorphismError(
                "first-edge map undefined with collapsed edges")
        out = {}
        for j in range(self.domain.n_edges):
            p = self._images[j]
            out[j + 1] = p[0]
            out[-(j + 1)] = -p[-1]
        return out

    # -- linear shadow ---------------------------------------------------

    def incidence_matrix(self):
        """Counts of codomain edges in domain-edge images.

        Row i, column j: number of traversals of codomain edge i+1, in either
        direction, by the image of domain edge j+1.  Unoriented edges index
        both axes, so the count is insensitive to reversing either edge.
        """
        rows = self.codomain.n_edges
        cols = self.domain.n_edges
        mat = [[0] * cols for _ in range(rows)]
        for j in range(cols):
            for e in self._images[j]:
                mat[abs(e) - 1][j] += 1
        return mat

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.domain == other.domain
                and self.codomain == other.codomain
                and self.vertex_map == other.vertex_map
                and self._images == other._images)

    __hash__ = None

    def __repr__(self):
        return (f"GraphMorphism({self.domain.n_edges} -> "
                f"{self.codomain.n_edges} edges)")


def identity_morphism(graph):
    return GraphMorphism(graph, graph,
                         {v: v for v in graph.vertices},
                         {e: (i + 1,) for i, e in enumerate(graph.edge_ids)})


def compose(outer, inner):
    """Composite morphism ``outer . inner`` with freely reduced edge images."""
    if inner.codomain != outer.domain:
        raise MalformedMorphismError(
            "codomain of the inner morphism must equal the domain of the "
            "outer one")
    vmap = {v: outer.vertex_map[w] for v, w in inner.vertex_map.items()}
    emap = {}
    for i, eid in enumerate(inner.domain.edge_ids):
        emap[eid] = tighten(outer.apply_to_path(inner._images[i]))
    return GraphMorphism(inner.domain, outer.codomain, vmap, emap)


# -- Stallings factorization and folding --------------------------------


def stallings_factorize(f):
    """Factor ``f`` as a subdivision followed by a simplicial morphism.

    Each domain edge whose image has length L >= 2 is cut into L segments
    mapping to single edges.  Returns ``(subdivision, simplicial)`` with
    ``compose(simplicial, subdivision)`` equal to ``f``.
    """
    if f.has_collapsed_edges():
        raise MalformedMorphismError(
            "cannot factor a morphism with collapsed edges")
    G, H = f.domain, f.codomain
    new_vertices = list(G.vertices)
    new_edges = []
    sub_emap = {}
    simp_vmap = {v: f.vertex_map[v] for v in G.vertices}
    simp_emap = {}
    for j, eid in enumerate(G.edge_ids):
        p = f._images[j]
        if len(p) == 1:
            new_edges.append((eid, G._einit[j], G._eterm[j]))
            sub_emap[eid] = None  # fill once indices are known
            simp_emap[eid] = p
            continue
        chain = [G._einit[j]]
        for k in range(1, len(p)):
            w = f"{eid}.v{k}"
            new_vertices.append(w)
            chain.append(w)
            simp_vmap[w] = H.init(p[k])
        chain.append(G._eterm[j])
        for k, seg in enumerate(p):
            seg_id = f"{eid}.{k + 1}"
            new_edges.append((seg_id, chain[k], chain[k + 1]))
            simp_emap[seg_id] = (seg,)
        sub_emap[eid] = tuple(f"{eid}.{k + 1}" for k in range(len(p)))
    Gp = OrientedGraph(new_vertices, new_edges, _relaxed=True)
    final_sub_emap = {}
    for j, eid in enumerate(G.edge_ids):
        if sub_emap[eid] is None:
            final_sub_emap[eid] = (Gp.edge_index(eid),)
        else:
            final_sub_emap[eid] = tuple(Gp.edge_index(s)
                                        for s in sub_emap[eid])
    subdivision = GraphMorphism(G, Gp, {v: v for v in G.vertices},
                                final_sub_emap)
    simplicial = GraphMorphism(Gp, H, simp_vmap, simp_emap)
    return subdivision, simplicial


def _orientation_key(e):
    return (abs(e), 0 if e > 0 else 1)


def _least_foldable_pair(f):
    """Smallest pair of distinct oriented edges with common initial vertex
    and equal image, or None."""
    G = f.domain
    best = None
    for v in G.vertices:
        out = sorted(G.out_edges(v), key=_orientation_key)
        by_image = {}
        for e in out:
            img = f.edge_image(e)[0]
            if img in by_image:
                cand = (by_image[img], e)
                key = (_orientation_key(cand[0]), _orientation_key(cand[1]))
                if best is None or key < best[0]:
                    best = (key, cand)
            else:
                by_image[img] = e
    return None if best is None else best[1]


def _fold_once(f, pair):
    """Quotient a simplicial morphism by identifying the pair of edges.

    Returns ``(quotient_morphism, induced_morphism)`` where the quotient goes
    from the current domain to the folded graph and the induced morphism
    continues to the codomain.
    """
    a, b = pair
    G, H = f.domain, f.codomain
    a_name, b_name = G.edge_name(a), G.edge_name(b)
    w1, w2 = G.term(a), G.term(b)
    if w1 == w2:
        survivor = w1
        dropped = None
    else:
        survivor, dropped = (w1, w2) if w1 <= w2 else (w2, w1)

    def send(v):
        return survivor if v == dropped else v

    verts = [v for v in G.vertices if v != dropped]
    edges = []
    for j, eid in enumerate(G.edge_ids):
        if eid == b_name:
            continue
        edges.append((eid, send(G._einit[j]), send(G._eterm[j])))
    Gq = OrientedGraph(verts, edges, _relaxed=True)

    a_new = Gq.edge_index(a_name) if a > 0 else -Gq.edge_index(a_name)
    q_emap = {}
    for eid in G.edge_ids:
        if eid == b_name:
            q_emap[eid] = (a_new,) if b > 0 else (-a_new,)
        else:
            q_emap[eid] = (Gq.edge_index(eid),)
    quotient = GraphMorphism(G, Gq, {v: send(v) for v in G.vertices}, q_emap)

    ind_vmap = {v: f.vertex_map[v] for v in Gq.vertices}
    ind_emap = {eid: f.edge_image(G.edge_index(eid))
                for eid in Gq.edge_ids}
    induced = GraphMorphism(Gq, H, ind_vmap, ind_emap)
    return quotient, induced


@dataclass(frozen=True)
class FoldStep:
    """One elementary fold: the identified pair (domain tokens) and the
    quotient morphism onto the folded graph."""
    pair: tuple
    quotient: GraphMorphism


@dataclass(frozen=True)
class FoldDecomposition:
    """Maximal fold sequence of a simplicial morphism.

    ``steps`` lists the elementary folds in the order performed;
    ``terminal`` is the remaining morphism, which is an immersion (no two
    edges at a vertex share an image).
    """
    steps: tuple
    terminal: GraphMorphism

    def is_isomorphism(self):
        t = self.terminal
        if t.domain.n_edges != t.codomain.n_edges:
            return False
        if t.domain.n_vertices != t.codomain.n_vertices:
            return False
        vimg = set(t.vertex_map.values())
        eimg = {abs(t._images[j][0]) for j in range(t.domain.n_edges)}
        return (len(vimg) == t.domain.n_vertices
                and len(eimg) == t.domain.n_edges)


def fold_decompose(f, *, max_folds=100000):
    """Fold a simplicial morphism until no further fold is possible.

    Each step picks the least eligible pair of oriented edges (ordered by
    edge index, positive orientation first), merges them, and identifies
    their terminal vertices.
    """
    if not f.is_simplicial():
        raise MalformedMorphismError("fold decomposition needs a simplicial "
                                     "morphism; factor first")
    steps = []
    current = f
    for _ in range(max_folds):
        pair = _least_foldable_pair(current)
        if pair is None:
            return FoldDecomposition(tuple(steps), current)
        tokens = (current.domain.token(pair[0]), current.domain.token(pair[1]))
        quotient, current = _fold_once(current, pair)
        steps.append(FoldStep(tokens, quotient))
    raise BudgetExceededError("fold decomposition did not terminate within "
                              f"{max_folds} folds")


def validate_change_of_marking(f, *, raise_on_failure=False):
    """Decide whether a morphism is invertible up to homotopy.

    True when domain and codomain have equal first Betti number and the fold
    decomposition of the subdivided morphism terminates in an isomorphism.
    """
    ok = f.domain.betti() == f.codomain.betti()
    reason = None
    if not ok:
        reason = ("first Betti numbers differ: "
                  f"{f.domain.betti()} vs {f.codomain.betti()}")
    elif f.has_collapsed_edges():
        ok, reason = False, "a change of marking cannot collapse edges"
    else:
        _, simplicial = stallings_factorize(f)
        decomp = fold_decompose(simplicial)
        if not decomp.is_isomorphism():
            ok = False
            reason = ("folding terminates in a proper immersion onto "
                      f"{decomp.terminal.codomain.n_edges}-edge codomain "
                      f"(final graph has {decomp.terminal.domain.n_edges} "
                      "edges)")
    if not ok and raise_on_failure:
        raise NotChangeOfMarkingError(reason)
    return ok
