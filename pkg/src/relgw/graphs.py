"""Admissible bipartite graphs of genus zero for ``(P^n, P^{n-1})``.

A graph has vertices on the *zero* side (rubber targets over ``D``) and on
the *inf* side (components mapping to ``X``).  Curve classes are degrees.
Every root is a half-edge with a nonzero weight; node roots are glued in
pairs by the edge list, marking roots carry the relative marking labels
``1..rho`` and legs carry the interior labels ``1..n``.

Sign conventions on the zero side: marking roots with positive weight are
0-roots, marking roots with negative weight are inf-roots of marking type
(the negative contact points), node roots are negative.  Every root on the
inf side is positive.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Sequence

ZERO, INF = "zero", "inf"
NODE, MARK = "node", "mark"


class InvalidGraph(ValueError):
    pass


@dataclass(frozen=True)
class Root:
    weight: int
    kind: str
    label: int | None = None


@dataclass(frozen=True)
class Vertex:
    side: str
    degree: int
    legs: tuple = ()
    roots: tuple = ()

    @property
    def marks(self) -> list[Root]:
        return [r for r in self.roots if r.kind == MARK]

    @property
    def node_roots(self) -> list[int]:
        return [k for k, r in enumerate(self.roots) if r.kind == NODE]

    @property
    def half_edges(self) -> int:
        return len(self.legs) + len(self.roots)

    @property
    def inf_roots(self) -> list[int]:
        """Indices of inf-roots (node or marking type) of a zero-side vertex."""
        return [k for k, r in enumerate(self.roots) if r.weight < 0]

    @property
    def rho_minus(self) -> int:
        return sum(1 for r in self.roots if r.kind == MARK and r.weight < 0)

    def descriptor(self) -> tuple:
        marks = tuple(sorted((r.label, r.weight) for r in self.marks))
        return (self.side, self.degree, tuple(sorted(self.legs)), marks)


Slot = tuple  # (vertex index, root index)


@dataclass(frozen=True)
class BipartiteGraph:
    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(tuple(s) for s in e) for e in self.edges))

    @property
    def zero_vertices(self) -> list[int]:
        return [v for v, x in enumerate(self.vertices) if x.side == ZERO]

    @property
    def inf_vertices(self) -> list[int]:
        return [v for v, x in enumerate(self.vertices) if x.side == INF]

    def weight(self, slot: Slot) -> int:
        return self.vertices[slot[0]].roots[slot[1]].weight

    def edge_list(self) -> list[tuple]:
        """Edges as ``(zero vertex, inf vertex, zero weight, inf weight)``."""
        out = []
        for a, b in self.edges:
            if self.vertices[a[0]].side == INF:
                a, b = b, a
            out.append((a[0], b[0], self.weight(a), self.weight(b)))
        return out

    def edge_multiplicity(self, slot: Slot) -> int:
        return abs(self.weight(slot))

    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices:
            roots = []
            for r in v.roots:
                d = {"weight": r.weight, "kind": r.kind}
                if r.label is not None:
                    d["label"] = r.label
                roots.append(d)
            verts.append({"side": v.side, "degree": v.degree, "legs": list(v.legs), "roots": roots})
        return {"vertices": verts, "edges": [[list(a), list(b)] for a, b in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "BipartiteGraph":
        verts = []
        for v in data["vertices"]:
            roots = tuple(Root(r["weight"], r["kind"], r.get("label")) for r in v.get("roots", []))
            verts.append(Vertex(v["side"], v["degree"], tuple(v.get("legs", [])), roots))
        return cls(tuple(verts), tuple((tuple(a), tuple(b)) for a, b in data.get("edges", [])))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class TopType:
    """Genus-zero topological type ``(n legs, degree d, mu)``."""

    n_legs: int
    degree: int
    mu: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(self.mu))

    @property
    def rho(self) -> int:
        return len(self.mu)

    @property
    def rho_plus(self) -> int:
        return sum(1 for m in self.mu if m > 0)

    @property
    def rho_minus(self) -> int:
        return sum(1 for m in self.mu if m < 0)

    def check(self):
        if any(m == 0 for m in self.mu):
            raise ValueError("contact orders must be nonzero")
        if sum(self.mu) != self.degree:
            raise ValueError(f"contact orders sum to {sum(self.mu)}, degree is {self.degree}")
        if self.degree < 0 or self.n_legs < 0:
            raise ValueError("degree and leg count must be nonnegative")


def virtual_dim(top: TopType, n_amb: int) -> int:
    """``dim X - 3 + int_beta c1(T_X(-log D)) + n + rho_+`` with ``c1 = n_amb * H``."""
    return n_amb - 3 + top.degree * n_amb + top.n_legs + top.rho_plus


# -- validation -------------------------------------------------------------

def _components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)})


def validate(G: BipartiteGraph, n_amb: int = 2) -> list[str]:
    """All violated admissibility conditions; an empty list means valid."""
    bad: list[str] = []
    V = G.vertices
    if not V:
        return ["empty graph"]
    seen: Counter = Counter()
    for a, b in G.edges:
        for v, k in (a, b):
            if not (0 <= v < len(V) and 0 <= k < len(V[v].roots)):
                bad.append(f"(a) edge references missing root {(v, k)}")
                return bad
            seen[(v, k)] += 1
        if V[a[0]].roots[a[1]].kind != NODE or V[b[0]].roots[b[1]].kind != NODE:
            bad.append(f"(a) edge {(a, b)} glues a non-node root")
        if {V[a[0]].side, V[b[0]].side} != {ZERO, INF}:
            bad.append(f"(a) edge {(a, b)} does not join the two sides")
        if G.weight(a) + G.weight(b) != 0:
            bad.append(f"(d) edge weights {G.weight(a)} and {G.weight(b)} do not cancel")
    for v, x in enumerate(V):
        for k in x.node_roots:
            if seen[(v, k)] != 1:
                bad.append(f"(a) node root {(v, k)} appears in {seen[(v, k)]} edges")
        for r in x.roots:
            if r.weight == 0:
                bad.append(f"vertex {v} has a root of weight 0")
            if x.side == INF and r.weight < 0:
                bad.append(f"vertex {v} on the inf side has a negative root")
            if x.side == ZERO and r.kind == NODE and r.weight > 0:
                bad.append(f"vertex {v} on the zero side has a positive node root")
            if r.kind == MARK and r.label is None:
                bad.append(f"vertex {v} has an unlabeled marking root")
        if x.degree < 0:
            bad.append(f"vertex {v} has negative degree")
        # (c): roots balance against the degree; D . beta_0 = beta_0 on P^{n-1}, 0 on a point
        target = x.degree if (x.side == INF or n_amb >= 2) else 0
        if x.side == ZERO and n_amb == 1 and x.degree != 0:
            bad.append(f"(b) vertex {v}: D is a point, zero-side degree must be 0")
        if sum(r.weight for r in x.roots) != target:
            bad.append(f"(c) vertex {v}: root weights sum to {sum(r.weight for r in x.roots)}, expected {target}")
        if x.degree == 0 and x.half_edges < 3:
            bad.append(f"(e) vertex {v} is unstable")
    legs = [l for x in V for l in x.legs]
    marks = [r.label for x in V for r in x.marks]
    if len(set(legs)) != len(legs) or set(legs) != set(range(1, len(legs) + 1)):
        bad.append(f"leg labels {sorted(legs)} are not 1..{len(legs)}")
    if len(set(marks)) != len(marks) or set(marks) != set(range(1, len(marks) + 1)):
        bad.append(f"marking labels {sorted(m for m in marks if m is not None)} are not 1..{len(marks)}")
    pairs = [(a[0], b[0]) for a, b in G.edges]
    if _components(len(V), pairs) != 1:
        bad.append("graph is disconnected")
    elif len(G.edges) != len(V) - 1:
        bad.append("graph has a cycle (h^1 > 0)")
    if not G.inf_vertices:
        # a lone rubber vertex needs a nontrivial fibre class, i.e. a negative contact
        if not any(V[v].rho_minus for v in G.zero_vertices):
            bad.append("rubber-only graph without an inf-root of marking type")
    return bad


def topological_type(G: BipartiteGraph, n_amb: int = 2) -> TopType:
    bad = validate(G, n_amb)
    if bad:
        raise InvalidGraph("; ".join(bad))
    marks = sorted((r.label, r.weight) for x in G.vertices for r in x.marks)
    n_legs = sum(len(x.legs) for x in G.vertices)
    return TopType(n_legs, sum(x.degree for x in G.vertices), tuple(w for _, w in marks))


# -- canonical forms and automorphisms --------------------------------------

def _vertex_key(G: BipartiteGraph, v: int, incident: dict) -> tuple:
    return G.vertices[v].descriptor() + (tuple(sorted(incident.get(v, ()))),)


def _incident(edges: list[tuple]) -> dict:
    inc: dict = {}
    for z, i, wz, wi in edges:
        inc.setdefault(z, []).append((wz, wi))
        inc.setdefault(i, []).append((wz, wi))
    return inc


def _orderings(G: BipartiteGraph, keys: list[tuple]):
    """All vertex orders that list vertices by sorted key, permuting ties."""
    groups: dict = {}
    for v, k in enumerate(keys):
        groups.setdefault(k, []).append(v)
    ordered = [groups[k] for k in sorted(groups)]
    for choice in product(*(permutations(g) for g in ordered)):
        yield [v for block in choice for v in block]


def canonical_form(G: BipartiteGraph) -> tuple:
    """A complete isomorphism invariant (labels on legs and marks are fixed)."""
    edges = G.edge_list()
    inc = _incident(edges)
    keys = [_vertex_key(G, v, inc) for v in range(len(G.vertices))]
    best = None
    for order in _orderings(G, keys):
        pos = {v: p for p, v in enumerate(order)}
        enc = tuple(sorted((pos[z], pos[i], wz, wi) for z, i, wz, wi in edges))
        if best is None or enc < best:
            best = enc
    return (tuple(sorted(keys)), best)


def automorphism_order(G: BipartiteGraph) -> int:
    """``|Aut|``: vertex permutations fixing all decorations, times edge swaps."""
    edges = G.edge_list()
    inc = _incident(edges)
    keys = [_vertex_key(G, v, inc) for v in range(len(G.vertices))]
    target = Counter(edges)
    total = 0
    base = sorted(range(len(keys)), key=lambda v: keys[v])
    for order in _orderings(G, keys):
        perm = dict(zip(base, order))
        if Counter((perm[z], perm[i], wz, wi) for z, i, wz, wi in edges) == target:
            total += 1
    for mult in target.values():
        total *= factorial(mult)
    return total


# -- enumeration --------------------------------------------------------------

def _bipartite_trees(z: int, k: int) -> list[list[tuple[int, int]]]:
    """Labeled spanning trees of ``K_{z,k}`` as lists of (zero idx, inf idx)."""
    if z == 0 or k == 0:
        return [[]] if z + k == 1 else []
    pairs = [(a, b) for a in range(z) for b in range(k)]
    out = []
    for subset in combinations(pairs, z + k - 1):
        if _components(z + k, [(a, z + b) for a, b in subset]) == 1:
            out.append(list(subset))
    return out


def _tree_shapes(z: int, k: int) -> list[list[tuple[int, int]]]:
    """Spanning trees of ``K_{z,k}`` up to permuting each side."""
    shapes, seen = [], set()
    for tree in _bipartite_trees(z, k):
        key = min(
            tuple(sorted((pz[a], pk[b]) for a, b in tree))
            for pz in permutations(range(z)) for pk in permutations(range(k))
        )
        if key not in seen:
            seen.add(key)
            shapes.append(tree)
    return shapes


def _zero_vertex_bound(top: TopType) -> int:
    # A zero-side vertex has degree (sum of its marks) - (its edge weights) >= 0
    # and at least one edge, so it carries a positive contact mark.
    return top.rho_plus


def enumerate_graphs(top: TopType, n_amb: int = 2) -> list[BipartiteGraph]:
    """Iso-class representatives of connected admissible graphs of type ``top``.

    Sorted by canonical form, so output order is deterministic.
    """
    top.check()
    found: dict = {}
    labels = [("leg", l) for l in range(1, top.n_legs + 1)]
    labels += [("mark", j) for j in range(1, top.rho + 1)]
    d = top.degree
    shapes = [(0, 1)] + [(1, 0)]
    max_k = max(d, 0)
    for k in range(1, max_k + 1):
        for z in range(1, _zero_vertex_bound(top) + 1):
            shapes.append((z, k))
    for z, k in shapes:
        for tree in _tree_shapes(z, k):
            n_edges = len(tree)
            for weights in _weight_choices(n_edges, d):
                for G in _label_assignments(top, z, k, tree, weights, labels, n_amb):
                    key = canonical_form(G)
                    if key not in found:
                        found[key] = G
    return [found[k] for k in sorted(found)]


def _weight_choices(n_edges: int, d: int):
    # every inf vertex carries its edge weights inside its degree, so sum <= d
    if n_edges == 0:
        yield ()
        return
    for ws in product(range(1, d + 1), repeat=n_edges):
        if sum(ws) <= d:
            yield ws


def _label_assignments(top, z, k, tree, weights, labels, n_amb):
    mu = top.mu
    # negative marks are forced onto the zero side
    choices = []
    for kind, lab in labels:
        if kind == "mark" and mu[lab - 1] < 0:
            choices.append(range(z))
        else:
            choices.append(range(z + k))
    edge_in = [0] * (z + k)
    edge_out = [0] * (z + k)
    n_incident = [0] * (z + k)
    for (a, b), w in zip(tree, weights):
        edge_out[a] += w
        edge_in[z + b] += w
        n_incident[a] += 1
        n_incident[z + b] += 1
    for assign in product(*choices):
        mark_sum = [0] * (z + k)
        half = [0] * (z + k)
        for (kind, lab), v in zip(labels, assign):
            half[v] += 1
            if kind == "mark":
                mark_sum[v] += mu[lab - 1]
        degrees = []
        ok = True
        for v in range(z + k):
            n_inc = n_incident[v]
            if v < z:
                deg = mark_sum[v] - edge_out[v]
                if deg < 0 or (n_amb == 1 and deg != 0):
                    ok = False
                    break
            else:
                deg = mark_sum[v] + edge_in[v]
            if deg == 0 and half[v] + n_inc < 3:
                ok = False
                break
            degrees.append(deg)
        if not ok or sum(degrees) != top.degree:
            continue
        G = _build(z, k, tree, weights, labels, assign, degrees, mu)
        if not validate(G, n_amb):
            yield G


def _build(z, k, tree, weights, labels, assign, degrees, mu) -> BipartiteGraph:
    legs = [[] for _ in range(z + k)]
    roots = [[] for _ in range(z + k)]
    for (kind, lab), v in zip(labels, assign):
        if kind == "leg":
            legs[v].append(lab)
        else:
            roots[v].append(Root(mu[lab - 1], MARK, lab))
    edges = []
    for (a, b), w in zip(tree, weights):
        roots[a].append(Root(-w, NODE))
        roots[z + b].append(Root(w, NODE))
        edges.append(((a, len(roots[a]) - 1), (z + b, len(roots[z + b]) - 1)))
    verts = [Vertex(ZERO if v < z else INF, degrees[v], tuple(legs[v]), tuple(roots[v]))
             for v in range(z + k)]
    return BipartiteGraph(tuple(verts), tuple(edges))


def graph_from_parts(zero: Sequence[dict], inf: Sequence[dict], edges: Sequence[tuple]) -> BipartiteGraph:
    """Convenience builder.

    ``zero``/``inf`` entries are dicts with ``degree``, ``legs`` and ``marks``
    (a list of ``(label, weight)``); ``edges`` lists ``(zero idx, inf idx, w)``
    with ``w > 0`` the edge multiplicity.
    """
    verts = []
    roots: list[list[Root]] = []
    for side, group in ((ZERO, zero), (INF, inf)):
        for spec in group:
            roots.append([Root(w, MARK, lab) for lab, w in spec.get("marks", ())])
            verts.append((side, spec.get("degree", 0), tuple(spec.get("legs", ()))))
    out_edges = []
    z = len(zero)
    for a, b, w in edges:
        roots[a].append(Root(-w, NODE))
        roots[z + b].append(Root(w, NODE))
        out_edges.append(((a, len(roots[a]) - 1), (z + b, len(roots[z + b]) - 1)))
    return BipartiteGraph(
        tuple(Vertex(s, d, l, tuple(r)) for (s, d, l), r in zip(verts, roots)), tuple(out_edges))
