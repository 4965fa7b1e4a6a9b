"""The obstruction class attached to an admissible bipartite graph.

Each rubber vertex ``v`` contributes

    C_v(t) = sum_l c(l) t^(rho_inf(v) - 1 - l)
             / prod_{e node root} ((t + evD_e)/d_e - psi_e)

and the X side contributes ``t / (t + Psi)``.  Both are expanded at
``t = infinity`` and ``C_G`` is the ``t^0`` coefficient of their product.

Symbols: ``Psi`` (X side), ``PsiInf[v]`` (the rubber target at vertex ``v``),
``psi[v.k]`` and ``evD[v.k]`` for the inf-root with index ``k`` at vertex ``v``.
For ``n_amb = 1`` the divisor is a point and every ``evD`` is zero.
"""
from __future__ import annotations

from itertools import combinations

from .graphs import NODE, BipartiteGraph, Vertex, validate, InvalidGraph
from .laurent import Poly, SymLaurent, poly_prod, poly_sum


def sym_Psi() -> Poly:
    return Poly.var("Psi")


def sym_PsiInf(tag) -> Poly:
    return Poly.var(f"PsiInf[{tag}]")


def sym_psi(tag, k) -> Poly:
    return Poly.var(f"psi[{tag}.{k}]")


def sym_evD(tag, k, n_amb: int = 2) -> Poly:
    return Poly() if n_amb == 1 else Poly.var(f"evD[{tag}.{k}]")


def root_class(v: Vertex, k: int, tag=0, n_amb: int = 2) -> Poly:
    """``d_e psi_e - evD_e`` for the inf-root ``k``."""
    d = abs(v.roots[k].weight)
    return d * sym_psi(tag, k) - sym_evD(tag, k, n_amb)


def sigma_k(v: Vertex, k: int, tag=0, n_amb: int = 2) -> Poly:
    """Elementary symmetric sum of ``d_e psi_e - evD_e`` over inf-roots of ``v``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    roots = [root_class(v, e, tag, n_amb) for e in v.inf_roots]
    return poly_sum(poly_prod(sub) for sub in combinations(roots, k))


def c_l(v: Vertex, l: int, tag=0, n_amb: int = 2) -> Poly:
    if l < 0:
        raise ValueError("l must be nonnegative")
    psi_inf = sym_PsiInf(tag)
    return poly_sum((-1) ** j * psi_inf ** (l - j) * sigma_k(v, j, tag, n_amb) for j in range(l + 1))


def leading_power(v: Vertex) -> int:
    return v.rho_minus - 1


def C_type0(v: Vertex, depth: int, tag=0, n_amb: int = 2) -> SymLaurent:
    """Expansion of ``C_v(t)`` down to ``t^(leading - depth)``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rho_inf = len(v.inf_roots)
    num = SymLaurent({rho_inf - 1 - l: c_l(v, l, tag, n_amb) for l in range(depth + 1)},
                     rho_inf - 1 - depth)
    acc = num
    for k in v.node_roots:
        d = abs(v.roots[k].weight)
        # 1/((t + evD)/d - psi) = d t^-1 sum_j (-(evD - d psi))^j t^-j
        u = sym_evD(tag, k, n_amb) - d * sym_psi(tag, k)
        factor = SymLaurent({-1 - j: d * (-u) ** j for j in range(depth + 1)}, -1 - depth)
        acc = acc * factor
    return acc


def C_typeInf(depth: int) -> SymLaurent:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    psi = sym_Psi()
    return SymLaurent({-j: (-psi) ** j for j in range(depth + 1)}, -depth)


def C_G(G: BipartiteGraph, n_amb: int = 2, extra_depth: int = 0) -> Poly:
    """Constant term in ``t`` of the product of all vertex factors."""
    bad = validate(G, n_amb)
    if bad:
        raise InvalidGraph("; ".join(bad))
    zeros = G.zero_vertices
    total = sum(leading_power(G.vertices[v]) for v in zeros)
    if total < 0:
        return Poly()
    depth = total + extra_depth
    acc = C_typeInf(depth) if G.inf_vertices else SymLaurent.one()
    for v in zeros:
        acc = acc * C_type0(G.vertices[v], depth, v, n_amb)
    return acc.coefficient(0)


def node_weight_product(G: BipartiteGraph) -> int:
    """``prod d_e`` over node roots on the zero side."""
    out = 1
    for v in G.zero_vertices:
        for r in G.vertices[v].roots:
            if r.kind == NODE:
                out *= abs(r.weight)
    return out
