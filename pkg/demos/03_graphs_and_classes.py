# %% [markdown]
# # Bipartite graphs and their obstruction classes
#
# A relative cycle with negative contact orders is a sum over bipartite
# graphs: rubber vertices over the divisor on one side, vertices mapping to
# ``P^n`` on the other.  Each graph carries a class ``C_G``, the constant term
# of a product of Laurent series in ``t``.

# %%
from relgw.cycleclasses import C_G
from relgw.graphs import TopType, automorphism_order, enumerate_graphs, virtual_dim

top = TopType(n_legs=1, degree=2, mu=(2, 1, -1))
print("virtual dimension in the plane:", virtual_dim(top, 2))
graphs = enumerate_graphs(top, 2)
for G in graphs:
    print(f"{len(G.zero_vertices)} rubber, {len(G.inf_vertices)} X-side, |Aut| = "
          f"{automorphism_order(G)}, C_G = {C_G(G)}")

# %% [markdown]
# With one negative marking the class is just the product of the edge
# weights at the rubber vertex.  With two negative markings a rubber vertex
# that holds both picks up a degree-one class in psi, ev and Psi symbols.

# %%
for G in enumerate_graphs(TopType(1, 2, (2, 2, -1, -1)), 2):
    if len(G.zero_vertices) == 1 and len(G.inf_vertices) == 1:
        print(C_G(G))
        break
