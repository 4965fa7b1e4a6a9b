# %% [markdown]
# # Operators on Givental's space and the cutoff anomaly
#
# The operators ``l_m`` act on Laurent series in ``z`` with coefficients in the
# ring of insertions.  They are stored exactly, with coefficients polynomial in
# the exponent of ``z``, so commutators can be compared symbolically.

# %%
from relgw.givental import (
    anomaly, assemble_potential, bracket, build_L, genus0_residual, l_op, symplectic_residual,
)
from relgw.insertions import InsertionRing
from relgw.quantum import SmallProvider

ring = InsertionRing(2, 2)
print(bracket(l_op(-1, ring), l_op(1, ring)) == l_op(0, ring).scale(2))
print("symplectic residual of l_1:", symplectic_residual(l_op(1, ring), ring, -4, 4))

# %% [markdown]
# Quantizing the first two operators gives ``L_{-1}`` and ``L_0``.  Their
# genus-zero constraint is checked against a truncated potential built from
# invariants the small provider can reach.

# %%
F = assemble_potential(SmallProvider(2), W=2, levels=1, max_vars=4, max_beta=2)
for m in (-1, 0):
    rep = genus0_residual(build_L(m, ring, 1), F)
    print(f"L_{m}: vanishes={rep.vanishes} on {rep.determined} determined coefficients")

# %% [markdown]
# Commuting quantized operators produces a central term.  With every contact
# order above ``N`` cut off, that term grows linearly in ``N`` and has no limit.

# %%
values = [anomaly(N, 2) for N in range(2, 9)]
print([str(v) for v in values])
print("differences:", sorted({str(b - a) for a, b in zip(values, values[1:])}))
