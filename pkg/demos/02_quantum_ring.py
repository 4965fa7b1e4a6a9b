# %% [markdown]
# # The small relative quantum ring
#
# Each basis insertion of ``(P^n, P^(n-1))`` corresponds to a lattice point in
# a monoid ``P`` inside ``Z^2``, with ``q = x y^n``.  Multiplying in the monoid
# algebra gives the small quantum product directly.  Independently, a linear
# solver recovers the same structure constants from associativity alone.

# %%
from relgw.insertions import InsertionRing
from relgw.quantum import (
    compare_with_oracle, ins_to_monoid, quantum_product_small, solve_structure_constants,
)

n = 2
ring = InsertionRing(n, 4)
p = ring.parse
for text in ("1@0", "H@0", "1@1", "h@-1"):
    print(f"{text:6s} -> monoid point {ins_to_monoid(p(text))}")

# %% [markdown]
# The seed relation: one unit of positive contact times the point class of
# ``P^n`` is a quantum correction.  Its consequence moves the divisor class
# to contact order -1.

# %%
print(quantum_product_small(p("1@1"), p(f"H^{n}@0")))
print(quantum_product_small(p("H@0"), p(f"H^{n}@0")))

# %% [markdown]
# Now forget the monoid and solve for the structure constants.  The solver
# knows only the bigrading, the unit, the seed and associativity.

# %%
table = solve_structure_constants(n, 4, 3)
report = compare_with_oracle(table)
print({k: report[k] for k in ("entries", "determined", "undetermined", "out_of_window")})
print("mismatches:", report["mismatches"])
