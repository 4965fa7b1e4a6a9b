# %% [markdown]
# # The ring of insertions
#
# An insertion is a class on ``P^n`` at contact order 0 or a class on the
# hyperplane ``P^(n-1)`` at a nonzero contact order.  This walk-through
# builds the ring for the plane (n = 2) and pokes at its product.

# %%
from itertools import product

from relgw.insertions import InsertionRing, WindowError, basis_label

ring = InsertionRing(2, 3)  # contact orders |i| <= 3
print([basis_label(x) for x in ring.basis()])

# %% [markdown]
# Expressions are written ``coef*base@i``.  Multiplying a positive and a
# negative contact order of the same size lands back on the ambient space
# through the Gysin map.

# %%
p = ring.parse
print(p("1@1") * p("1@-1"))          # [H]@0
print(p("h@2") * p("1@-1"))          # contact orders add: [h]@1
print(p("H@0") * p("1@-2"))          # restriction of H to the divisor
print(ring.pairing(p("1@1"), p("h@-1")))

# %% [markdown]
# The product respects a bigrading ``(contact order, degree)``; classes at
# negative contact orders carry one extra unit of degree.

# %%
for text in ("1@-1", "h@-1", "H^2@0", "h@2"):
    print(text, ring.bidegree(p(text)))

# %% [markdown]
# Associativity only makes sense while every partial product stays inside
# the window, so the check below skips triples that would leave it.

# %%
basis = ring.basis()
checked = 0
for x, y, z in product(basis, repeat=3):
    u, v, w = (ring.element(*b) for b in (x, y, z))
    try:
        assert (u * v) * w == u * (v * w)
        checked += 1
    except WindowError:
        pass
print(f"associative on {checked} in-window triples")
