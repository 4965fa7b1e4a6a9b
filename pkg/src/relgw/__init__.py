"""Genus-zero relative Gromov-Witten theory of ``(P^n, P^(n-1))`` with negative contact orders.

Submodules:

* ``cohomology``: truncated polynomial rings ``H*(P^n)`` and ``H*(P^(n-1))``
* ``insertions``: the ring of insertions with its pairing and product
* ``graphs``: admissible bipartite graphs, enumeration and automorphisms
* ``cycleclasses``: the Laurent classes attached to graphs and their ``t^0`` parts
* ``quantum``: the monoid model, the structure-constant solver and invariants
* ``givental``: symplectic operators, quantization and Virasoro checks
* ``cli``: the ``relgw`` command
"""

__version__ = "0.1.0"
