"""Exact computations around solvable Baumslag-Solitar model spaces.

Modules:

* ``exactnum``  -- rationals, Z[1/n], truncated n-adics, valuations
* ``bsgroup``   -- BS(1,N) words, normal forms, substitution endomorphisms
* ``tree``      -- the regular rooted-at-infinity tree in ball coordinates
* ``isometry``  -- the arithmetic subgroup of the model-space isometries
* ``lattice``   -- lattice embeddings, their conjugacy invariant, covolume
* ``lab``       -- brute-force finite-depth experiments and reports
* ``cli``       -- command-line front end
"""

__version__ = "0.1.0"
