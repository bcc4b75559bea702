"""
The generalized Heisenberg group
=================================

Composition, brackets and the affine action on a two-dimensional example
whose form has a nonzero imaginary part.
"""
import numpy as np

from siegel_lab import Cone, GroupElement, HermitianMap, SiegelDomain, act, bracket, compose, height, invert

Q = HermitianMap([np.eye(2), [[0, 1j], [-1j, 0]]])
D = SiegelDomain(Cone.simplicial([[1, 1], [1, -1]]), Q)
rng = np.random.default_rng(0)

g = GroupElement([0.0, 0.0], [1.0, 0.0])
h = GroupElement([0.0, 0.0], [0.0, 1.0])

# the commutator sits in the center, with x-part equal to the bracket 4 Im Q
gh, hg = compose(Q, g, h), compose(Q, h, g)
print("g h           :", gh)
print("h g           :", hg)
print("difference    :", gh.x - hg.x)
print("bracket       :", bracket(Q, (g.x, g.u), (h.x, h.u))[0])

# inverses and associativity
k = D.random_element(rng)
print("g g^-1        :", compose(Q, k, invert(k)))
lhs = compose(Q, compose(Q, g, h), k)
rhs = compose(Q, g, compose(Q, h, k))
print("assoc defect  :", np.max(np.abs(np.r_[lhs.x - rhs.x, lhs.u - rhs.u])))

# the action preserves the height Im z - Q(u, u) and hence the domain
p = D.random_point(rng)
q = act(Q, k, p)
print("height before :", height(Q, p))
print("height after  :", height(Q, q))
print("still inside  :", D.contains(q))
