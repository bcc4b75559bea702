"""
Holomorphic multipliers
=======================

A multiplier twisted by a coboundary still defines the same line bundle,
and the classifier recovers the parameter ``c``.
"""
import numpy as np

from siegel_lab import (CoboundaryTwist, MultiplierSpec, bundles_equivalent, classify_multiplier,
                        cocycle_defect, eval_multiplier)
from siegel_lab import Cone, HermitianMap, SiegelDomain

D = SiegelDomain(Cone.orthant(1), HermitianMap([[[1.0]]]))
rng = np.random.default_rng(1)

c = np.array([1 + 2j])
plain = MultiplierSpec(c)
twisted = MultiplierSpec(c, CoboundaryTwist([0.3 - 0.4j], [0.7j], 2.0))

g, gp, p = D.random_element(rng), D.random_element(rng), D.random_point(rng)
print("m(g, p)             :", eval_multiplier(plain, D.Q, g, p))
print("twisted m(g, p)     :", eval_multiplier(twisted, D.Q, g, p))

# both satisfy the cocycle identity
print("cocycle defects     :", cocycle_defect(plain, D.Q, g, gp, p), cocycle_defect(twisted, D.Q, g, gp, p))

# the classifier strips the coboundary
res = classify_multiplier(twisted, D.Q, D.cone)
print("recovered c         :", res.c_hat)
print("same bundle as c    :", bundles_equivalent(res.c_hat, c))
print("same bundle as 0    :", bundles_equivalent(res.c_hat, [0]))
