"""
Fock model, intertwiners and coherent states
============================================

``Phi`` carries the Fock model into holomorphic functions on the domain.
``Psi`` relates two Fock models at a boundary point of the dual cone, where
the null space of ``H(xi)`` is nontrivial.
"""
import numpy as np

from siegel_lab import (CoherentDirection, Cone, ExpPolynomial, GroupElement, HermitianMap, Polynomial,
                        SiegelDomain, V_equivalent, coherent_defect, coherent_nullity,
                        intertwining_defect_phi, null_space_N_xi, psi_intertwining_defect)

rng = np.random.default_rng(2)
D = SiegelDomain(Cone.orthant(2), HermitianMap([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))

# Phi intertwines V_{xi,c} with pi_c
xi, c = np.array([0.7, 1.2]), np.array([0.2 - 0.5j, 0.1j])
F = ExpPolynomial(Polynomial.random(2, 3, rng, 0.5), [0.1, -0.2j])
defects = [intertwining_defect_phi(D, xi, c, D.random_element(rng), F, D.random_point(rng)) for _ in range(200)]
print("Phi defect (max of 200)    :", max(defects))

# the coherent function solves the first-order system, and nothing else does in degree <= 3
nu = np.array([0.9, 0.4])
a = CoherentDirection([0, 0], [1, 0])
print("coherent defect            :", coherent_defect(D, nu, c, a, D.random_point(rng)))
print("solution space dimension   :", coherent_nullity(D, nu, c, rng, degree=3, n_points=12)[0])

# at the boundary point xi = (1, 0) the null space is spanned by e2
xi = [1.0, 0.0]
print("N_xi basis                 :", null_space_N_xi(D.Q, xi).kernel.ravel())
s = np.zeros(2)
for t in ([1, 0], [0, 1], [1, 1]):
    print(f"V_s ~ V_t for s - t = {t}:", V_equivalent(D.Q, xi, s - np.array(t), s))

# Psi intertwines up to a phase built from the N_xi component of w
F = ExpPolynomial(Polynomial(2, {(0, 0): 1, (2, 0): 0.3}))
s, t = np.array([0.2, 0.5j]), np.array([-0.1j, 0.3])
worst = max(psi_intertwining_defect(D.Q, xi, s, t, 0.5 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)),
                                    F, rng.standard_normal(2) * 0.5) for _ in range(10))
print("Psi defect (max of 10)     :", worst)
