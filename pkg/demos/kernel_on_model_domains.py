"""
Bergman kernels of two model domains
=====================================

Quadrature over the dual cone against the closed forms on the upper
half-plane and on the ball-type domain ``Im z > |u|^2``.
"""
import numpy as np

from siegel_lab import Cone, HermitianMap, KernelQuadrature, SiegelDomain, bergman_kernel, kernel_convergence

# upper half-plane: N = 1, no u-variables
plane = SiegelDomain(Cone.orthant(1), HermitianMap.zero(1, 0))
kq = KernelQuadrature(plane.cone, plane.Q)
print("K(i, i)        =", bergman_kernel(kq, [1j], [], [1j], []).real)
print("1 / (4 pi)     =", 1 / (4 * np.pi))

# off the diagonal the kernel is -1 / (pi (z - conj w)^2)
z, w = 0.5 + 1j, -1 + 2j
print("K(z, w)        =", bergman_kernel(kq, [z], [], [w], []))
print("closed form    =", -1 / (np.pi * (z - np.conj(w)) ** 2))

# ball-type domain: on the diagonal K = 1 / (2 pi^2 t^3) with t = Im z - |u|^2
ball = SiegelDomain(Cone.orthant(1), HermitianMap([[[1.0]]]))
kq = KernelQuadrature(ball.cone, ball.Q)
for t in (0.25, 1.0, 4.0):
    u = 0.8
    zz = 1j * (t + u ** 2)
    print(f"t={t:<5} K = {bergman_kernel(kq, [zz], [u], [zz], [u]).real:.10f}"
          f"   oracle = {1 / (2 * np.pi ** 2 * t ** 3):.10f}")

# doubling the Gauss-Laguerre nodes barely moves the value
print("convergence    =", kernel_convergence(kq.with_nodes(24), [2j], [1], [1 + 3j], [0.5j]))
