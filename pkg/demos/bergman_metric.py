"""
Bergman metric from moment integrals
====================================

The metric blocks come from moments of the kernel integrand.  Finite
differences of ``log K`` give an independent check.  On the slice
``i R^N x jW`` the imaginary parts measure how far orbits are from coisotropic.
"""
import numpy as np

from siegel_lab import Cone, DomainPoint, HermitianMap, KernelQuadrature, RealForm, coisotropy_defect, metric_blocks

# upper half-plane: g = 1 / (2 y^2)
kq = KernelQuadrature(Cone.orthant(1), HermitianMap.zero(1, 0))
for y in (0.5, 1.0, 3.0):
    mb = metric_blocks(kq, DomainPoint([1j * y], []))
    print(f"y={y}: g_zz = {mb.g_zz[0, 0].real:.8f}  exact {1 / (2 * y * y):.8f}  FD rel err {mb.fd_rel_error:.1e}")

# two-variable example with Im Q nonzero on the standard real form
Q = HermitianMap([np.eye(2), [[0, 1j], [-1j, 0]]])
kq = KernelQuadrature(Cone.simplicial([[1, 1], [1, -1]]), Q, nodes=32)
p = DomainPoint([3j, 1j], [0.3j, 0.5j])
mb = metric_blocks(kq, p)
print("eigenvalues             :", np.linalg.eigvalsh(mb.matrix()))
print("FD rel err              :", mb.fd_rel_error)
print("coisotropy defect, R^2  :", coisotropy_defect(kq, RealForm.standard(2), p))
