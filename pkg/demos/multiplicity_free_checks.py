"""
Five equivalent conditions, checked independently
=================================================

For a real form ``W`` every check decides the same thing: whether
``Im Q`` vanishes on ``W``.  The report shows each verdict with its evidence.
"""
import json

import numpy as np

from siegel_lab import Cone, HermitianMap, RealForm, random_instance, run_checks

rng = np.random.default_rng(3)

# a tube-type example and one where Im Q(e1, e2) = (0, -1)
tube = (Cone.orthant(1), HermitianMap([[[1.0]]]), RealForm.standard(1))
skew = (Cone.simplicial([[1, 1], [1, -1]]), HermitianMap([np.eye(2), [[0, 1j], [-1j, 0]]]), RealForm.standard(2))

for name, (cone, Q, W) in (("tube", tube), ("skew", skew)):
    rep = run_checks(cone, Q, W, rng)
    print(name, rep.verdicts, "consistent:", rep.consistent)

# each failing check names its evidence
for check, cert in run_checks(*skew, rng).certificates.items():
    print(f"{check:12s}", json.dumps({k: v for k, v in cert.items() if k != "first_failure"}))

# random instances: the verdicts never disagree
tally = {True: 0, False: 0}
for _ in range(40):
    real = bool(rng.random() < 0.5)
    rep = run_checks(*random_instance(rng, 2, 2, real_on_W=real), rng, sample_count=2)
    assert rep.consistent
    tally[rep.verdict_ii] += 1
print("random instances (true, false):", tally[True], tally[False])
