"""
Three-particle GHZ state: sampled products of A, B, C, D.

Each of A = s1x s2y s3y, B = s1y s2x s3y, C = s1y s2y s3x has the GHZ state
as a +1 eigenstate and D = s1x s2x s3x as a -1 eigenstate, so every single
sampled product is fixed even though the individual spins are random.
"""

import numpy as np

from singlet_ghz import GHZ_A, GHZ_B, GHZ_C, GHZ_D, expectation, joint_outcome_distribution, make_ghz
from singlet_ghz.qcore import OutcomeSampler

ghz = make_ghz()
rng = np.random.default_rng(0)

for obs in (GHZ_A, GHZ_B, GHZ_C, GHZ_D):
    dist = joint_outcome_distribution(ghz, obs)
    support = [o for o, p in dist.items() if p > 0]
    samples = OutcomeSampler(ghz, obs).sample(rng.random(100_000))
    products = np.unique(samples.prod(axis=1))
    print(f"{obs}: <{obs}> = {expectation(ghz, obs):+.3f}, "
          f"outcomes with nonzero probability: {support}, sampled products: {products}")
