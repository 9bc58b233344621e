"""Seeded random congruence systems for property sweeps.

One documented generator so every sweep is reproducible from its seed
alone, across platforms: random.Random(seed), then per system

    m ~ uniform over m_choices,
    n ~ uniform over [max(3, m + 1), n_max], redrawn until prime
        when prime_only is set,
    coefficients = rng.sample(range(1, n), m),

giving a single-row system with distinct nonzero coefficients mod n (so
no coordinate is trivial and no two coincide).  Changing this procedure
invalidates frozen sweep outputs; treat it as part of the contract.
"""

from __future__ import annotations

import random

from .constructions import is_prime
from .lattice_core import CongruenceSystem


def random_congruence_systems(count, seed, m_choices=(2, 3, 4), n_max=50,
                              prime_only=False):
    if count < 0 or n_max < 4:
        raise ValueError("need count >= 0 and n_max >= 4")
    rng = random.Random(seed)
    systems = []
    for _ in range(count):
        m = rng.choice(m_choices)
        while True:
            n = rng.randint(max(3, m + 1), n_max)
            if not prime_only or is_prime(n):
                break
        coeffs = tuple(rng.sample(range(1, n), m))
        systems.append(CongruenceSystem((n,), (coeffs,)))
    return systems
