"""Seed bookkeeping for reproducible runs."""

import hashlib
import random


def rng_for(seed, *tags):
    """Derive an independent Random stream from a master seed and a tag path.

    Children derived with distinct tags never share state, so the call order
    of unrelated pipeline stages cannot perturb each other's draws.
    """
    h = hashlib.sha256(repr((seed,) + tags).encode()).digest()
    return random.Random(int.from_bytes(h[:16], "big"))
