"""
Denial with a hidden exponent
=============================

The verifier hides t in a pair of challenges. A signer facing a forgery can
recover t by trial and commits to it before learning anything else; facing
a genuine signature, every t fits and denial is impossible.
"""

import numpy as np

from braidsig import csp
from braidsig.braid import full_group, identity, random_braid
from braidsig.errors import AmbiguousT
from braidsig.keys import Signature, keygen

rng = np.random.default_rng(7)
pk, sk = keygen(8, 4, rng, "csp")
genuine = csp.sign_csp(sk, pk, b"contract")
forged = Signature(b"contract", random_braid(full_group(8), 4, rng), scheme="csp")

# honest denial of a forgery
print("forgery:", csp.run_zk_denial(pk, sk, forged, rng, rng, k=16))

# the genuine signature collapses the prover's test to the identity
v = csp.ZkDenialVerifier(pk, genuine.message, genuine.s, rng, k=16)
q1, q2 = v.begin()
print("delta is identity:", csp.challenge_delta(sk, q1, q2) == identity(8))
try:
    csp.ZkDenialProver(pk, sk, genuine.message, genuine.s, rng, k=16).recover(q1, q2)
except AmbiguousT as exc:
    print("prover cannot choose among", len(exc.candidates), "exponents")

# without the secret key, a prover can only guess t
wins = sum(csp.run_zk_denial(pk, None, forged, rng, rng, k=20) == csp.INVALID for _ in range(1000))
print(f"guessing prover success rate at k=20: {wins / 1000:.3f}")
