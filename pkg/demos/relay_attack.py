"""
Relaying one confirmation to many verifiers
===========================================

Without the prover's challenge check, Eve can chain the challenges of k
verifiers through one session with the signer and convince all of them at
once. The zero-knowledge confirmation stops this at its fourth step.
"""

import numpy as np

from braidsig import analysis, bdp
from braidsig.keys import keygen

rng = np.random.default_rng(3)
pk, sk = keygen(16, 2, rng)
sig = bdp.sign(sk, pk, b"I owe Eve nothing")
decoy = bdp.sign(sk, pk, b"lunch at noon")

scenario = analysis.new_blackmail_scenario(pk, sig.message, sig.s, decoy.message, decoy.s, k=3)
print("commuting blocks:", [(b.lo, b.hi) for b in scenario.blocks])

print("non-ZK signer:", analysis.blackmail_run(scenario, pk, sk, rng, "nonzk"))

scenario = analysis.new_blackmail_scenario(pk, sig.message, sig.s, decoy.message, decoy.s, k=3)
verdicts = analysis.blackmail_run(scenario, pk, sk, rng, "zk")
print("ZK signer:", verdicts, "aborted:", scenario.aborted)
