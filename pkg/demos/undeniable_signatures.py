"""
Signing, confirming and denying
===============================

A signature can only be checked by talking to the signer. The confirmation
protocol convinces a verifier that a signature is genuine; the denial
protocol shows that a forgery is not.
"""

import numpy as np

from braidsig import bdp
from braidsig.braid import full_group, random_braid
from braidsig.keys import Signature, keygen
from braidsig.transcript import Transcript

rng = np.random.default_rng(2024)
pk, sk = keygen(8, 4, rng)
sig = bdp.sign(sk, pk, b"msg-001")
print("signature length:", sig.s.length, "factors")

# five-step zero-knowledge confirmation, recorded line by line
transcript = Transcript({"n": "8"})
ok = bdp.run_confirmation(pk, sk, sig, rng, rng, transcript=transcript)
for m in transcript.messages:
    print(m.step, m.role, m.name)
print("accepted:", ok)

# the same key under the alternative challenge shapes
for form in bdp.CHALLENGE_FORMS:
    print(form, bdp.run_confirmation(pk, sk, sig, rng, rng, form))

# a blinded signature differs from the plain one but still confirms
blinded = bdp.sign_blinded(sk, pk, b"msg-001")
print("blinded differs:", blinded.s != sig.s, "confirms:", bdp.run_confirmation(pk, sk, blinded, rng, rng))

# a forgery is rejected, and the denial protocol calls it invalid
forged = Signature(b"msg-001", random_braid(full_group(8), 4, rng))
print("forgery accepted:", bdp.run_confirmation(pk, sk, forged, rng, rng))
print("denial verdict on forgery:", bdp.run_denial(pk, sk, forged, rng))

# the two-challenge denial equation also holds for the genuine signature
print("denial verdict on genuine signature:", bdp.run_denial(pk, sk, sig, rng))
