import numpy as np
import pytest

from braidsig import bdp, csp
from braidsig.braid import (
    cycle_type,
    full_group,
    identity,
    multiply,
    perm_of,
    power,
    product,
    inverse,
    random_braid,
    right_subgroup,
    validate,
)
from braidsig.codec import hash_to_braid
from braidsig.errors import AmbiguousT, ChallengeMismatch, CommitmentInvalid, NoMatch, PhaseError
from braidsig.keys import SecretKey, Signature, keygen


@pytest.fixture
def keys(rng):
    return keygen(8, 4, rng, "csp")


def forged(rng, msg=b"m"):
    return Signature(msg, random_braid(full_group(8), 4, rng), scheme="csp")


def test_trivial_key_signs_with_hash(keys):
    pk, sk = keys
    e = identity(8)
    trivial = SecretKey("csp", 8, 4, e, e)
    assert csp.sign_csp(trivial, pk, b"m").s == hash_to_braid(b"m", 8, 4)


def test_signature_is_conjugate_of_hash(keys):
    pk, sk = keys
    for i in range(20):
        msg = f"m{i}".encode()
        s = csp.sign_csp(sk, pk, msg).s
        assert cycle_type(perm_of(s)) == cycle_type(perm_of(hash_to_braid(msg, 8, 4)))
        assert bdp.is_valid(sk, pk, Signature(msg, s, scheme="csp"))


def test_confirmation_trivial_blinders_and_secret(keys):
    pk, sk = keys
    sig = csp.sign_csp(sk, pk, b"m")
    e = identity(8)
    q = bdp.challenge_form("std", [e], sig.s, pk.x)
    r = bdp.ConfirmationProver(pk, sk, b"m", sig.s).respond(q, (e, e))
    assert r == multiply(hash_to_braid(b"m", 8, 4), pk.alpha)


def test_confirmation_rejects_forgery(keys, rng):
    pk, sk = keys
    assert not bdp.run_confirmation(pk, sk, forged(rng), rng, rng)


def test_trivial_denial_challenge(keys, rng):
    pk, sk = keys
    s = forged(rng).s
    v = csp.ZkDenialVerifier(pk, b"m", s, rng)
    q1, q2 = v.begin(identity(8), 1)
    assert q1 == multiply(hash_to_braid(b"m", 8, 4), pk.alpha)
    assert q2 == multiply(s, pk.x)


def test_challenges_are_canonical(keys, rng):
    pk, _ = keys
    for _ in range(10):
        for q in csp.ZkDenialVerifier(pk, b"m", forged(rng).s, rng).begin():
            validate(q)


def test_delta_vanishes_for_valid_signatures(keys, rng):
    pk, sk = keys
    y = hash_to_braid(b"m", 8, 4)
    s = csp.sign_csp(sk, pk, b"m").s
    for _ in range(10):
        a = random_braid(right_subgroup(8), 4, rng)
        t = int(rng.integers(1, 17))
        q1, q2 = csp.denial_challenge(pk, y, s, a, t)
        assert csp.challenge_delta(sk, q1, q2) == identity(8)
        # and the per-candidate test itself collapses to e for every t
        assert product([power(s, t), sk.a1, power(inverse(y), t), inverse(sk.a1)]) == identity(8)


def test_valid_signature_is_ambiguous(keys, rng):
    pk, sk = keys
    sig = csp.sign_csp(sk, pk, b"m")
    v = csp.ZkDenialVerifier(pk, b"m", sig.s, rng)
    p = csp.ZkDenialProver(pk, sk, b"m", sig.s, rng)
    with pytest.raises(AmbiguousT) as info:
        p.recover(*v.begin())
    assert info.value.candidates == list(range(1, 17))
    with pytest.raises(PhaseError):
        p.check_and_open(v.a)


def test_delta_matches_closed_form_for_honest_challenges(keys, rng):
    pk, sk = keys
    y = hash_to_braid(b"m", 8, 4)
    s = forged(rng).s
    a = random_braid(right_subgroup(8), 4, rng)
    q1, q2 = csp.denial_challenge(pk, y, s, a, 5)
    expected = multiply(power(s, 5), inverse(product([sk.a1, power(y, 5), inverse(sk.a1)])))
    assert csp.challenge_delta(sk, q1, q2) == expected


def test_recovers_hidden_exponent(keys, rng):
    pk, sk = keys
    bad = forged(rng)
    v = csp.ZkDenialVerifier(pk, b"m", bad.s, rng, k=16)
    p = csp.ZkDenialProver(pk, sk, b"m", bad.s, rng, k=16)
    p.recover(*v.begin(t=11))
    assert p.t == 11


def test_single_candidate_bound(keys, rng):
    pk, sk = keys
    bad = forged(rng)
    v = csp.ZkDenialVerifier(pk, b"m", bad.s, rng, k=1)
    p = csp.ZkDenialProver(pk, sk, b"m", bad.s, rng, k=1)
    p.recover(*v.begin())
    assert p.t == 1


def test_malformed_challenge_has_no_match(keys, rng):
    pk, sk = keys
    bad = forged(rng)
    q = random_braid(full_group(8), 4, rng)
    with pytest.raises(NoMatch):
        csp.recover_exponent(sk, hash_to_braid(b"m", 8, 4), bad.s, q, q, 16)


def test_honest_denial_completeness(keys, rng):
    pk, sk = keys
    for _ in range(20):
        assert csp.run_zk_denial(pk, sk, forged(rng), rng, rng) == csp.INVALID


def test_ambiguity_rate_on_invalid_signatures(keys, rng):
    pk, sk = keys
    y = hash_to_braid(b"m", 8, 4)
    ambiguous = 0
    for _ in range(100):
        s = forged(rng).s
        a = random_braid(right_subgroup(8), 4, rng)
        t = int(rng.integers(1, 17))
        found = csp.matching_exponents(sk, y, s, csp.challenge_delta(sk, *csp.denial_challenge(pk, y, s, a, t)), 16)
        assert t in found
        ambiguous += len(found) > 1
    assert ambiguous <= 1


def test_wrong_randomness_fails_to_open(keys, rng):
    pk, sk = keys
    bad = forged(rng)
    v = csp.ZkDenialVerifier(pk, b"m", bad.s, rng)
    p = csp.ZkDenialProver(pk, sk, b"m", bad.s, rng)
    c = p.recover(*v.begin())
    p.check_and_open(v.reveal(c))
    with pytest.raises(CommitmentInvalid):
        v.conclude(bytes(32))


def test_prover_checks_revealed_secret(keys, rng):
    pk, sk = keys
    bad = forged(rng)
    v = csp.ZkDenialVerifier(pk, b"m", bad.s, rng)
    p = csp.ZkDenialProver(pk, sk, b"m", bad.s, rng)
    p.recover(*v.begin())
    with pytest.raises(ChallengeMismatch):
        p.check_and_open(random_braid(right_subgroup(8), 4, rng))


def test_guessing_prover_rate(keys):
    pk, _ = keys
    rng = np.random.default_rng(99)
    s = forged(rng).s
    wins = 0
    trials = 400
    for _ in range(trials):
        verdict = csp.run_zk_denial(pk, None, Signature(b"m", s, scheme="csp"), rng, rng, k=4)
        wins += verdict == csp.INVALID
    assert abs(wins / trials - 0.25) < 0.07


def test_zk_denial_phase_order(keys, rng):
    pk, sk = keys
    v = csp.ZkDenialVerifier(pk, b"m", pk.x, rng)
    with pytest.raises(PhaseError):
        v.conclude(bytes(32))
    with pytest.raises(ValueError):
        v.begin(t=17)
    with pytest.raises(ValueError):
        csp.ZkDenialVerifier(pk, b"m", pk.x, rng, k=0)
