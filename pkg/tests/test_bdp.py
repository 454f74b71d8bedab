import numpy as np
import pytest

from braidsig import bdp
from braidsig.braid import (
    cycle_type,
    full_group,
    generator,
    identity,
    inverse,
    multiply,
    perm_of,
    product,
    random_braid,
    right_subgroup,
)
from braidsig.codec import hash_to_braid
from braidsig.errors import ChallengeMismatch, ParameterTooSmall, PhaseError
from braidsig.keys import PublicKey, SecretKey, Signature, keygen
from braidsig.transcript import Transcript
from oracles import burau, signed


@pytest.fixture
def keys(rng):
    return keygen(8, 4, rng)


def identity_keys(n=8, l=4):
    rng = np.random.default_rng(11)
    alpha = random_braid(full_group(n), l, rng)
    e = identity(n)
    return PublicKey("bdp", n, l, alpha, alpha), SecretKey("bdp", n, l, e, e)


def _burau_product(braids, n):
    word = []
    for b in braids:
        word += signed(b.to_word())
    return burau(word, n)


def test_identity_key_signs_with_hash():
    pk, sk = identity_keys()
    assert bdp.sign(sk, pk, b"m").s == hash_to_braid(b"m", 8, 4)


def test_signatures_satisfy_validity(keys):
    pk, sk = keys
    for i in range(20):
        sig = bdp.sign(sk, pk, f"m{i}".encode())
        y = hash_to_braid(sig.message, 8, 4)
        assert sig.s == product([sk.a2, y, inverse(sk.a1)])
        assert bdp.is_valid(sk, pk, sig)


def test_fixed_seed_signature_confirms():
    pk, sk = keygen(8, 4, np.random.default_rng(1))
    sig = bdp.sign(sk, pk, b"msg-001")
    assert bdp.run_confirmation(pk, sk, sig, np.random.default_rng(2), np.random.default_rng(3))


def test_blinded_signatures(keys):
    pk, sk = keys
    plain, blinded = bdp.sign(sk, pk, b"m"), bdp.sign_blinded(sk, pk, b"m")
    assert plain.s != blinded.s
    assert blinded == bdp.sign_blinded(sk, pk, b"m")
    assert bdp.is_valid(sk, pk, blinded)
    assert not bdp.is_valid(sk, pk, Signature(b"m", plain.s, blinded=True))


@pytest.mark.parametrize("form", list(bdp.CHALLENGE_FORMS))
def test_challenge_forms_match_burau(rng, form):
    n = 5
    braids = [random_braid(full_group(n), 2, rng) for _ in range(5)]
    secrets, (first, second) = braids[: bdp.CHALLENGE_FORMS[form]], braids[3:]
    got = bdp.challenge_form(form, secrets, first, second)
    inv = [inverse(b) for b in secrets]
    order = {
        "std": lambda: [inv[0], first, second, secrets[0]],
        "v1": lambda: [secrets[0], first, second, secrets[1]],
        "v2": lambda: [inv[0], first, secrets[0], inv[1], second, secrets[1]],
        "v3": lambda: [secrets[0], first, secrets[1], second, secrets[2]],
    }[form]()
    assert burau(signed(got.to_word()), n) == _burau_product(order, n)


def test_challenge_form_arity():
    e = identity(5)
    with pytest.raises(ValueError):
        bdp.challenge_form("v3", [e], e, e)


def test_forced_trivial_challenge(keys):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    v = bdp.ConfirmationVerifier(pk, b"m", sig.s, np.random.default_rng(0))
    assert v.begin([identity(8)]) == multiply(sig.s, pk.x)


def test_challenge_is_conjugate_of_sx(keys, rng):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    q = bdp.ConfirmationVerifier(pk, b"m", sig.s, rng).begin()
    assert cycle_type(perm_of(q)) == cycle_type(perm_of(multiply(sig.s, pk.x)))


def test_unblinded_response_identity(keys, rng):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    a = random_braid(right_subgroup(8), 4, rng)
    q = product([inverse(a), sig.s, pk.x, a])
    p = bdp.ConfirmationProver(pk, sk, b"m", sig.s)
    e = identity(8)
    y = hash_to_braid(b"m", 8, 4)
    assert p.respond(q, (e, e)) == product([inverse(a), y, pk.alpha, a])


def test_identity_key_response_is_bQc(rng):
    pk, sk = identity_keys()
    b, c, q = (random_braid(full_group(8), 4, rng) for _ in range(3))
    p = bdp.ConfirmationProver(pk, sk, b"m", q)
    assert p.respond(q, (b, c)) == product([b, q, c])


@pytest.mark.parametrize("scheme", ["bdp", "blinded", "csp"])
@pytest.mark.parametrize("form", list(bdp.CHALLENGE_FORMS))
def test_confirmation_completeness(rng, scheme, form):
    from braidsig.csp import sign_csp

    for _ in range(5):
        pk, sk = keygen(8, 4, rng, "csp" if scheme == "csp" else "bdp")
        msg = rng.bytes(8)
        sig = {"bdp": bdp.sign, "blinded": bdp.sign_blinded, "csp": sign_csp}[scheme](sk, pk, msg)
        assert bdp.run_confirmation(pk, sk, sig, rng, rng, form)
        assert bdp.run_confirmation(pk, sk, sig, rng, rng, form, zk=False)


@pytest.mark.parametrize("form", list(bdp.CHALLENGE_FORMS))
def test_forged_signature_rejected(keys, rng, form):
    pk, sk = keys
    for _ in range(10):
        forged = Signature(b"m", random_braid(full_group(8), 4, rng))
        assert not bdp.run_confirmation(pk, sk, forged, rng, rng, form)


def test_tampered_response_rejected(keys, rng):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    v = bdp.ConfirmationVerifier(pk, b"m", sig.s, rng)
    p = bdp.ConfirmationProver(pk, sk, b"m", sig.s, rng)
    r = p.respond(v.begin())
    secrets = v.reveal(multiply(r, generator(8, 1)))
    assert not v.verify(*p.check_and_open(secrets))


def test_cheating_verifier_gets_nothing(keys, rng):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    v = bdp.ConfirmationVerifier(pk, b"m", sig.s, rng)
    p = bdp.ConfirmationProver(pk, sk, b"m", sig.s, rng)
    p.respond(v.begin())
    other = random_braid(right_subgroup(8), 4, rng)
    with pytest.raises(ChallengeMismatch):
        p.check_and_open([other])
    with pytest.raises(PhaseError):
        p.check_and_open(v.secrets)


def test_confirmation_phase_order(keys, rng):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    v = bdp.ConfirmationVerifier(pk, b"m", sig.s, rng)
    p = bdp.ConfirmationProver(pk, sk, b"m", sig.s, rng)
    with pytest.raises(PhaseError):
        v.reveal(identity(8))
    with pytest.raises(PhaseError):
        p.check_and_open([identity(8)])
    q = v.begin()
    with pytest.raises(PhaseError):
        v.begin()
    with pytest.raises(PhaseError):
        v.verify(identity(8), identity(8))
    r = p.respond(q)
    with pytest.raises(PhaseError):
        p.respond(q)
    with pytest.raises(PhaseError):
        p.respond_direct(q)
    v.reveal(r)
    with pytest.raises(PhaseError):
        v.verify_direct(r)


def test_nonzk_rejects_challenge_for_other_signer(rng):
    pk, sk = keygen(8, 4, rng)
    pk2, sk2 = keygen(8, 4, rng)
    sig = bdp.sign(sk, pk, b"m")
    v = bdp.ConfirmationVerifier(pk, b"m", sig.s, rng)
    v.begin()
    other = bdp.ConfirmationProver(pk2, sk2, b"m", sig.s)
    assert not v.verify_direct(other.respond_direct(v.challenge))


def test_transcripts_replay_from_seeds(keys):
    pk, sk = keys
    sig = bdp.sign(sk, pk, b"m")
    texts = []
    for _ in range(2):
        t = Transcript({"n": "8"})
        bdp.run_confirmation(pk, sk, sig, np.random.default_rng(4), np.random.default_rng(5), "v2", transcript=t)
        texts.append(t.to_text())
    assert texts[0] == texts[1]
    steps = [m.step for m in Transcript.from_text(texts[0]).messages]
    assert steps == [1, 2, 3, 4, 5]


# -- denial ------------------------------------------------------------------

def test_denial_blocks_commute(keys):
    pk, _ = keys
    b1, b2 = bdp.denial_blocks(pk)
    assert b1.commutes_with(b2)
    assert (b1.strands, b2.strands) == pk.split
    assert b1.lo == 5 and b2.hi == 7


@pytest.mark.parametrize("n", [5, 6])
def test_denial_needs_seven_strands(rng, n):
    pk, _ = keygen(n, 2, rng)
    with pytest.raises(ParameterTooSmall):
        bdp.denial_blocks(pk)


def test_denial_completeness(keys, rng):
    pk, sk = keys
    for _ in range(20):
        forged = Signature(b"m", random_braid(full_group(8), 4, rng))
        assert bdp.run_denial(pk, sk, forged, rng) == bdp.INVALID


def test_denial_random_answer_is_improper(keys, rng):
    pk, sk = keys
    forged = Signature(b"m", random_braid(full_group(8), 4, rng))
    v = bdp.DenialVerifier(pk, b"m", forged.s, rng)
    p = bdp.DenialProver(pk, sk, b"m", forged.s)
    r1, _ = p.respond(*v.begin())
    assert v.verify(r1, random_braid(full_group(8), 4, rng)) == bdp.IMPROPER


def test_denial_trivial_secrets(keys, rng):
    pk, sk = keys
    forged = random_braid(full_group(8), 4, rng)
    v = bdp.DenialVerifier(pk, b"m", forged, rng)
    q1, q2 = v.begin((identity(8), identity(8)))
    assert q1 == q2
    r1, r2 = bdp.DenialProver(pk, sk, b"m", forged).respond(q1, q2)
    assert r1 == r2 and v.verify(r1, r2) == bdp.INVALID


def test_denial_equation_also_holds_for_valid_signatures(keys, rng):
    # the two-challenge denial cannot separate valid from invalid signatures
    pk, sk = keys
    for blinded in (False, True):
        sig = (bdp.sign_blinded if blinded else bdp.sign)(sk, pk, b"m")
        assert bdp.run_denial(pk, sk, sig, rng) == bdp.INVALID


def test_denial_phase_order(keys, rng):
    pk, sk = keys
    v = bdp.DenialVerifier(pk, b"m", pk.x, rng)
    with pytest.raises(PhaseError):
        v.verify(pk.x, pk.x)
    p = bdp.DenialProver(pk, sk, b"m", pk.x)
    p.respond(*v.begin())
    with pytest.raises(PhaseError):
        p.respond(pk.x, pk.x)
