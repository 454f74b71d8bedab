import numpy as np
import pytest

from braidsig.braid import (
    CanonicalForm,
    delta,
    full_group,
    identity,
    normalize,
    parse_word,
    random_braid,
)
from braidsig.codec import (
    Commitment,
    blob_commit,
    blob_open,
    blob_verify,
    braid_digest,
    deserialize,
    hash_to_braid,
    parse_braid,
    serialize,
)
from braidsig.errors import InvariantViolation, ParseError


def test_hash_to_braid_deterministic():
    assert hash_to_braid(b"hello", 8, 4) == hash_to_braid(b"hello", 8, 4)


def test_hash_to_braid_bounds():
    for i in range(200):
        y = hash_to_braid(f"m{i}".encode(), 8, 4)
        assert 0 <= y.inf <= y.sup <= 4


def test_hash_to_braid_collision_audit():
    forms = {hash_to_braid(f"msg-{i:04d}".encode(), 8, 4) for i in range(1000)}
    assert len(forms) == 1000


def test_digest_is_canonical():
    a = normalize(parse_word("s1 s2 s1 s3^-1 s2", 4))
    assert braid_digest(a) == braid_digest(normalize(a.to_word()))
    x = normalize(parse_word("s1 s2 s1", 3))
    y = normalize(parse_word("s2 s1 s2", 3))
    assert braid_digest(x) == braid_digest(y)
    assert braid_digest(identity(3)) != braid_digest(delta(3))
    assert len(braid_digest(x)) == 32


def test_blob_round_trip():
    r = bytes(range(32))
    c = blob_commit(r, 5)
    assert blob_verify(c, r, 5)
    assert not blob_verify(c, r, 6)
    assert not blob_verify(c, bytes(32), 5)
    assert blob_open(c, r, 16) == 5
    assert blob_open(c, bytes(32), 16) is None


def test_blob_no_collisions_across_t():
    rng = np.random.default_rng(3)
    seen = set()
    for t in range(1, 17):
        for _ in range(20):
            seen.add(blob_commit(rng.bytes(32), t).value)
    assert len(seen) == 16 * 20


def test_blob_rejects_bad_inputs():
    with pytest.raises(ValueError):
        blob_commit(b"short", 1)
    with pytest.raises(ValueError):
        blob_commit(bytes(32), 0)
    with pytest.raises(ValueError):
        Commitment(b"x")


def test_identity_serialization():
    assert serialize(identity(3)) == b"B 3 0 0 |\n"


def test_serialization_example():
    x = normalize(parse_word("s1^-1", 3))
    assert serialize(x) == b"B 3 -1 1 | 3,1,2\n"


def test_round_trip_random(rng):
    F = full_group(7)
    for _ in range(100):
        a = random_braid(F, 3, rng) * random_braid(F, 2, rng).inverse()
        assert deserialize(serialize(a), 7) == a


@pytest.mark.parametrize(
    "data",
    [
        b"B 3 0 1 | 1,1,2\n",      # not a bijection
        b"B 3 0 1 | 1,2,3\n",      # identity factor
        b"B 3 0 1 | 3,2,1\n",      # Δ factor
        b"B 3 0 2 | 2,1,3 | 1,3,2\n",  # not left-weighted
        b"B 3 0 1 | 1,2\n",        # wrong length
    ],
)
def test_invariant_violations(data):
    with pytest.raises(InvariantViolation):
        deserialize(data)


@pytest.mark.parametrize(
    "data",
    [
        b"B 3 0 0 |",             # missing newline
        b"X 3 0 0 |\n",
        b"B 3 0 2 | 2,1,3\n",
        b"B 3 zero 0 |\n",
        b"B 3 0 0 | \n",
        b"B 3 0 1 | 2, 1,3\n",
        b"B 3 0 0 |\n\n",
    ],
)
def test_parse_errors(data):
    with pytest.raises(ParseError):
        deserialize(data)


def test_expected_n_is_checked():
    with pytest.raises(ParseError):
        deserialize(b"B 3 0 0 |\n", 4)


def test_serialization_injective(rng):
    F = full_group(5)
    braids = {random_braid(F, 2, rng) for _ in range(300)}
    assert len({serialize(b) for b in braids}) == len(braids)


def test_parse_braid_accepts_line_without_newline():
    assert parse_braid("B 4 2 0 |") == CanonicalForm(4, 2, ())
