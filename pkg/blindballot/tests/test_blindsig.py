import pytest
from hypothesis import given, settings
from hypothesis.strategies import binary, integers

from blindballot import blindsig, utils
from blindballot.blindsig import (ballot_digest, blind, fdh, is_unit,
                                  sign_blinded, sign_digest, unblind, verify)
from blindballot.errors import (KeyBitsError, MissingPrivateKey, NonUnit,
                                RefusalSentinel)
from blindballot.tests.conftest import KEY_512, TOY

EMPTY_SHA256 = 'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855'


def unit_digests(key, count):
    """ the first `count` ballot digests whose FDH is a unit mod n """
    digests = []
    i = 0
    while len(digests) < count:
        d = ballot_digest('ballot-{}'.format(i).encode(), bytes(16))
        if is_unit(fdh(d, key.n), key.n):
            digests.append(d)
        i += 1
    return digests


def test_toy_key():
    """ p=61, q=53, e=17 gives n=3233 and d=2753 """
    assert (TOY.n, TOY.e, TOY.d) == (3233, 17, 2753)


def test_hash_empty_ballot():
    assert blindsig.hash_ballot(b'').hex() == EMPTY_SHA256


def test_digest_layout():
    """ Hash(ballot) followed by the 16 uuid bytes """
    uuid = bytes(range(16))
    d = ballot_digest(b'', uuid)
    assert len(d) == blindsig.BALLOT_DIGEST_BYTES == 48
    assert d.hex() == EMPTY_SHA256 + uuid.hex()


def test_uuid_wrong_length():
    with pytest.raises(ValueError):
        ballot_digest(b'A', bytes(15))


def test_new_uuid():
    u = blindsig.new_uuid(lambda k: bytes(range(k)))
    assert u.bytes == bytes(range(16))


@given(digest=binary(min_size=48, max_size=48))
@settings(max_examples=50, deadline=None)
def test_fdh_in_range(digest):
    """ FDH lands in [1, n) and is deterministic """
    for key in (TOY, KEY_512):
        value = fdh(digest, key.n)
        assert 1 <= value < key.n
        assert value == fdh(digest, key.n)


def test_fdh_spreads_small_changes():
    d = ballot_digest(b'A', bytes(16))
    e = ballot_digest(b'B', bytes(16))
    assert fdh(d, KEY_512.n) != fdh(e, KEY_512.n)


def test_fdh_spreads_uuid_changes():
    """ same ballot, uuids one byte apart: distinct FDH values """
    d = ballot_digest(b'A', bytes(16))
    e = ballot_digest(b'A', bytes(15) + b'\x01')
    assert d != e
    assert fdh(d, KEY_512.n) != fdh(e, KEY_512.n)


def test_keygen_deterministic():
    assert blindsig.keygen(256, seed=9) == blindsig.keygen(256, seed=9)
    assert blindsig.keygen(256, seed=9) != blindsig.keygen(256, seed=10)


@pytest.mark.parametrize('bits', [16, 64, 512])
def test_keygen_bits(bits):
    key = blindsig.keygen(bits, seed=2)
    assert key.bits == bits
    m = 12345 % key.n
    assert pow(pow(m, key.e, key.n), key.d, key.n) == m


def test_keygen_too_small():
    with pytest.raises(KeyBitsError):
        blindsig.keygen(8)


def test_public_part():
    public = KEY_512.public()
    assert not public.has_private
    assert public.matches(KEY_512)
    with pytest.raises(MissingPrivateKey):
        public.d


# exhaustive law at the toy modulus: every unit r, ten digests
def test_unblinded_equals_direct_signature_toy():
    """ unblind(sign(blind(d, r)), r) == FDH(d)^d for all units r """
    units = blindsig.unit_group(TOY.n)
    for i in range(10):
        d = ballot_digest('law-{}'.format(i).encode(), bytes(16))
        direct = sign_digest(d, TOY)
        m = fdh(d, TOY.n)
        for r in units:
            blinded = m * pow(r, TOY.e, TOY.n) % TOY.n
            assert blinded == blind(d, r, TOY)
            assert unblind(sign_blinded(blinded, TOY), r, TOY) == direct
        assert verify(direct, d, TOY)


def test_blind_sign_verify_2048():
    """ 1,000 random (digest, r) pairs at a 2048-bit key """
    key = blindsig.keygen(2048, seed=3)
    rng = utils.child_rng(0, 'law-2048')
    for _ in range(1000):
        d = rng.bytes(48)
        r = blindsig.random_blinding_factor(key.n, rng.bytes)
        signed = unblind(sign_blinded(blind(d, r, key), key), r, key)
        assert verify(signed, d, key)


def test_blinding_is_perfect_toy():
    """ r -> blind(d, r) hits every unit exactly once """
    for d in unit_digests(TOY, 3):
        images = sorted(blind(d, r, TOY) for r in blindsig.unit_group(TOY.n))
        assert images == blindsig.unit_group(TOY.n)
        assert blindsig.blinding_is_perfect(d, TOY)


def test_one_blinding_factor_per_candidate():
    """ any observed blinded value is explained by every candidate digest exactly once """
    d1, d2 = unit_digests(TOY, 2)
    observed = blind(d1, 5, TOY)
    assert blindsig.count_blinding_factors(observed, d1, TOY) == 1
    assert blindsig.count_blinding_factors(observed, d2, TOY) == 1


def test_explaining_factor():
    d1, d2 = unit_digests(KEY_512, 2)
    observed = blind(d1, 7, KEY_512)
    assert blindsig.explaining_factor(observed, d1, KEY_512) == 7
    r = blindsig.explaining_factor(observed, d2, KEY_512)
    assert blind(d2, r, KEY_512) == observed


def test_exactly_one_signature_per_digest_toy():
    d = ballot_digest(b'forged', bytes(16))
    assert sum(verify(s, d, TOY) for s in range(TOY.n)) == 1


def test_non_unit_blinding_factor():
    d = ballot_digest(b'A', bytes(16))
    with pytest.raises(NonUnit):
        blind(d, blindsig.TOY_P, TOY)
    with pytest.raises(NonUnit):
        blind(d, 0, TOY)


def test_unblind_refusal():
    with pytest.raises(RefusalSentinel):
        unblind(blindsig.REFUSAL, 3, TOY)


def test_verify_rejects_out_of_range():
    d = ballot_digest(b'A', bytes(16))
    s = sign_digest(d, TOY)
    assert not verify(s + TOY.n, d, TOY)
    s = sign_digest(d, KEY_512)
    assert verify(s, d, KEY_512)
    assert not verify(s, ballot_digest(b'B', bytes(16)), KEY_512)


@given(seed=integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=50, deadline=None)
def test_blinding_factor_is_unit(seed):
    rng = utils.child_rng(seed)
    for key in (TOY, KEY_512):
        assert is_unit(blindsig.random_blinding_factor(key.n, rng.bytes), key.n)


def test_key_file(tmp_path):
    filename = str(tmp_path / 'key.yaml')
    blindsig.save_key(KEY_512, filename)
    assert blindsig.load_key(filename) == KEY_512
    blindsig.save_key(KEY_512, filename, private=False)
    assert blindsig.load_key(filename) == KEY_512.public()
