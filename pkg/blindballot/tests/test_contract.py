import dataclasses
import uuid as _uuid
from collections import Counter

import pytest

from blindballot import blindsig, sealing, utils
from blindballot.contract import (ElectionContract, ElectionParams,
                                  contract_address, format_tally, parse_tally)
from blindballot.errors import (BadParams, BadWindow, ElectionOpen, KeyMismatch,
                                NotSealed, OutOfWindow, ResultSealed)
from blindballot.tests.conftest import KEY_512, WINDOWS

ST, CT, ET = WINDOWS
SEALING_KEY = blindsig.keygen(1024, seed=21)


def make_contract(sealed=False):
    params = ElectionParams(KEY_512, *WINDOWS, sealed=sealed,
                            sealing_pk=SEALING_KEY if sealed else None)
    return ElectionContract(contract_address(bytes(20), b'test'), params)


def signed_ballot(ballot, key=KEY_512, seed=0):
    """ (signature, ballot, uuid) as an honest voter would cast it """
    u = blindsig.new_uuid(utils.child_rng(seed, 'uuid').bytes)
    return blindsig.sign_digest(blindsig.ballot_digest(ballot, u), key), ballot, u


@pytest.mark.parametrize('windows', [(10, 10, 30), (10, 20, 20), (30, 20, 10)])
def test_bad_windows(windows):
    with pytest.raises(BadWindow):
        ElectionParams(KEY_512, *windows)


def test_sealing_key_iff_sealed():
    with pytest.raises(BadParams):
        ElectionParams(KEY_512, *WINDOWS, sealed=True)
    with pytest.raises(BadParams):
        ElectionParams(KEY_512, *WINDOWS, sealing_pk=SEALING_KEY)


@pytest.mark.parametrize('n,e', [(1, 3), (2, 3), (3232, 17), (KEY_512.n, 1), (KEY_512.n, 4)])
def test_degenerate_key(n, e):
    with pytest.raises(BadParams):
        ElectionParams(blindsig.KeyPair(n, e), *WINDOWS)


def test_small_sealing_key():
    small = blindsig.keygen(512, seed=23)
    with pytest.raises(BadParams):
        ElectionParams(KEY_512, *WINDOWS, sealed=True, sealing_pk=small)


def test_toy_key_deploys():
    assert ElectionParams(blindsig.toy_keypair(), *WINDOWS).pk.n == 3233


def test_params_hold_public_keys():
    params = ElectionParams(KEY_512, *WINDOWS, sealed=True, sealing_pk=SEALING_KEY)
    assert not params.pk.has_private
    assert not params.sealing_pk.has_private


# a deployed key is fixed for the life of the election
def test_params_frozen():
    contract = make_contract()
    with pytest.raises(dataclasses.FrozenInstanceError):
        contract.params.pk = blindsig.keygen(512, seed=4).public()
    assert contract.params.pk == KEY_512.public()


def test_params_payload():
    params = ElectionParams(KEY_512, *WINDOWS)
    assert ElectionParams.from_payload(params.to_payload(b'')) == params


# window boundaries: [st, ct) for checks, [ct, et) for casts, et onward for tallies
@pytest.mark.parametrize('clock,allowed', [(ST - 1, False), (ST, True), (CT - 1, True), (CT, False)])
def test_check_window(clock, allowed):
    contract = make_contract()
    blinded = 5
    signed_blinded = blindsig.sign_blinded(blinded, KEY_512)
    if allowed:
        assert contract.check_signature(signed_blinded, blinded, clock)
    else:
        with pytest.raises(OutOfWindow):
            contract.check_signature(signed_blinded, blinded, clock)


@pytest.mark.parametrize('clock,allowed', [(CT - 1, False), (CT, True), (ET - 1, True), (ET, False)])
def test_cast_window(clock, allowed):
    contract = make_contract()
    if allowed:
        assert contract.cast(*signed_ballot(b'A'), clock)
    else:
        with pytest.raises(OutOfWindow):
            contract.cast(*signed_ballot(b'A'), clock)


@pytest.mark.parametrize('clock,allowed', [(CT, False), (ET - 1, False), (ET, True), (ET + 100, True)])
def test_tally_window(clock, allowed):
    contract = make_contract()
    if allowed:
        assert contract.tally(clock) == Counter()
    else:
        with pytest.raises(ElectionOpen):
            contract.tally(clock)


def test_check_signature():
    contract = make_contract()
    blinded = 12345
    good = blindsig.sign_blinded(blinded, KEY_512)
    assert contract.check_signature(good, blinded, ST)
    assert not contract.check_signature(good + 1, blinded, ST)
    assert not contract.check_signature(KEY_512.n, blinded, ST)


def test_judge_uuid_guard():
    """ a signed ballot counts once """
    contract = make_contract()
    cast = signed_ballot(b'A')
    assert contract.cast(*cast, CT)
    assert not contract.cast(*cast, CT)
    assert len(contract.ballot_box) == 1


def test_judge_rejects_changed_ballot():
    contract = make_contract()
    signed, _, u = signed_ballot(b'A')
    assert not contract.cast(signed, b'B', u, CT)
    assert not contract.cast(signed, b'A', _uuid.UUID(int=u.int ^ 1), CT)
    assert not contract.cast(0, b'A', u, CT)


def test_judge_rejects_other_key():
    contract = make_contract()
    assert not contract.cast(*signed_ballot(b'A', key=blindsig.keygen(512, seed=99)), CT)


def test_tally_counts_ballots():
    contract = make_contract()
    for i, ballot in enumerate([b'A', b'B', b'A']):
        contract.cast(*signed_ballot(ballot, seed=i), CT)
    assert contract.tally(ET) == Counter({b'A': 2, b'B': 1})


def test_state_root():
    """ casts change the root, checks do not """
    contract = make_contract()
    root = contract.state_root()
    contract.check_signature(1, 1, ST)
    assert contract.state_root() == root
    contract.cast(*signed_ballot(b'A'), CT)
    assert contract.state_root() != root


def test_sealed_tally():
    contract = make_contract(sealed=True)
    rng = utils.child_rng(0, 'seal')
    for i, ballot in enumerate([b'A', b'B', b'B']):
        contract.cast(*signed_ballot(sealing.seal(ballot, SEALING_KEY, rng), seed=i), CT)
    assert b'A' not in contract.ballot_box.payloads()
    with pytest.raises(ResultSealed):
        contract.tally(ET)
    with pytest.raises(ElectionOpen):
        contract.publish_key(SEALING_KEY, ET - 1)
    with pytest.raises(KeyMismatch):
        contract.publish_key(blindsig.keygen(1024, seed=22), ET)
    with pytest.raises(KeyMismatch):
        contract.publish_key(SEALING_KEY.public(), ET)
    contract.publish_key(SEALING_KEY, ET)
    assert contract.tally(ET) == Counter({b'A': 1, b'B': 2})


def test_sealed_garbage_is_skipped():
    """ a validly signed payload that does not decrypt is not counted """
    contract = make_contract(sealed=True)
    contract.cast(*signed_ballot(b'not a sealed ballot'), CT)
    contract.publish_key(SEALING_KEY, ET)
    assert contract.tally(ET) == Counter()


def test_publish_unsealed():
    with pytest.raises(NotSealed):
        make_contract().publish_key(SEALING_KEY, ET)


def test_format_tally():
    counts = Counter({b'B': 4, b'A': 6, b'': 1, b'Z': 0})
    text = format_tally(counts)
    assert text == ' 1\n41 6\n42 4\n'
    assert parse_tally(text) == Counter({b'A': 6, b'B': 4, b'': 1})


def test_format_tally_hex_counts():
    assert format_tally(Counter({b'A': 255})) == '41 ff\n'


def test_contract_address():
    assert contract_address(bytes(20), b'x') == contract_address(bytes(20), b'x')
    assert contract_address(bytes(20), b'x') != contract_address(bytes(20), b'y')
    assert len(contract_address(bytes(20), b'x')) == 20
