"""
Organizer and voter logic on top of the ledger.

The organizer keeps the permission list (eligible address -> remaining
chances) and answers sign requests that arrive as ledger messages. A voter
blinds its ballot digest, gets it signed from its eligible account, checks
the answer with the contract, unblinds, and casts from a fresh anonymous
account during the vote window.

The voter's r and uuid never leave its VoterState. That same state is
enough to prove afterwards how the voter voted (see prove_receipt).
"""

# standard library imports
import logging
import threading
import uuid as _uuid
from dataclasses import dataclass
from typing import Optional

# imports that may need installation
import numpy as np
import oyaml as yaml

# local package imports
from blindballot import blindsig, sealing, utils
from blindballot.calls import Payload
from blindballot.contract import ElectionParams
from blindballot.errors import (CheckFailed, DuplicateAddress, NoSignature,
                                NonUnit, OutOfWindow, SignRefused)
from blindballot.ledger import ZERO_ADDRESS, Account, derive_address

logger = logging.getLogger(__name__)


def _rng(seed, *labels):
    if isinstance(seed, np.random.Generator):
        return seed
    seeds = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    return utils.child_rng(*seeds, *labels)


class PermissionList(object):
    """
    Eligible addresses and their remaining chances

    Membership is fixed at construction and chances only go down.
    ``consume`` is atomic so concurrent sign requests cannot overspend.

    Parameters
    ----------
    chances : dict
        address (bytes) -> number of signatures the voter may obtain
    """

    def __init__(self, chances):
        self._chances = {bytes(address): int(count) for address, count in chances.items()}
        self.initial_total = sum(self._chances.values())
        self._lock = threading.Lock()

    def __contains__(self, address):
        return bytes(address) in self._chances

    def __len__(self):
        return len(self._chances)

    def chance(self, address):
        """ remaining chances; 0 for addresses that are not listed """
        return self._chances.get(bytes(address), 0)

    def total(self):
        return sum(self._chances.values())

    def consume(self, address):
        """ take one chance if one is left; returns True on success """
        address = bytes(address)
        with self._lock:
            if self._chances.get(address, 0) > 0:
                self._chances[address] -= 1
                return True
            return False

    def items(self):
        return list(self._chances.items())


def organizer_setup(ledger, account, voter_addresses, key, windows, sealed=False,
                    sealing_key=None, salt=b'', default_chances=1):
    """
    Deploy the contract and build the permission list

    Parameters
    ----------
    ledger : Ledger
    account : Account
        the organizer's account; becomes the contract owner
    voter_addresses : list
        addresses, or (address, chances) pairs
    key : KeyPair
        signing key; only the public part is deployed
    windows : tuple
        (st, ct, et)
    sealed : bool, optional
    sealing_key : KeyPair, optional
        required when sealed; only its public part is deployed
    salt : bytes, optional
        contract address salt; defaults to the deploy index

    Returns
    -------
    ElectionContract
    PermissionList
    """
    chances = {}
    for entry in voter_addresses:
        if isinstance(entry, (tuple, list)):
            address, count = entry
        else:
            address, count = entry, default_chances
        address = bytes(address)
        if address in chances:
            raise DuplicateAddress('address {} listed twice'.format(address.hex()))
        if count < 1:
            raise ValueError('address {} needs at least one chance, got {}'.format(
                address.hex(), count))
        chances[address] = count

    st, ct, et = windows
    params = ElectionParams(key.public(), st, ct, et, sealed,
                            sealing_key.public() if sealing_key is not None else None)
    receipt = ledger.submit(account, ZERO_ADDRESS, params.to_payload(salt))
    contract = ledger.contract(receipt.unwrap())
    logger.info('deployed contract %s for %d voters', contract.address.hex(), len(chances))
    return contract, PermissionList(chances)


def organizer_sign(request_sender, blinded, permissions, key, params, clock):
    """
    Decide whether to sign: listed sender with a chance left gets a signature

    Parameters
    ----------
    request_sender : bytes
    blinded : int
    permissions : PermissionList
    key : KeyPair
        the organizer's private key
    params : ElectionParams
    clock : int
        time of the request

    Returns
    -------
    int
        the signed blinded ballot, or 0 when refused
    """
    if not params.in_sign_window(clock):
        raise OutOfWindow('signing allowed in [{}, {}), clock is {}'.format(
            params.st, params.ct, clock))
    # out-of-range requests are refused without spending a chance
    if not 0 < blinded < key.n:
        return blindsig.REFUSAL
    if not permissions.consume(request_sender):
        logger.info('refused sign request from %s', bytes(request_sender).hex())
        return blindsig.REFUSAL
    return blindsig.sign_blinded(blinded, key)


class Organizer(object):
    """
    The organizer as a ledger participant

    Answers ``request`` messages sent to its account with ``sign``
    messages, one request at a time.

    Parameters
    ----------
    ledger : Ledger
    account : Account
    key : KeyPair
    contract : ElectionContract
    permissions : PermissionList
    sealing_key : KeyPair, optional
    """

    def __init__(self, ledger, account, key, contract, permissions, sealing_key=None):
        self.ledger = ledger
        self.account = account
        self.key = key
        self.contract = contract
        self.permissions = permissions
        self.sealing_key = sealing_key
        self.issued = 0
        self._lock = threading.Lock()
        ledger.subscribe(account.address, self.handle_request)

    @classmethod
    def setup(cls, ledger, account, voter_addresses, key, windows, sealed=False,
              sealing_key=None, salt=b''):
        contract, permissions = organizer_setup(ledger, account, voter_addresses, key, windows,
                                                sealed=sealed, sealing_key=sealing_key, salt=salt)
        return cls(ledger, account, key, contract, permissions, sealing_key=sealing_key)

    def sign(self, request_sender, blinded, clock):
        with self._lock:
            answer = organizer_sign(request_sender, blinded, self.permissions, self.key,
                                    self.contract.params, clock)
            if answer != blindsig.REFUSAL:
                self.issued += 1
            return answer

    def handle_request(self, ledger, tx):
        if tx.kind != 'request':
            return
        blinded = tx.payload['blinded']
        try:
            answer = self.sign(tx.sender, blinded, tx.timestamp)
        except OutOfWindow as e:
            logger.info('late sign request from %s: %s', tx.sender.hex(), e)
            answer = blindsig.REFUSAL
        ledger.submit(self.account, tx.sender, Payload('sign', blinded=blinded, signed_blinded=answer))

    def publish_key(self):
        """ publish the sealing private key on the ledger """
        key = self.sealing_key
        receipt = self.ledger.submit(self.account, self.contract.address,
                                     Payload('publish', n=key.n, e=key.e, d=key.d))
        return receipt.unwrap()


@dataclass
class VoterState:
    """
    Everything a voter holds locally

    Attributes
    ----------
    ballot : bytes
        the payload that is signed and cast (a sealed ciphertext in sealed mode)
    r : int
        blinding factor
    uuid : UUID
    eligible_account : Account
    blinded : int
    plaintext : bytes
        the ballot before sealing (equal to ballot when unsealed)
    anon_account : Account, optional
        the one-time account used for the cast
    signed_blinded, signed : int, optional
    sign_tx_index, cast_tx_index : int, optional
        ledger positions of the organizer's answer and of the cast
    """
    ballot: bytes
    r: int
    uuid: _uuid.UUID
    eligible_account: Account
    blinded: int
    plaintext: bytes = b''
    anon_account: Optional[Account] = None
    signed_blinded: Optional[int] = None
    signed: Optional[int] = None
    sign_tx_index: Optional[int] = None
    cast_tx_index: Optional[int] = None
    cast_attempts: int = 0

    @property
    def digest(self):
        return blindsig.ballot_digest(self.ballot, self.uuid)


def voter_prepare(ballot, seed, pk, eligible_account, sealing_pk=None):
    """
    Draw r and a uuid locally and blind Hash(ballot) + uuid

    Parameters
    ----------
    ballot : bytes or str
        str ballots are UTF-8 encoded
    seed : int, tuple or numpy Generator
    pk : KeyPair
        organizer public key
    eligible_account : Account
    sealing_pk : KeyPair, optional
        in sealed mode the ballot is sealed first and the ciphertext is signed

    Returns
    -------
    VoterState
    """
    if isinstance(ballot, str):
        ballot = ballot.encode('utf-8')
    rng = _rng(seed, 'prepare')
    plaintext = bytes(ballot)
    if sealing_pk is not None:
        ballot = sealing.seal(plaintext, sealing_pk, rng)
    r = blindsig.random_blinding_factor(pk.n, rng.bytes)
    uuid = blindsig.new_uuid(rng.bytes)
    blinded = blindsig.blind(blindsig.ballot_digest(ballot, uuid), r, pk)
    return VoterState(ballot=bytes(ballot), r=r, uuid=uuid, eligible_account=eligible_account,
                      blinded=blinded, plaintext=plaintext)


def voter_retry(state, seed, pk):
    """ a new r for another attempt within the same chance; the uuid is kept """
    rng = _rng(seed, 'retry')
    r = blindsig.random_blinding_factor(pk.n, rng.bytes)
    return VoterState(ballot=state.ballot, r=r, uuid=state.uuid,
                      eligible_account=state.eligible_account,
                      blinded=blindsig.blind(state.digest, r, pk), plaintext=state.plaintext)


def voter_next_chance(state, ballot, seed, pk, sealing_pk=None):
    """ a fresh r and uuid for a further chance of the same voter """
    return voter_prepare(ballot, seed, pk, state.eligible_account, sealing_pk=sealing_pk)


def voter_obtain_signature(state, ledger, contract):
    """
    Sign stage for one voter

    Sends the blinded ballot to the contract owner from the eligible
    account, checks the answer with the contract and unblinds it.

    Returns
    -------
    VoterState
        the same state with signed_blinded, signed and sign_tx_index set

    Raises
    ------
    SignRefused
        the organizer answered 0 (or not at all)
    CheckFailed
        the contract's signature check rejected the answer
    """
    if not contract.params.in_sign_window(ledger.clock):
        raise OutOfWindow('sign stage is [{}, {}), clock is {}'.format(
            contract.params.st, contract.params.ct, ledger.clock))
    account = state.eligible_account
    request = ledger.submit(account, contract.owner, Payload('request', blinded=state.blinded))
    replies = [tx for tx in ledger.find(kind='sign', sender=contract.owner,
                                        recipient=account.address, start=request.index + 1)
               if tx.payload['blinded'] == state.blinded]
    if not replies:
        raise SignRefused('no answer to the sign request at index {}'.format(request.index))
    reply = replies[0]
    state.sign_tx_index = reply.index
    signed_blinded = reply.payload['signed_blinded']
    if signed_blinded == blindsig.REFUSAL:
        raise SignRefused('organizer refused to sign for {}'.format(account.hex))

    check = ledger.submit(account, contract.address,
                          Payload('check', signed_blinded=signed_blinded, blinded=state.blinded))
    if not check.unwrap():
        raise CheckFailed('the answer at index {} is not a signature on the blinded ballot; '
                          'take it up with the organizer'.format(reply.index))
    state.signed_blinded = signed_blinded
    state.signed = blindsig.unblind(signed_blinded, state.r, contract.params.pk)
    return state


def voter_cast(state, ledger, contract, seed, via_eligible=False):
    """
    Vote stage: cast (signed, ballot, uuid) from a fresh anonymous account

    Parameters
    ----------
    state : VoterState
    ledger : Ledger
    contract : ElectionContract
    seed : int, tuple or numpy Generator
        source of the anonymous account
    via_eligible : bool, optional
        cast from the eligible account instead; accepted by the contract
        but links the ballot to the voter

    Returns
    -------
    bool
        the judge function's answer

    Raises
    ------
    OutOfWindow
        the clock is outside [ct, et); no account is created
    """
    if state.signed is None:
        raise NoSignature('no signed ballot; finish the sign stage first')
    # nothing is created or submitted outside the window
    if not contract.params.in_vote_window(ledger.clock):
        raise OutOfWindow('vote stage is [{}, {}), clock is {}'.format(
            contract.params.ct, contract.params.et, ledger.clock))
    if via_eligible:
        account = state.eligible_account
    else:
        labels = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
        account = ledger.create_account(labels + ('anon', state.uuid.hex, state.cast_attempts))
        state.anon_account = account
    state.cast_attempts += 1
    receipt = ledger.submit(account, contract.address,
                            Payload('cast', signed=state.signed, ballot=state.ballot, uuid=state.uuid))
    state.cast_tx_index = receipt.index
    return receipt.unwrap()


def voter_check_inclusion(state, contract):
    """ individual verifiability: is my (uuid -> ballot) in the BallotBox? """
    return state.uuid in contract.ballot_box and contract.ballot_box[state.uuid] == state.ballot


@dataclass(frozen=True)
class VoteReceipt:
    """
    What a voter can hand a third party to prove its vote

    Attributes
    ----------
    ballot : bytes
    uuid : UUID
    r : int
    blinded : int
    sign_tx_index : int
        ledger position of the organizer's answer
    """
    ballot: bytes
    uuid: _uuid.UUID
    r: int
    blinded: int
    sign_tx_index: int


def prove_receipt(state):
    """ build a receipt from a voter's local state """
    if state.sign_tx_index is None or state.signed is None:
        raise NoSignature('the sign stage has not completed')
    return VoteReceipt(ballot=state.ballot, uuid=state.uuid, r=state.r,
                       blinded=state.blinded, sign_tx_index=state.sign_tx_index)


def verify_receipt(receipt, ledger, contract):
    """
    Check a receipt against the public record

    True iff the blinding reproduces from (ballot, uuid, r), the organizer
    answered exactly that blinded value at sign_tx_index, and the BallotBox
    holds uuid -> ballot.
    """
    try:
        rebuilt = blindsig.blind(blindsig.ballot_digest(receipt.ballot, receipt.uuid),
                                 receipt.r, contract.params.pk)
    except NonUnit:
        return False
    if rebuilt != receipt.blinded:
        return False
    log = ledger.log
    if not 0 <= receipt.sign_tx_index < len(log):
        return False
    tx = log[receipt.sign_tx_index]
    if tx.kind != 'sign' or tx.sender != contract.owner:
        return False
    if tx.payload['blinded'] != receipt.blinded or tx.payload['signed_blinded'] == blindsig.REFUSAL:
        return False
    return receipt.uuid in contract.ballot_box and contract.ballot_box[receipt.uuid] == receipt.ballot


# ---------------------------------------------------------------------
# voter state files: these hold r, uuid and account secrets, which is
# exactly what makes a receipt possible

def _account_to_dict(account):
    if account is None:
        return None
    return {'address': account.hex, 'secret': utils.bytes_to_hex(account.auth_secret)}


def _account_from_dict(configs):
    if configs is None:
        return None
    account = Account(utils.hex_to_bytes(configs['address']), utils.hex_to_bytes(configs['secret']))
    if derive_address(account.auth_secret) != account.address:
        raise ValueError('account secret does not match address {}'.format(configs['address']))
    return account


def _opt_hex(value):
    return None if value is None else utils.int_to_hex(value)


def _opt_int(text):
    return None if text is None else utils.hex_to_int(str(text))


def save_voter_state(state, filename):
    """
    Write a voter's local state to a YAML file

    Parameters
    ----------
    state : VoterState
    filename : str
    """
    configs = {'ballot': utils.bytes_to_hex(state.ballot),
               'plaintext': utils.bytes_to_hex(state.plaintext),
               'r': utils.int_to_hex(state.r),
               'uuid': state.uuid.hex,
               'blinded': utils.int_to_hex(state.blinded),
               'eligible_account': _account_to_dict(state.eligible_account),
               'anon_account': _account_to_dict(state.anon_account),
               'signed_blinded': _opt_hex(state.signed_blinded),
               'signed': _opt_hex(state.signed),
               'sign_tx_index': state.sign_tx_index,
               'cast_tx_index': state.cast_tx_index,
               'cast_attempts': state.cast_attempts}
    with open(filename, 'w') as f:
        yaml.dump(configs, f, default_flow_style=False)


def load_voter_state(filename):
    with open(filename, 'r') as f:
        configs = yaml.safe_load(f)
    return VoterState(ballot=utils.hex_to_bytes(str(configs['ballot'])),
                      plaintext=utils.hex_to_bytes(str(configs['plaintext'])),
                      r=utils.hex_to_int(str(configs['r'])),
                      uuid=_uuid.UUID(hex=str(configs['uuid'])),
                      blinded=utils.hex_to_int(str(configs['blinded'])),
                      eligible_account=_account_from_dict(configs['eligible_account']),
                      anon_account=_account_from_dict(configs['anon_account']),
                      signed_blinded=_opt_int(configs['signed_blinded']),
                      signed=_opt_int(configs['signed']),
                      sign_tx_index=configs['sign_tx_index'],
                      cast_tx_index=configs['cast_tx_index'],
                      cast_attempts=configs.get('cast_attempts', 0))
