"""
The election contract: a deterministic state machine executed by the
ledger, one transaction at a time.

Phases are gated by the timestamp of the executing transaction::

    [st, ct)  sign window: organizer signs, anyone may check (signature check)
    [ct, et)  vote window: anyone may cast through the judge (judge function)
    [et, ...) count: tally, and publish of the sealing key in sealed mode
"""

# standard library imports
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional

# imports that may need installation
from Crypto.Hash import SHA256, keccak

# local package imports
from blindballot import blindsig, sealing, utils
from blindballot.blindsig import KeyPair
from blindballot.calls import Payload
from blindballot.errors import (BadParams, BadWindow, ElectionOpen, KeyMismatch,
                                NotSealed, OutOfWindow, ResultSealed, SealingError,
                                UnknownCall)

logger = logging.getLogger(__name__)


def _check_public_key(name, key, min_modulus):
    """ odd modulus of at least min_modulus and an odd exponent of at least 3 """
    if key.n < min_modulus or key.n % 2 == 0:
        raise BadParams('{}: modulus {} is too small or even'.format(name, key.n))
    if key.e < 3 or key.e % 2 == 0:
        raise BadParams('{}: exponent {} must be odd and at least 3'.format(name, key.e))


@dataclass(frozen=True)
class ElectionParams:
    """
    Immutable election configuration fixed at deployment

    Parameters
    ----------
    pk : KeyPair
        organizer public key used by both checks
    st, ct, et : int
        vote-start, vote-check and vote-end logical times, st < ct < et
    sealed : bool, optional
        publish option: ballots are stored sealed under ``sealing_pk``
    sealing_pk : KeyPair, optional
        the sealing public key, present iff sealed
    """
    pk: KeyPair
    st: int
    ct: int
    et: int
    sealed: bool = False
    sealing_pk: Optional[KeyPair] = None

    def __post_init__(self):
        if not self.st < self.ct < self.et:
            raise BadWindow('need st < ct < et, got st={} ct={} et={}'.format(
                self.st, self.ct, self.et))
        if self.sealed != (self.sealing_pk is not None):
            raise BadParams('a sealing key must be given exactly when sealed')
        _check_public_key('pk', self.pk, blindsig.MIN_MODULUS)
        if self.sealing_pk is not None:
            _check_public_key('sealing_pk', self.sealing_pk, 2 ** (sealing.MIN_SEALING_BITS - 1))
        # contracts only ever hold public keys
        object.__setattr__(self, 'pk', self.pk.public())
        if self.sealing_pk is not None:
            object.__setattr__(self, 'sealing_pk', self.sealing_pk.public())

    def in_sign_window(self, clock):
        return self.st <= clock < self.ct

    def in_vote_window(self, clock):
        return self.ct <= clock < self.et

    def to_payload(self, salt):
        sealing_pk = self.sealing_pk or KeyPair(0, 0)
        return Payload('deploy', n=self.pk.n, e=self.pk.e, st=self.st, ct=self.ct,
                       et=self.et, sealed=self.sealed, sealing_n=sealing_pk.n,
                       sealing_e=sealing_pk.e, salt=salt)

    @classmethod
    def from_payload(cls, payload):
        sealing_pk = None
        if payload['sealed']:
            sealing_pk = KeyPair(payload['sealing_n'], payload['sealing_e'])
        return cls(KeyPair(payload['n'], payload['e']), payload['st'], payload['ct'],
                   payload['et'], payload['sealed'], sealing_pk)


class BallotBox(object):
    """ uuid -> accepted ballot payload; entries are only ever added """

    def __init__(self):
        self._entries = {}

    def __contains__(self, uuid):
        return uuid in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __getitem__(self, uuid):
        return self._entries[uuid]

    def items(self):
        return list(self._entries.items())

    def payloads(self):
        return list(self._entries.values())

    def _add(self, uuid, ballot):
        assert uuid not in self._entries
        self._entries[uuid] = bytes(ballot)


@dataclass
class SealedResult:
    sealing_sk: Optional[KeyPair] = None
    published: bool = False


def contract_address(deployer, salt):
    """ last 20 bytes of Keccak-256(deployer + salt) """
    return keccak.new(digest_bits=256, data=bytes(deployer) + bytes(salt)).digest()[-20:]


class ElectionContract(object):
    """
    A deployed election

    Calls reach the contract through ``execute`` from inside the ledger's
    serialized execution; the named methods can also be driven directly
    with an explicit clock.

    Parameters
    ----------
    address : bytes
        20-byte contract address
    params : ElectionParams
    owner : bytes, optional
        address of the deploying organizer
    """

    def __init__(self, address, params, owner=bytes(20)):
        self.address = bytes(address)
        self.params = params
        # the deployer; sign requests are addressed to it
        self.owner = bytes(owner)
        self.ballot_box = BallotBox()
        self.sealed_result = SealedResult()
        self._handlers = {'check': self._call_check,
                          'cast': self._call_cast,
                          'publish': self._call_publish,
                          'tally': self._call_tally}

    def __repr__(self):
        return 'ElectionContract({}, {} ballots)'.format(self.address.hex(), len(self.ballot_box))

    @classmethod
    def from_payload(cls, address, payload, owner=bytes(20)):
        return cls(address, ElectionParams.from_payload(payload), owner)

    # ------------------------------------------------------------------
    # dispatch

    def execute(self, payload, clock):
        """
        Run one contract call

        Parameters
        ----------
        payload : Payload
        clock : int
            timestamp of the executing transaction

        Returns
        -------
        the call's result (bool, None or Counter)
        """
        try:
            handler = self._handlers[payload.kind]
        except KeyError:
            raise UnknownCall('contract has no {!r} call'.format(payload.kind))
        return handler(payload, clock)

    def _call_check(self, payload, clock):
        return self.check_signature(payload['signed_blinded'], payload['blinded'], clock)

    def _call_cast(self, payload, clock):
        return self.cast(payload['signed'], payload['ballot'], payload['uuid'], clock)

    def _call_publish(self, payload, clock):
        return self.publish_key(KeyPair(payload['n'], payload['e'], payload['d']), clock)

    def _call_tally(self, payload, clock):
        return self.tally(clock)

    # ------------------------------------------------------------------
    # the contract's operations

    def check_signature(self, signed_blinded, blinded, clock):
        """ true iff signed_blinded^e mod n equals blinded; no state change """
        if not self.params.in_sign_window(clock):
            raise OutOfWindow('check allowed in [{}, {}), clock is {}'.format(
                self.params.st, self.params.ct, clock))
        pk = self.params.pk
        if not 0 <= signed_blinded < pk.n:
            return False
        return pow(signed_blinded, pk.e, pk.n) == blinded

    def judge(self, signed, ballot, uuid):
        """ the judge condition: signature verifies and the uuid is unused """
        digest = blindsig.ballot_digest(ballot, uuid)
        return blindsig.verify(signed, digest, self.params.pk) and uuid not in self.ballot_box

    def cast(self, signed, ballot, uuid, clock):
        """
        Store (uuid -> ballot) if the judge accepts it

        Returns
        -------
        bool
            False for illegal ballots, which are ignored
        """
        if not self.params.in_vote_window(clock):
            raise OutOfWindow('cast allowed in [{}, {}), clock is {}'.format(
                self.params.ct, self.params.et, clock))
        if not self.judge(signed, ballot, uuid):
            logger.debug('judge rejected ballot with uuid %s', uuid)
            return False
        self.ballot_box._add(uuid, ballot)
        return True

    def publish_key(self, sealing_sk, clock):
        """ record the sealing private key so the sealed result can be counted """
        if not self.params.sealed:
            raise NotSealed('this election does not seal its ballots')
        if clock < self.params.et:
            raise ElectionOpen('the key may be published from et={}, clock is {}'.format(
                self.params.et, clock))
        if not sealing.key_matches(self.params.sealing_pk, sealing_sk):
            raise KeyMismatch('key does not match the sealing public key')
        self.sealed_result = SealedResult(sealing_sk=sealing_sk, published=True)

    def tally(self, clock):
        """
        Count the BallotBox

        Returns
        -------
        Counter
            ballot bytes -> count (decrypted in sealed mode)
        """
        if clock < self.params.et:
            raise ElectionOpen('tally available from et={}, clock is {}'.format(
                self.params.et, clock))
        if not self.params.sealed:
            return Counter(self.ballot_box.payloads())
        if not self.sealed_result.published:
            raise ResultSealed('the sealing key has not been published')
        return unseal_all(self.ballot_box.payloads(), self.sealed_result.sealing_sk)

    # ------------------------------------------------------------------
    # state

    def state_root(self):
        """ SHA-256 over params, BallotBox (insertion order) and the published key """
        h = SHA256.new()
        h.update(self.address + self.owner)
        h.update(','.join(self.params.to_payload(b'').to_wire()).encode())
        for uuid, ballot in self.ballot_box.items():
            h.update(uuid.bytes + len(ballot).to_bytes(4, 'big') + ballot)
        if self.sealed_result.published:
            h.update(','.join(blindsig.key_to_dict(self.sealed_result.sealing_sk).values()).encode())
        return h.hexdigest()


def unseal_all(payloads, sealing_sk):
    counts = Counter()
    for payload in payloads:
        try:
            counts[sealing.unseal(payload, sealing_sk)] += 1
        except SealingError:
            # a voter may seal garbage; its signature is still valid but nothing can be counted
            logger.warning('skipping a sealed ballot that does not decrypt')
    return counts


def encode_result(kind, value):
    """ the wire form of a call result, as recorded in the transcript """
    if kind == 'deploy':
        return [utils.bytes_to_hex(value)]
    if kind in ('check', 'cast'):
        return ['1' if value else '0']
    if kind == 'tally':
        return format_tally(value).splitlines()
    return []


def format_tally(counts):
    """
    Tally text: one 'ballot_hex count_hex' line per ballot, sorted by ballot hex

    Parameters
    ----------
    counts : Counter

    Returns
    -------
    str
    """
    lines = sorted('{} {}'.format(utils.bytes_to_hex(ballot), utils.int_to_hex(count))
                   for ballot, count in counts.items() if count > 0)
    return ''.join(line + '\n' for line in lines)


def parse_tally(text):
    counts = Counter()
    for line in text.splitlines():
        if not line.strip():
            continue
        ballot_hex, count_hex = line.rsplit(' ', 1)
        counts[utils.hex_to_bytes(ballot_hex)] = utils.hex_to_int(count_hex)
    return counts
