"""
A single-node simulated ledger: authenticated accounts, an append-only
transaction log on a logical clock, and serialized execution of contract
calls.

Every committed transaction is written to the transcript as one JSON line::

    {"index":..,"timestamp":..,"sender":..,"recipient":..,"kind":..,
     "fields":[..],"status":..,"result":[..],"state":..,"prev":..,"hash":..}

``state`` is the post-execution state root of the target contract and
``hash`` links each record to the one before it, so replay pinpoints the
first record that does not reproduce.
"""

# standard library imports
import json
import logging
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

# imports that may need installation
from Crypto.Hash import SHA256, keccak

# local package imports
from blindballot import utils
from blindballot.calls import Payload
from blindballot.contract import ElectionContract, contract_address, encode_result
from blindballot.errors import (AuthFailure, ClockViolation, ContractError,
                                DuplicateAccount, Redeploy, ReplayDivergence,
                                TranscriptParseError, UnknownContract)

logger = logging.getLogger(__name__)

ADDRESS_BYTES = 20
SECRET_BYTES = 32
ZERO_ADDRESS = bytes(ADDRESS_BYTES)
GENESIS_HASH = '0' * 64
RECORD_KEYS = ('index', 'timestamp', 'sender', 'recipient', 'kind', 'fields',
               'status', 'result', 'state', 'prev', 'hash')


def derive_address(auth_secret):
    """ last 20 bytes of Keccak-256(auth_secret) """
    return keccak.new(digest_bits=256, data=bytes(auth_secret)).digest()[-ADDRESS_BYTES:]


@dataclass(frozen=True)
class Account:
    """ a ledger account; possession of ``auth_secret`` proves sendership """
    address: bytes
    auth_secret: bytes = field(repr=False)

    @property
    def hex(self):
        return utils.bytes_to_hex(self.address)


def create_account(seed):
    """
    A fresh account derived from a seed

    Parameters
    ----------
    seed : int or sequence of labels
        the same seed always yields the same account

    Returns
    -------
    Account
    """
    labels = seed if isinstance(seed, (tuple, list)) else (seed,)
    secret = utils.child_rng(*labels, 'account').bytes(SECRET_BYTES)
    return Account(derive_address(secret), secret)


@dataclass(frozen=True)
class Transaction:
    """ one committed log entry """
    index: int
    timestamp: int
    sender: bytes
    recipient: bytes
    payload: Payload
    status: str = 'ok'
    result: Tuple[str, ...] = ()
    state: str = ''
    prev: str = GENESIS_HASH
    hash: str = ''

    @property
    def kind(self):
        return self.payload.kind

    def record(self, with_hash=True):
        rec = {'index': self.index,
               'timestamp': self.timestamp,
               'sender': utils.bytes_to_hex(self.sender),
               'recipient': utils.bytes_to_hex(self.recipient),
               'kind': self.kind,
               'fields': self.payload.to_wire(),
               'status': self.status,
               'result': list(self.result),
               'state': self.state,
               'prev': self.prev}
        if with_hash:
            rec['hash'] = self.hash
        return rec

    def compute_hash(self):
        body = json.dumps(self.record(with_hash=False), separators=(',', ':'))
        return SHA256.new((self.prev + body).encode('utf-8')).hexdigest()

    def to_line(self):
        return json.dumps(self.record(), separators=(',', ':'))

    @classmethod
    def from_line(cls, line, line_number=None):
        where = '' if line_number is None else ' (line {})'.format(line_number)
        try:
            rec = json.loads(line)
            if list(rec.keys()) != list(RECORD_KEYS):
                raise ValueError('record keys are {}'.format(list(rec.keys())))
            return cls(index=int(rec['index']),
                       timestamp=int(rec['timestamp']),
                       sender=utils.hex_to_bytes(rec['sender'], width=ADDRESS_BYTES),
                       recipient=utils.hex_to_bytes(rec['recipient'], width=ADDRESS_BYTES),
                       payload=Payload.from_wire(rec['kind'], rec['fields']),
                       status=str(rec['status']),
                       result=tuple(str(r) for r in rec['result']),
                       state=str(rec['state']),
                       prev=str(rec['prev']),
                       hash=str(rec['hash']))
        except Exception as e:
            raise TranscriptParseError('could not parse transaction{}: {}'.format(where, e))


@dataclass
class Receipt:
    """
    Outcome of a submission

    Attributes
    ----------
    index : int
        position of the transaction in the log
    value : any
        the call's result (contract address, bool, Counter or None)
    error : ContractError or None
        set when the call reverted
    tx : Transaction
    """
    index: int
    value: Any
    error: Optional[ContractError]
    tx: Transaction

    @property
    def ok(self):
        return self.error is None

    def unwrap(self):
        """ the result value, re-raising the revert error if there was one """
        if self.error is not None:
            raise self.error
        return self.value


def execute(contracts, recipient, payload, sender, clock, index):
    """
    Execute one payload against a contract registry

    Shared by live submission and replay so both follow one code path.

    Returns
    -------
    tuple
        (status, value, error, target contract or None)
    """
    call = payload.call
    if not call.is_contract:
        return 'ok', None, None, None
    try:
        if payload.kind == 'deploy':
            if recipient != ZERO_ADDRESS:
                raise UnknownContract('deploy must be sent to the zero address')
            salt = payload['salt'] or index.to_bytes(8, 'big')
            address = contract_address(sender, salt)
            if address in contracts:
                raise Redeploy('a contract already lives at {}'.format(address.hex()))
            contracts[address] = ElectionContract.from_payload(address, payload, sender)
            return 'ok', address, None, contracts[address]
        try:
            contract = contracts[recipient]
        except KeyError:
            raise UnknownContract('no contract at {}'.format(recipient.hex()))
        return 'ok', contract.execute(payload, clock), None, contract
    except ContractError as e:
        logger.info('tx %d (%s) reverted: %s', index, payload.kind, e)
        return 'revert:' + type(e).__name__, None, e, contracts.get(recipient)


class Ledger(object):
    """
    The simulated ledger

    Submission is the serialization point: concurrent submitters observe
    one total order and contract calls execute in log order. Reads return
    snapshots of committed state.

    Attributes
    ----------
    clock : int
        current logical time
    contracts : dict
        contract address -> ElectionContract
    accounts : dict
        address -> Account for accounts opened through this ledger
    """

    def __init__(self):
        self._log = []
        self.clock = 0
        self.contracts = {}
        self.accounts = {}
        self._lock = threading.Lock()
        self._subscribers = defaultdict(list)

    def __len__(self):
        return len(self._log)

    @property
    def log(self):
        """ the committed transactions (a snapshot) """
        return tuple(self._log)

    @property
    def head(self):
        return self._log[-1].hash if self._log else GENESIS_HASH

    def create_account(self, seed):
        """ open a fresh account on this ledger; addresses are unique """
        account = create_account(seed)
        with self._lock:
            if account.address in self.accounts:
                raise DuplicateAccount('address {} already exists'.format(account.hex))
            self.accounts[account.address] = account
        return account

    def contract(self, address):
        try:
            return self.contracts[address]
        except KeyError:
            raise UnknownContract('no contract at {}'.format(bytes(address).hex()))

    def advance_clock(self, to):
        """ move the logical clock forward to ``to`` """
        with self._lock:
            if to < self.clock:
                raise ClockViolation('clock is {}, cannot go back to {}'.format(self.clock, to))
            self.clock = to

    def subscribe(self, address, callback):
        """
        Deliver account messages addressed to ``address``

        Parameters
        ----------
        address : bytes
        callback : function
            called as callback(ledger, tx) after the message is committed,
            in the submitter's thread
        """
        self._subscribers[bytes(address)].append(callback)

    def submit(self, account, recipient, payload, timestamp=None):
        """
        Authenticate, append and (for contract calls) execute a transaction

        Parameters
        ----------
        account : Account
            sender address plus the secret that proves it
        recipient : bytes
            contract or account address (ZERO_ADDRESS for deploy)
        payload : Payload
        timestamp : int, optional
            defaults to the current clock; may not be earlier

        Returns
        -------
        Receipt

        Raises
        ------
        AuthFailure, ClockViolation
            the log is left unchanged
        """
        recipient = bytes(recipient)
        with self._lock:
            if timestamp is None:
                timestamp = self.clock
            if timestamp < self.clock:
                raise ClockViolation('timestamp {} is before the clock {}'.format(
                    timestamp, self.clock))
            if derive_address(account.auth_secret) != account.address:
                raise AuthFailure('secret does not match sender {}'.format(account.hex))

            index = len(self._log)
            status, value, error, target = execute(self.contracts, recipient, payload,
                                                   account.address, timestamp, index)
            tx = Transaction(index=index, timestamp=timestamp, sender=account.address,
                             recipient=recipient, payload=payload, status=status,
                             result=tuple(encode_result(payload.kind, value) if error is None else ()),
                             state=target.state_root() if target is not None else '',
                             prev=self.head)
            tx = _with_hash(tx)
            self._log.append(tx)
            self.clock = timestamp
            logger.debug('appended tx %d %s from %s', index, payload.kind, account.hex)

        if not payload.call.is_contract:
            for callback in list(self._subscribers.get(recipient, ())):
                callback(self, tx)
        return Receipt(index, value, error, tx)

    def find(self, kind=None, sender=None, recipient=None, start=0):
        """ committed transactions matching every given filter, in log order """
        return [tx for tx in self.log[start:]
                if (kind is None or tx.kind == kind)
                and (sender is None or tx.sender == bytes(sender))
                and (recipient is None or tx.recipient == bytes(recipient))]

    def state_roots(self):
        return {address: c.state_root() for address, c in self.contracts.items()}

    def export(self, filename=None):
        """
        The transcript: one JSON record per line

        Parameters
        ----------
        filename : str, optional
            if given the transcript is also written there

        Returns
        -------
        str
        """
        text = ''.join(tx.to_line() + '\n' for tx in self.log)
        if filename is not None:
            with open(filename, 'w') as f:
                f.write(text)
        return text


def _with_hash(tx):
    return Transaction(**{**tx.__dict__, 'hash': tx.compute_hash()})


def parse_log(text):
    """ transcript text -> list of Transaction """
    return [Transaction.from_line(line, number)
            for number, line in enumerate(text.splitlines(), start=1) if line.strip()]


def load_log(filename):
    with open(filename, 'r') as f:
        return parse_log(f.read())


def replay(log, strict=True):
    """
    Re-execute a log from genesis

    Parameters
    ----------
    log : list of Transaction
    strict : bool, optional
        if True every record must reproduce exactly (index, ordering,
        status, result, state root, hash links); if False the payloads are
        simply re-executed, which is how a damaged transcript is recounted.

    Returns
    -------
    Ledger
        a ledger holding the recomputed contracts and log

    Raises
    ------
    ReplayDivergence
        at the first record that does not reproduce (strict mode)
    """
    ledger = Ledger()
    for position, tx in enumerate(log):
        if strict:
            if tx.index != position:
                raise ReplayDivergence(position, 'expected index {}, found {}'.format(
                    position, tx.index))
            if tx.timestamp < ledger.clock:
                raise ReplayDivergence(position, 'timestamp {} runs backwards'.format(tx.timestamp))
        clock = max(tx.timestamp, ledger.clock)
        status, value, error, target = execute(ledger.contracts, tx.recipient, tx.payload,
                                               tx.sender, clock, position)
        redo = _with_hash(Transaction(
            index=position, timestamp=clock, sender=tx.sender, recipient=tx.recipient,
            payload=tx.payload, status=status,
            result=tuple(encode_result(tx.kind, value) if error is None else ()),
            state=target.state_root() if target is not None else '',
            prev=ledger.head))
        if strict:
            for what in ('status', 'result', 'state', 'prev', 'hash'):
                if getattr(redo, what) != getattr(tx, what):
                    reason = '{} {} recorded {!r}, recomputed {!r}'.format(
                        tx.kind, what, getattr(tx, what), getattr(redo, what))
                    logger.warning('replay divergence at %d: %s', position, reason)
                    raise ReplayDivergence(position, reason)
        ledger._log.append(redo)
        ledger.clock = clock
    return ledger
