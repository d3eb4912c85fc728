"""
Adversarial scenarios. Each attack runs a full election with an adversary
acting between the stages and reports whether it got what it wanted.

Only receipt-prove is expected to succeed.
"""

# standard library imports
import logging
import uuid as _uuid
from collections import OrderedDict

# imports that may need installation
from scipy.stats import binom

# local package imports
from blindballot import blindsig, utils
from blindballot.actors import Organizer, prove_receipt, verify_receipt
from blindballot.calls import Payload
from blindballot.config import defaults
from blindballot.errors import UnknownAttack
from blindballot.scenario import (AttackOutcome, Election, ScenarioConfig,
                                  check_fairness, load_config)

logger = logging.getLogger(__name__)


def _random_below(modulus, randfunc):
    """ uniform integer in [0, modulus) """
    k = (modulus.bit_length() + 7) // 8
    excess = 8 * k - modulus.bit_length()
    while True:
        value = int.from_bytes(randfunc(k), 'big') >> excess
        if value < modulus:
            return value


def _first_completed(election, kinds=('honest',)):
    for spec, state in election.accepted_states():
        if spec.kind in kinds:
            return spec, state
    return None, None


def double_vote(election):
    """ cast an already accepted signed ballot a second time """
    election.setup()
    election.sign_stage()
    election.vote_stage()
    spec, state = _first_completed(election)
    accepted = None
    if state is not None:
        account = election.adversary('double-vote')
        accepted = election.ledger.submit(
            account, election.contract.address,
            Payload('cast', signed=state.signed, ballot=state.ballot, uuid=state.uuid)).unwrap()
    election.count_stage()
    detail = 'no honest voter to copy' if state is None else \
        'second cast of {}\'s ballot {}'.format(spec.name, 'accepted' if accepted else 'rejected')
    return bool(accepted), detail


def ineligible(election):
    """ an unlisted account asks for a signature and casts what it gets """
    election.setup()
    election.ledger.advance_clock(election.st)
    account = election.adversary('ineligible')
    params = election.contract.params
    uuid = _uuid.UUID(bytes=bytes(16))
    blinded = blindsig.blind(blindsig.ballot_digest(b'mallory', uuid), 1, params.pk)
    election.ledger.submit(account, election.contract.owner,
                           Payload('request', blinded=blinded))
    replies = election.ledger.find(kind='sign', recipient=account.address)
    signed_blinded = replies[0].payload['signed_blinded'] if replies else blindsig.REFUSAL
    election.sign_stage()
    election.vote_stage()
    accepted = election.ledger.submit(
        account, election.contract.address,
        Payload('cast', signed=signed_blinded, ballot=b'mallory', uuid=uuid)).unwrap()
    election.count_stage()
    got = signed_blinded != blindsig.REFUSAL
    return got or bool(accepted), 'unlisted request answered with {}; cast {}'.format(
        'a signature' if got else 'a refusal', 'accepted' if accepted else 'rejected')


def forge_signature(election):
    """ random signatures on a chosen ballot, judged by the contract """
    election.setup()
    election.sign_stage()
    election.vote_stage()
    pk = election.contract.params.pk
    rng = utils.child_rng(election.seed, 'forge')
    attempts = defaults.forgery_attempts
    accepted = 0
    for _ in range(attempts):
        uuid = blindsig.new_uuid(rng.bytes)
        if election.contract.judge(_random_below(pk.n, rng.bytes), b'forged', uuid):
            accepted += 1
    # one of them goes through the ledger so the attempt is on record
    account = election.adversary('forge')
    election.ledger.submit(account, election.contract.address,
                           Payload('cast', signed=_random_below(pk.n, rng.bytes), ballot=b'forged',
                                   uuid=blindsig.new_uuid(rng.bytes)))
    election.count_stage()

    # a blind guess verifies with probability 1/n; only beating that counts
    expected = attempts / pk.n
    threshold = int(binom.ppf(defaults.guess_quantile, attempts, 1.0 / pk.n))
    detail = '{}/{} forgeries accepted, {:.3g} expected from 1/n guessing, up to {} allowed'.format(
        accepted, attempts, expected, threshold)
    if pk.n < defaults.enumeration_limit:
        digest = blindsig.ballot_digest(b'forged', bytes(16))
        valid = sum(blindsig.verify(s, digest, pk) for s in range(pk.n))
        detail += '; {} valid signature(s) per digest'.format(valid)
    return accepted > threshold, detail


def replay_cast(election):
    """ resubmit someone else's accepted cast transaction from the log """
    election.setup()
    election.sign_stage()
    election.vote_stage()
    casts = [tx for tx in election.ledger.find(kind='cast', recipient=election.contract.address)
             if tx.result == ('1',)]
    accepted = None
    if casts:
        accepted = election.ledger.submit(election.adversary('replay'), election.contract.address,
                                          casts[0].payload).unwrap()
    election.count_stage()
    if not casts:
        return False, 'no accepted cast to replay'
    return bool(accepted), 'replay of tx {} {}'.format(casts[0].index, 'accepted' if accepted else 'rejected')


def receipt_prove(election):
    """ every honest voter proves its vote to a third party """
    election.run_stages()
    honest = [s for spec, s in election.accepted_states() if spec.kind == 'honest']
    proved = sum(verify_receipt(prove_receipt(s), election.ledger, election.contract) for s in honest)
    return bool(honest) and proved == len(honest), '{}/{} receipts verified'.format(proved, len(honest))


def early_tally(election):
    """ ask for the result at the start of voting and just before et """
    election.setup()
    election.sign_stage()
    election.ledger.advance_clock(election.ct)
    account = election.adversary('early-tally')
    early = election.ledger.submit(account, election.contract.address, Payload('tally'))
    election.vote_stage()
    election.count_stage()
    answered = [r.index for r in (early, election.early_tally) if r.ok]
    return bool(answered), 'early tallies answered: {}'.format(answered or 'none')


def sealed_peek(election):
    """ read sealed ballots before the key is out """
    election.setup()
    election.sign_stage()
    election.vote_stage()
    election.ledger.advance_clock(election.et)
    account = election.adversary('sealed-peek')
    peek = election.ledger.submit(account, election.contract.address, Payload('tally'))
    # a key of the adversary's own making is refused
    fake = blindsig.keygen(election.config.sealing_bits, seed=election.seed + 1)
    wrong = election.ledger.submit(account, election.contract.address,
                                   Payload('publish', n=fake.n, e=fake.e, d=fake.d))
    election.count_stage()
    verdict, fairness = check_fairness(election)
    succeeded = peek.ok or wrong.ok or verdict != 'pass'
    return succeeded, 'tally before publish {}; foreign key {}; {}'.format(
        'answered' if peek.ok else 'refused', 'accepted' if wrong.ok else 'refused', fairness)


class GarbageOrganizer(Organizer):
    """ answers the first listed voter with a value that is not a signature """

    def sign(self, request_sender, blinded, clock):
        answer = super().sign(request_sender, blinded, clock)
        if answer != blindsig.REFUSAL and self.issued == 1:
            return (answer + 1) % self.key.n or 2
        return answer


def organizer_garbage(election):
    """ the organizer hands out a bad signature """
    election.run_stages()
    detected = sum(e.startswith('CheckFailed') for o in election.outcomes.values() for e in o.errors)
    accepted_bad = [s for _, states in election.states.items() for s in states
                    if not blindsig.verify(s.signed, s.digest, election.contract.params.pk)]
    return bool(accepted_bad) or not detected, '{} bad answers detected by the signature check'.format(detected)


# name -> (attack, property it exercises, expected to succeed, config changes, expected verdicts)
ATTACKS = OrderedDict([
    ('double-vote', (double_vote, 'Democracy/PMV', False, {}, {})),
    ('ineligible', (ineligible, 'Democracy/Eligibility', False, {}, {})),
    ('forge-signature', (forge_signature, 'Democracy/Eligibility', False, {}, {})),
    ('replay-cast', (replay_cast, 'Democracy/PMV', False, {}, {})),
    ('receipt-prove', (receipt_prove, 'Receipt-Freeness', True, {}, {})),
    ('early-tally', (early_tally, 'Fairness', False, {}, {})),
    ('sealed-peek', (sealed_peek, 'Fairness', False, {'sealed': True}, {})),
    ('organizer-garbage', (organizer_garbage, 'Robustness', False, {},
                           {'Robustness': 'fail'})),
])


def run_attack(name, config):
    """
    Run one named attack

    Parameters
    ----------
    name : str
        one of ATTACKS
    config : ScenarioConfig, dict or str

    Returns
    -------
    RunReport
        with ``attack`` filled in

    Raises
    ------
    UnknownAttack
    """
    try:
        attack, prop, expected_success, changes, expected = ATTACKS[name]
    except KeyError:
        raise UnknownAttack('no attack named {!r}; choose from {}'.format(name, list(ATTACKS)))
    if isinstance(config, str):
        config = load_config(config)
    elif isinstance(config, dict):
        config = ScenarioConfig.from_dict(config)
    if changes:
        config = ScenarioConfig(**{**config.__dict__, **changes})

    organizer_cls = GarbageOrganizer if name == 'organizer-garbage' else Organizer
    election = Election(config, organizer_cls=organizer_cls)
    succeeded, detail = attack(election)
    outcome = AttackOutcome(name, prop, bool(succeeded), expected_success, detail)
    logger.info('attack %s %s: %s', name, 'succeeded' if succeeded else 'failed', detail)
    return election.finish(attack=outcome, expected=expected)
