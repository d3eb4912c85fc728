"""
Scenario runner: drives an election through setup, sign, vote and count
stages on a fresh ledger and checks the security properties afterwards.

A scenario is a YAML document::

    name: ten-voters
    seed: 7
    key_bits: 512          # or 'toy' for the n = 3233 key
    sealed: false
    windows: {st: 10, ct: 20, et: 30}
    voters:
      - {name: alice, ballot: A}
      - {name: bob, ballots: [A, B], chances: 2}
      - {name: mallory, ballot: B, kind: ineligible}

Each run writes transcript.jsonl and report.yaml into its output directory.
"""

# standard library imports
import logging
import os
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool as Pool
from typing import List, Optional, Tuple

# imports that may need installation
import oyaml as yaml

# local package imports
from blindballot import blindsig, utils
from blindballot.actors import (Organizer, prove_receipt, verify_receipt, voter_cast,
                                voter_check_inclusion, voter_next_chance,
                                voter_obtain_signature, voter_prepare)
from blindballot.audit import offchain_tally
from blindballot.calls import Payload
from blindballot.config import defaults, runs_path, seed_override
from blindballot.errors import (CheckFailed, ConfigInvalid, ElectionOpen,
                                ReplayDivergence, SignRefused)
from blindballot.ledger import replay, Ledger
from blindballot.sealing import MIN_SEALING_BITS

logger = logging.getLogger(__name__)

VOTER_KINDS = ('honest', 'abstain', 'ineligible', 'double-voter', 'linkable')
CONFIG_KEYS = ('name', 'seed', 'key_bits', 'sealing_bits', 'sealed', 'concurrent',
               'out_dir', 'windows', 'voters')
PROPERTIES = ('Privacy', 'Receipt-Freeness', 'Robustness', 'Verifiability',
              'Democracy/Eligibility', 'Democracy/PMV', 'Fairness', 'Correctness')
# receipt-freeness is known not to hold: anyone keeping r can prove a vote
EXPECTED = OrderedDict((prop, 'pass') for prop in PROPERTIES)
EXPECTED['Receipt-Freeness'] = 'fail'

# shorter plaintexts turn up in random ciphertext hex by chance
LEAK_SCAN_MIN_BYTES = 8


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class VoterSpec:
    """ one voter of a scenario; ballots are cast one per chance """
    name: str
    ballots: Tuple[bytes, ...]
    chances: int = 1
    kind: str = 'honest'

    @property
    def listed(self):
        return self.kind != 'ineligible'

    @property
    def counted(self):
        """ the ballots this voter should add to the tally """
        if self.kind in ('abstain', 'ineligible'):
            return ()
        return self.ballots


@dataclass
class ScenarioConfig:
    windows: Tuple[int, int, int]
    voters: List[VoterSpec]
    sealed: bool = False
    key_bits: object = defaults.key_bits
    sealing_bits: int = defaults.sealing_bits
    seed: int = defaults.seed
    concurrent: bool = False
    out_dir: Optional[str] = None
    name: str = 'scenario'

    @classmethod
    def from_dict(cls, configs):
        """
        Validate a config mapping

        Raises
        ------
        ConfigInvalid
            listing every offending field
        """
        if not isinstance(configs, dict):
            raise ConfigInvalid(['config must be a mapping, got {}'.format(type(configs).__name__)])
        problems = ['unknown field {!r}'.format(k) for k in configs if k not in CONFIG_KEYS]

        windows = configs.get('windows')
        if not isinstance(windows, dict) or not all(_is_int(windows.get(k)) for k in ('st', 'ct', 'et')):
            problems.append('windows: need integer st, ct and et')
            windows = None
        else:
            windows = (windows['st'], windows['ct'], windows['et'])
            if windows[0] < 0:
                problems.append('windows: st must not be negative, got {}'.format(windows[0]))
            if not windows[0] < windows[1] < windows[2]:
                problems.append('windows: need st < ct < et, got {}'.format(windows))

        voters = []
        raw_voters = configs.get('voters')
        if not isinstance(raw_voters, list) or not raw_voters:
            problems.append('voters: need at least one voter')
            raw_voters = []
        for i, entry in enumerate(raw_voters):
            voter = _voter_from_dict(i, entry, problems)
            if voter is not None:
                voters.append(voter)
        names = Counter(v.name for v in voters)
        problems += ['voters: name {!r} used {} times'.format(n, c) for n, c in names.items() if c > 1]

        key_bits = configs.get('key_bits', defaults.key_bits)
        if key_bits != 'toy' and not (_is_int(key_bits) and key_bits >= blindsig.MIN_BITS):
            problems.append("key_bits: need 'toy' or an integer >= {}, got {!r}".format(
                blindsig.MIN_BITS, key_bits))
        sealing_bits = configs.get('sealing_bits', defaults.sealing_bits)
        if not (_is_int(sealing_bits) and sealing_bits >= MIN_SEALING_BITS):
            problems.append('sealing_bits: need an integer >= {}, got {!r}'.format(
                MIN_SEALING_BITS, sealing_bits))
        for flag in ('sealed', 'concurrent'):
            if not isinstance(configs.get(flag, False), bool):
                problems.append('{}: need true or false'.format(flag))
        seed = configs.get('seed', defaults.seed)
        if not (_is_int(seed) and seed >= 0):
            problems.append('seed: need a non-negative integer, got {!r}'.format(seed))
        for text in ('out_dir', 'name'):
            if configs.get(text) is not None and not isinstance(configs[text], str):
                problems.append('{}: need a string'.format(text))

        if problems:
            raise ConfigInvalid(problems)
        return cls(windows=windows, voters=voters,
                   sealed=configs.get('sealed', False),
                   key_bits=key_bits, sealing_bits=sealing_bits,
                   seed=seed_override(seed),
                   concurrent=configs.get('concurrent', False),
                   out_dir=configs.get('out_dir'),
                   name=configs.get('name') or 'scenario')

    @classmethod
    def from_yaml(cls, filename):
        with open(filename, 'r') as f:
            return cls.from_dict(yaml.safe_load(f))

    def expected_tally(self):
        """ the ballot multiset an honest count must produce """
        return Counter(b for v in self.voters for b in v.counted)

    def voter(self, name):
        return next(v for v in self.voters if v.name == name)


def _voter_from_dict(i, entry, problems):
    where = 'voters[{}]'.format(i)
    if not isinstance(entry, dict):
        problems.append('{}: need a mapping'.format(where))
        return None
    unknown = [k for k in entry if k not in ('name', 'ballot', 'ballots', 'chances', 'kind')]
    if unknown:
        problems.append('{}: unknown fields {}'.format(where, unknown))
    name = entry.get('name')
    if not isinstance(name, str) or not name:
        problems.append('{}: need a name'.format(where))
        return None
    where = 'voters[{}] ({})'.format(i, name)

    if ('ballot' in entry) == ('ballots' in entry):
        problems.append('{}: give exactly one of ballot and ballots'.format(where))
        return None
    ballots = [entry['ballot']] if 'ballot' in entry else entry['ballots']
    if not isinstance(ballots, list) or not ballots or not all(isinstance(b, str) for b in ballots):
        problems.append('{}: ballots must be strings'.format(where))
        return None

    chances = entry.get('chances', defaults.chances)
    if not (_is_int(chances) and chances >= 1):
        problems.append('{}: chances must be an integer >= 1, got {!r}'.format(where, chances))
        return None
    if len(ballots) > chances:
        problems.append('{}: {} ballots but only {} chances'.format(where, len(ballots), chances))
    kind = entry.get('kind', 'honest')
    if kind not in VOTER_KINDS:
        problems.append('{}: kind must be one of {}, got {!r}'.format(where, VOTER_KINDS, kind))
    return VoterSpec(name, tuple(b.encode('utf-8') for b in ballots), chances, kind)


def load_config(filename):
    return ScenarioConfig.from_yaml(filename)


@dataclass
class VoterOutcome:
    name: str
    kind: str
    signed: int = 0
    casts: List[bool] = field(default_factory=list)
    repeats: List[bool] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    def to_dict(self):
        return OrderedDict([('kind', self.kind), ('signed', self.signed),
                            ('casts', list(self.casts)), ('repeats', list(self.repeats)),
                            ('errors', list(self.errors))])


@dataclass
class Assertion:
    """ one row of the property table """
    property: str
    verdict: str
    expected: str
    detail: str = ''

    @property
    def holds(self):
        return self.verdict in (self.expected, 'n/a')


@dataclass
class AttackOutcome:
    name: str
    property: str
    succeeded: bool
    expected_success: bool
    detail: str = ''

    @property
    def as_expected(self):
        return self.succeeded == self.expected_success


def ballot_label(ballot):
    """ readable form of a ballot: its text when it is UTF-8, else hex """
    try:
        return ballot.decode('utf-8')
    except UnicodeDecodeError:
        return utils.bytes_to_hex(ballot)


@dataclass
class RunReport:
    """
    Everything a run produced

    Attributes
    ----------
    tally : Counter
        ballot bytes -> count, as counted by the contract
    transcript_path, report_path : str
    assertions : list of Assertion
        one per property in PROPERTIES order
    voters : dict
        voter name -> VoterOutcome
    attack : AttackOutcome, optional
    """
    name: str
    seed: int
    tally: Counter
    transcript_path: str
    report_path: str
    assertions: List[Assertion]
    voters: dict
    head: str
    records: int
    modulus_bits: int
    sealed: bool
    attack: Optional[AttackOutcome] = None

    @property
    def ok(self):
        """ True iff every verdict (and the attack outcome) matches its expectation """
        if self.attack is not None and not self.attack.as_expected:
            return False
        return all(a.holds for a in self.assertions)

    def assertion(self, prop):
        return next(a for a in self.assertions if a.property == prop)

    def to_dict(self):
        configs = OrderedDict()
        configs['name'] = self.name
        configs['seed'] = self.seed
        configs['modulus_bits'] = self.modulus_bits
        configs['sealed'] = self.sealed
        configs['transcript'] = OrderedDict([('path', os.path.basename(self.transcript_path)),
                                             ('records', self.records), ('head', self.head)])
        configs['tally'] = [OrderedDict([('ballot', ballot_label(b)),
                                         ('hex', utils.bytes_to_hex(b)), ('count', c)])
                            for b, c in sorted(self.tally.items())]
        configs['assertions'] = [OrderedDict([('property', a.property), ('verdict', a.verdict),
                                              ('expected', a.expected), ('detail', a.detail)])
                                 for a in self.assertions]
        configs['voters'] = OrderedDict((name, o.to_dict()) for name, o in self.voters.items())
        if self.attack is not None:
            configs['attack'] = OrderedDict([('name', self.attack.name),
                                             ('property', self.attack.property),
                                             ('succeeded', self.attack.succeeded),
                                             ('expected_success', self.attack.expected_success),
                                             ('detail', self.attack.detail)])
        configs['ok'] = self.ok
        return configs

    def save(self, filename=None):
        filename = filename or self.report_path
        with open(filename, 'w') as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False)


def make_key(key_bits, seed):
    if key_bits == 'toy':
        return blindsig.toy_keypair()
    return blindsig.keygen(key_bits, seed=seed)


def _sub_seed(seed, label):
    return int(utils.child_rng(seed, label).integers(2 ** 62))


class Election(object):
    """
    One run of the protocol on a fresh ledger

    The stages can be driven one at a time (attacks interleave their own
    transactions between them) or all at once with ``run``.

    Parameters
    ----------
    config : ScenarioConfig
    organizer_cls : class, optional
        Organizer or a subclass of it
    """

    def __init__(self, config, organizer_cls=Organizer):
        self.config = config
        self.seed = config.seed
        self.st, self.ct, self.et = config.windows
        self.organizer_cls = organizer_cls
        self.ledger = Ledger()
        self.key = make_key(config.key_bits, self.seed)
        self.sealing_key = None
        if config.sealed:
            self.sealing_key = blindsig.keygen(config.sealing_bits, seed=_sub_seed(self.seed, 'sealing'))
        self.organizer_account = self.ledger.create_account((self.seed, 'organizer'))
        self.accounts = OrderedDict((v.name, self.ledger.create_account((self.seed, 'voter', v.name)))
                                    for v in config.voters)
        self.outcomes = OrderedDict((v.name, VoterOutcome(v.name, v.kind)) for v in config.voters)
        # states that obtained a signature, in chance order
        self.states = OrderedDict((v.name, []) for v in config.voters)
        self.organizer = None
        self.contract = None
        self.early_tally = None
        self.tally = None
        self.offchain = None

    @property
    def out_dir(self):
        return self.config.out_dir or os.path.join(runs_path, self.config.name)

    def adversary(self, label):
        """ a fresh account that is on no list """
        return self.ledger.create_account((self.seed, 'adversary', label))

    def _each_voter(self, func):
        voters = self.config.voters
        if self.config.concurrent and len(voters) > 1:
            with Pool(len(voters)) as pool:
                pool.map(func, voters)
        else:
            for voter in voters:
                func(voter)

    # ------------------------------------------------------------------
    # stages

    def setup(self):
        listed = [(self.accounts[v.name].address, v.chances) for v in self.config.voters if v.listed]
        self.organizer = self.organizer_cls.setup(self.ledger, self.organizer_account, listed,
                                                  self.key, self.config.windows,
                                                  sealed=self.config.sealed,
                                                  sealing_key=self.sealing_key)
        self.contract = self.organizer.contract

    def sign_stage(self):
        self.ledger.advance_clock(self.st)
        self._each_voter(self._sign_voter)

    def _sign_voter(self, spec):
        outcome = self.outcomes[spec.name]
        params = self.contract.params
        state = None
        for chance, ballot in enumerate(spec.ballots):
            seed = (self.seed, 'voter', spec.name, chance)
            if state is None:
                state = voter_prepare(ballot, seed, params.pk, self.accounts[spec.name], params.sealing_pk)
            else:
                state = voter_next_chance(state, ballot, seed, params.pk, params.sealing_pk)
            try:
                voter_obtain_signature(state, self.ledger, self.contract)
            except (SignRefused, CheckFailed) as e:
                logger.info('voter %s: %s', spec.name, e)
                outcome.errors.append('{}: {}'.format(type(e).__name__, e))
                continue
            outcome.signed += 1
            self.states[spec.name].append(state)

    def vote_stage(self):
        self.ledger.advance_clock(self.ct)
        self._each_voter(self._cast_voter)
        # a tally one tick before et must be refused
        self.ledger.advance_clock(self.et - 1)
        self.early_tally = self.ledger.submit(self.organizer_account, self.contract.address,
                                              Payload('tally'))

    def _cast_voter(self, spec):
        if spec.kind == 'abstain':
            return
        outcome = self.outcomes[spec.name]
        for i, state in enumerate(self.states[spec.name]):
            seed = (self.seed, 'cast', spec.name, i)
            outcome.casts.append(voter_cast(state, self.ledger, self.contract, seed,
                                            via_eligible=spec.kind == 'linkable'))
            if spec.kind == 'double-voter':
                outcome.repeats.append(voter_cast(state, self.ledger, self.contract, seed))

    def count_stage(self):
        self.ledger.advance_clock(self.et)
        if self.config.sealed:
            self.organizer.publish_key()
        receipt = self.ledger.submit(self.organizer_account, self.contract.address, Payload('tally'))
        self.tally = receipt.unwrap()
        self.offchain = offchain_tally(self.ledger.log, self.contract.address)

    def run_stages(self):
        self.setup()
        self.sign_stage()
        self.vote_stage()
        self.count_stage()

    def run(self):
        self.run_stages()
        return self.finish()

    # ------------------------------------------------------------------
    # reporting

    def accepted_states(self):
        """ (voter spec, state) for every state whose ballot is in the BallotBox """
        return [(self.config.voter(name), s) for name, states in self.states.items()
                for s in states if voter_check_inclusion(s, self.contract)]

    def finish(self, attack=None, expected=None):
        """
        Check every property, write transcript and report

        Parameters
        ----------
        attack : AttackOutcome, optional
        expected : dict, optional
            property -> expected verdict, overriding EXPECTED

        Returns
        -------
        RunReport
        """
        overrides = expected or {}
        expected = OrderedDict(EXPECTED)
        expected.update(overrides)
        assertions = []
        for prop, check in PROPERTY_CHECKS.items():
            verdict, detail = check(self)
            assertions.append(Assertion(prop, verdict, expected[prop], detail))

        os.makedirs(self.out_dir, exist_ok=True)
        transcript_path = os.path.join(self.out_dir, 'transcript.jsonl')
        self.ledger.export(transcript_path)
        report = RunReport(name=self.config.name, seed=self.seed, tally=Counter(self.tally or {}),
                           transcript_path=transcript_path,
                           report_path=os.path.join(self.out_dir, 'report.yaml'),
                           assertions=assertions, voters=self.outcomes,
                           head=self.ledger.head, records=len(self.ledger),
                           modulus_bits=self.key.bits, sealed=self.config.sealed, attack=attack)
        report.save()
        for a in assertions:
            if not a.holds:
                logger.warning('%s: %s (expected %s) %s', a.property, a.verdict, a.expected, a.detail)
        return report


def run_scenario(config):
    """
    Run all four stages of an election

    Parameters
    ----------
    config : ScenarioConfig, dict or str
        a config, a config mapping or the name of a YAML file

    Returns
    -------
    RunReport
    """
    if isinstance(config, str):
        config = load_config(config)
    elif isinstance(config, dict):
        config = ScenarioConfig.from_dict(config)
    logger.info('running scenario %s with seed %d', config.name, config.seed)
    return Election(config).run()


# ---------------------------------------------------------------------
# property checks: each returns (verdict, detail)

def _verdict(holds):
    return 'pass' if holds else 'fail'


def _signatures(election):
    """ non-refused organizer answers, in log order """
    return [tx for tx in election.ledger.find(kind='sign', sender=election.organizer_account.address)
            if tx.payload['signed_blinded'] != blindsig.REFUSAL]


def _linked_casts(election):
    """ accepted casts whose sender is an eligible address or shows up elsewhere """
    log = election.ledger.log
    eligible = {a.address for a in election.accounts.values()}
    seen = Counter()
    for tx in log:
        seen[tx.sender] += 1
        seen[tx.recipient] += 1
    return [tx.index for tx in log if tx.kind == 'cast' and tx.result == ('1',)
            and (tx.sender in eligible or seen[tx.sender] > 1)]


def check_privacy(election):
    key = election.key
    n = key.n
    digests = [s.digest for _, states in election.states.items() for s in states][:8]
    observed = [tx.payload['blinded'] for tx in _signatures(election)]
    pairs = [(b, d) for b in observed if blindsig.is_unit(b, n)
             for d in digests if blindsig.is_unit(blindsig.fdh(d, n), n)]
    if n < defaults.enumeration_limit:
        mode = 'enumeration'
        explained = all(blindsig.count_blinding_factors(b, d, key) == 1 for b, d in pairs)
    else:
        mode = 'monte-carlo'
        explained = all(blindsig.blind(d, blindsig.explaining_factor(b, d, key), key) == b
                        for b, d in pairs)
        toy = blindsig.toy_keypair()
        explained = explained and all(blindsig.blinding_is_perfect(d, toy) for d in digests
                                      if blindsig.is_unit(blindsig.fdh(d, toy.n), toy.n))
    linked = _linked_casts(election)
    detail = '{}: {} (request, digest) pairs each explained by one blinding factor'.format(
        mode, len(pairs))
    if linked:
        detail += '; casts linkable to a voter at {}'.format(linked)
    return _verdict(explained and not linked), detail


def check_receipt_freeness(election):
    honest = [s for spec, s in election.accepted_states() if spec.kind == 'honest']
    if not honest:
        return 'n/a', 'no honest voter completed'
    proved = sum(verify_receipt(prove_receipt(s), election.ledger, election.contract) for s in honest)
    return _verdict(proved == 0), '{}/{} honest voters can prove their vote'.format(proved, len(honest))


def check_robustness(election):
    permissions = election.organizer.permissions
    unjustified = [tx.index for tx in election.ledger.find(kind='sign', sender=election.organizer_account.address)
                   if tx.payload['signed_blinded'] == blindsig.REFUSAL and permissions.chance(tx.recipient) > 0]
    stuck = []
    detected = 0
    for spec in election.config.voters:
        outcome = election.outcomes[spec.name]
        detected += sum(e.startswith('CheckFailed') for e in outcome.errors)
        if not spec.listed:
            continue
        if outcome.signed < len(spec.ballots) or not all(outcome.casts):
            stuck.append(spec.name)
    detail = '{} voters could not complete, {} unjustified refusals, {} bad signatures detected'.format(
        len(stuck), len(unjustified), detected)
    if stuck:
        detail += ': {}'.format(', '.join(stuck))
    return _verdict(not stuck and not unjustified), detail


def check_verifiability(election):
    try:
        replayed = replay(election.ledger.log, strict=True)
    except ReplayDivergence as e:
        return 'fail', str(e)
    if replayed.state_roots() != election.ledger.state_roots():
        return 'fail', 'replayed state roots differ'
    missing = []
    for name, states in election.states.items():
        cast = [s for s in states if s.cast_tx_index is not None]
        if election.config.voter(name).kind != 'abstain' and not all(
                voter_check_inclusion(s, election.contract) for s in cast):
            missing.append(name)
    agree = Counter(election.tally or {}) == election.offchain
    detail = 'replay reproduced {} records; {} voters missing from the BallotBox; on-chain and ' \
             'off-chain tallies {}'.format(len(election.ledger), len(missing), 'agree' if agree else 'differ')
    return _verdict(not missing and agree), detail


def check_eligibility(election):
    issued = Counter((tx.recipient, tx.payload['blinded']) for tx in _signatures(election))
    by_uuid = {s.uuid: (spec, s) for spec, s in election.accepted_states()}
    box = election.contract.ballot_box
    untraced = [u.hex for u in box if u not in by_uuid
                or issued[(by_uuid[u][1].eligible_account.address, by_uuid[u][1].blinded)] != 1
                or not by_uuid[u][0].listed]
    initial = election.organizer.permissions.initial_total
    ineligible_signed = [o.name for o in election.outcomes.values()
                         if o.kind == 'ineligible' and o.signed]
    holds = not untraced and len(box) <= initial and not ineligible_signed
    detail = '{} ballots for {} initial chances; {} untraced ballots; {} unlisted voters signed'.format(
        len(box), initial, len(untraced), len(ineligible_signed))
    return _verdict(holds), detail


def check_pmv(election):
    permissions = election.organizer.permissions
    spent = permissions.initial_total - permissions.total()
    issued = len(_signatures(election))
    repeats = [name for name, o in election.outcomes.items() if any(o.repeats)]
    box = len(election.contract.ballot_box)
    holds = spent == issued == election.organizer.issued and box <= issued and not repeats
    detail = '{} chances spent, {} signatures issued, {} ballots; {} repeated casts accepted'.format(
        spent, issued, box, len(repeats))
    return _verdict(holds), detail


def check_fairness(election):
    early = election.early_tally
    refused = early is not None and isinstance(early.error, ElectionOpen)
    detail = 'tally at et-1 {}'.format('refused' if refused else 'answered')
    if not election.config.sealed:
        return _verdict(refused), detail + '; ballots are public in the BallotBox while voting'
    log = election.ledger.log
    published = [tx.index for tx in log if tx.kind == 'publish' and tx.status == 'ok']
    cutoff = published[0] if published else len(log)
    plaintexts = {s.plaintext for states in election.states.values() for s in states}
    stored = [tx.payload['ballot'] for tx in log[:cutoff] if tx.kind == 'cast']
    prefix = ''.join(tx.to_line() for tx in log[:cutoff])
    leaked = [p for p in plaintexts
              if p in stored or (len(p) >= LEAK_SCAN_MIN_BYTES and utils.bytes_to_hex(p) in prefix)]
    detail += '; {} plaintext ballots visible before the key was published'.format(len(leaked))
    return _verdict(refused and not leaked), detail


def check_correctness(election):
    cast = Counter(s.plaintext for _, s in election.accepted_states())
    tally = Counter(election.tally or {})
    holds = tally == cast == election.offchain
    oracle = election.config.expected_tally()
    detail = 'tally of {} ballots {} the accepted casts'.format(
        sum(tally.values()), 'matches' if holds else 'does not match')
    voters = election.config.voters
    if all(v.kind == 'honest' for v in voters):
        # honest ballots are owed in full, or as signed when the voter reported an error
        owed = Counter()
        for v in voters:
            if election.outcomes[v.name].errors:
                owed.update(s.plaintext for s in election.states[v.name])
            else:
                owed.update(v.ballots)
        if tally != owed:
            holds = False
            detail += '; {} honest ballots owed, {} counted'.format(
                sum(owed.values()), sum(tally.values()))
    if tally != oracle:
        detail += '; differs from the configured ballots'
    return _verdict(holds), detail


PROPERTY_CHECKS = OrderedDict([('Privacy', check_privacy),
                               ('Receipt-Freeness', check_receipt_freeness),
                               ('Robustness', check_robustness),
                               ('Verifiability', check_verifiability),
                               ('Democracy/Eligibility', check_eligibility),
                               ('Democracy/PMV', check_pmv),
                               ('Fairness', check_fairness),
                               ('Correctness', check_correctness)])
