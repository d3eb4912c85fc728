"""
Transcript audits: replay an exported log, recount the BallotBox off-chain
and compare the result with what the run reported.
"""

# standard library imports
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional

# imports that may need installation
import oyaml as yaml

# local package imports
from blindballot import sealing, utils
from blindballot.blindsig import KeyPair
from blindballot.contract import parse_tally, unseal_all
from blindballot.errors import ReplayDivergence, SealingError
from blindballot.ledger import load_log, replay

logger = logging.getLogger(__name__)


def _deploys(log):
    return [tx for tx in log if tx.kind == 'deploy' and tx.status == 'ok']


def offchain_tally(log, contract_address=None):
    """
    Count accepted casts straight from a log

    Anyone holding the transcript can do this without running the
    contract: every cast recorded with result 1 is one ballot. In sealed
    elections the key published after et decrypts them.

    Parameters
    ----------
    log : list of Transaction
    contract_address : bytes, optional
        defaults to the first contract deployed in the log

    Returns
    -------
    Counter
        ballot bytes -> count; empty when a sealed election has no
        published key yet
    """
    deploys = _deploys(log)
    if contract_address is None:
        if not deploys:
            return Counter()
        contract_address = utils.hex_to_bytes(deploys[0].result[0])
    contract_address = bytes(contract_address)
    deploy = next((tx for tx in deploys if utils.hex_to_bytes(tx.result[0]) == contract_address), None)
    ballots = [tx.payload['ballot'] for tx in log
               if tx.kind == 'cast' and tx.recipient == contract_address and tx.result == ('1',)]
    if deploy is None or not deploy.payload['sealed']:
        return Counter(ballots)
    published = [tx for tx in log if tx.kind == 'publish' and tx.status == 'ok'
                 and tx.recipient == contract_address]
    if not published:
        return Counter()
    p = published[0].payload
    return unseal_all(ballots, KeyPair(p['n'], p['e'], p['d']))


def recorded_tally(log, contract_address=None):
    """ the result of the last successful on-chain tally, or None """
    tallies = [tx for tx in log if tx.kind == 'tally' and tx.status == 'ok'
               and (contract_address is None or tx.recipient == bytes(contract_address))]
    if not tallies:
        return None
    return parse_tally(''.join(line + '\n' for line in tallies[-1].result))


def decrypt_with(log, sealing_sk, contract_address=None):
    """ count a sealed election with a key held off-chain """
    if not sealing.key_matches(sealing_sk.public(), sealing_sk):
        raise SealingError('not a complete private key')
    return unseal_all([tx.payload['ballot'] for tx in log if tx.kind == 'cast' and tx.result == ('1',)
                       and (contract_address is None or tx.recipient == bytes(contract_address))],
                      sealing_sk)


@dataclass
class AuditResult:
    """
    Outcome of verify_transcript

    Attributes
    ----------
    ok : bool
    divergences : list of str
        one line per problem found, first problem first
    tally : Counter
        the recount from the replayed contract
    index : int, optional
        first divergent record, when replay diverged
    """
    ok: bool
    divergences: List[str] = field(default_factory=list)
    tally: Counter = field(default_factory=Counter)
    index: Optional[int] = None


def _report_tally(report):
    return Counter({utils.hex_to_bytes(str(row['hex'])): int(row['count'])
                    for row in report.get('tally') or []})


def verify_transcript(path, report_path=None):
    """
    Replay a transcript and check it against the run report

    Parameters
    ----------
    path : str
        transcript.jsonl
    report_path : str, optional
        defaults to report.yaml next to the transcript, if present

    Returns
    -------
    AuditResult

    Raises
    ------
    TranscriptParseError
        if a line does not parse
    """
    log = load_log(path)
    divergences = []
    index = None
    try:
        ledger = replay(log, strict=True)
    except ReplayDivergence as e:
        divergences.append(str(e))
        index = e.index
        ledger = replay(log, strict=False)

    # recount from the replayed contract, independent of the recorded results
    tally = offchain_tally(ledger.log)
    recorded = recorded_tally(log)
    if recorded is not None and recorded != tally:
        divergences.append('recorded on-chain tally differs from the recount')

    if report_path is None:
        candidate = os.path.join(os.path.dirname(os.path.abspath(path)), 'report.yaml')
        report_path = candidate if os.path.exists(candidate) else None
    if report_path is not None:
        with open(report_path, 'r') as f:
            report = yaml.safe_load(f)
        if _report_tally(report) != tally:
            divergences.append('report tally differs from the recount')
        transcript = report.get('transcript') or {}
        if transcript.get('records') != len(log):
            divergences.append('report lists {} records, transcript has {}'.format(
                transcript.get('records'), len(log)))
        head = log[-1].hash if log else None
        if transcript.get('head') != head:
            divergences.append('transcript head does not match the report')

    for d in divergences:
        logger.warning('%s: %s', path, d)
    return AuditResult(ok=not divergences, divergences=divergences, tally=tally, index=index)
