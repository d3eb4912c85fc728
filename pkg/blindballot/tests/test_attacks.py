import pytest

from blindballot.attacks import ATTACKS, run_attack
from blindballot.errors import UnknownAttack

VOTERS = [{'name': 'alice', 'ballot': 'A'},
          {'name': 'bob', 'ballot': 'B'},
          {'name': 'carol', 'ballot': 'A'}]


# every attack ends the way it is expected to, and no other verdict moves
@pytest.mark.parametrize('name', list(ATTACKS))
def test_attack(scenario, name):
    report = run_attack(name, scenario(voters=VOTERS, run=name))
    attack = report.attack
    assert attack.name == name
    assert attack.property == ATTACKS[name][1]
    assert attack.as_expected, attack.detail
    assert report.ok, [(a.property, a.verdict, a.detail) for a in report.assertions if not a.holds]


def test_receipt_prove_succeeds(scenario):
    """ the one known weakness: a voter can prove its vote """
    report = run_attack('receipt-prove', scenario(voters=VOTERS))
    assert report.attack.succeeded
    assert report.attack.detail == '3/3 receipts verified'
    assert report.assertion('Receipt-Freeness').verdict == 'fail'


def test_sealed_peek_runs_sealed(scenario):
    report = run_attack('sealed-peek', scenario(voters=VOTERS))
    assert report.sealed
    assert not report.attack.succeeded
    assert 'tally before publish refused' in report.attack.detail


def test_organizer_garbage_detected(scenario):
    report = run_attack('organizer-garbage', scenario(voters=VOTERS))
    assert report.assertion('Robustness').verdict == 'fail'
    assert report.assertion('Robustness').expected == 'fail'
    assert sum(len(o.errors) for o in report.voters.values()) == 1
    assert sum(report.tally.values()) == 2


def test_forge_has_no_edge(scenario):
    report = run_attack('forge-signature', scenario(voters=VOTERS))
    assert report.attack.detail.startswith('0/1000 forgeries accepted')


# at n=3233 a random signature verifies one time in n, and the report says so
def test_forge_toy_key(scenario):
    """ accepted forgeries stay within what 1/n guessing explains """
    report = run_attack('forge-signature', scenario(voters=VOTERS, key_bits='toy', run='toy'))
    detail = report.attack.detail
    assert '1 valid signature(s) per digest' in detail
    assert '0.309 expected from 1/n guessing' in detail
    accepted = int(detail.split('/')[0])
    allowed = int(detail.split('up to ')[1].split(' ')[0])
    assert 0 <= accepted <= allowed
    assert not report.attack.succeeded
    assert report.attack.as_expected


def test_attack_report_saved(scenario):
    report = run_attack('double-vote', scenario(voters=VOTERS))
    with open(report.report_path, 'r') as f:
        text = f.read()
    assert 'double-vote' in text


def test_unknown_attack(scenario):
    with pytest.raises(UnknownAttack):
        run_attack('bribe', scenario(voters=VOTERS))


# a copied ballot never counts twice, whatever the seed
@pytest.mark.parametrize('name', ['double-vote', 'replay-cast'])
def test_copied_ballot_sweep(scenario, name):
    for seed in range(100):
        report = run_attack(name, scenario(voters=VOTERS, seed=seed, key_bits='toy', run='sweep'))
        assert not report.attack.succeeded
        assert sum(report.tally.values()) == 3
