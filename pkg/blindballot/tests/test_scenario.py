import os
from collections import Counter

import oyaml as yaml
import pytest

from blindballot.actors import voter_cast
from blindballot.config import SEED_ENV
from blindballot.errors import ConfigInvalid
from blindballot.ledger import load_log, replay
from blindballot.scenario import (EXPECTED, PROPERTIES, Election, ScenarioConfig,
                                  check_correctness, load_config, run_scenario)


def read(path):
    with open(path, 'r') as f:
        return f.read()


def test_ten_honest_voters(scenario):
    """ A x6, B x4 counts exactly; only receipt-freeness is flagged """
    report = run_scenario(scenario())
    assert report.tally == Counter({b'A': 6, b'B': 4})
    assert [a.property for a in report.assertions] == list(PROPERTIES)
    assert {a.property: a.verdict for a in report.assertions} == dict(EXPECTED)
    assert report.ok


def test_dropped_ballot_fails_correctness(scenario, monkeypatch):
    """ an honest ballot that never reaches the box fails Correctness """
    calls = []

    def dropping_cast(state, *args, **kwargs):
        calls.append(state)
        if len(calls) == 1:
            return True
        return voter_cast(state, *args, **kwargs)

    monkeypatch.setattr('blindballot.scenario.voter_cast', dropping_cast)
    election = Election(ScenarioConfig.from_dict(scenario()))
    election.run_stages()
    verdict, detail = check_correctness(election)
    # the box, the tally and the log agree with each other, just not with the voters
    assert sum(election.tally.values()) == 9
    assert verdict == 'fail'
    assert '10 honest ballots owed, 9 counted' in detail


def test_transcript_replays(scenario):
    report = run_scenario(scenario())
    text = read(report.transcript_path)
    replayed = replay(load_log(report.transcript_path))
    assert replayed.export() == text
    assert len(text.splitlines()) == report.records


def test_deterministic(scenario):
    """ same config and seed, byte-identical transcripts """
    first = run_scenario(scenario(run='one'))
    second = run_scenario(scenario(run='two'))
    assert read(first.transcript_path) == read(second.transcript_path)
    third = run_scenario(scenario(run='three', seed=6))
    assert read(first.transcript_path) != read(third.transcript_path)


def test_seed_from_environment(scenario, monkeypatch):
    monkeypatch.setenv(SEED_ENV, '99')
    assert ScenarioConfig.from_dict(scenario()).seed == 99


def test_toy_key_uses_enumeration(scenario):
    report = run_scenario(scenario(key_bits='toy'))
    privacy = report.assertion('Privacy')
    assert privacy.verdict == 'pass'
    assert privacy.detail.startswith('enumeration')
    assert report.modulus_bits == 12
    assert report.ok


def test_large_key_uses_monte_carlo(scenario):
    report = run_scenario(scenario())
    assert report.assertion('Privacy').detail.startswith('monte-carlo')


def test_report_file(scenario):
    report = run_scenario(scenario())
    with open(report.report_path, 'r') as f:
        saved = yaml.safe_load(f)
    assert saved['ok'] is True
    assert saved['transcript']['head'] == report.head
    assert {row['ballot']: row['count'] for row in saved['tally']} == {'A': 6, 'B': 4}
    assert [row['property'] for row in saved['assertions']] == list(PROPERTIES)


def test_sealed_matches_plain(scenario):
    """ sealed and plain runs of the same config count the same """
    voters = [{'name': 'v{}'.format(i), 'ballot': 'candidate-{}'.format('alice' if i % 3 else 'bob')}
              for i in range(6)]
    plain = run_scenario(scenario(voters=voters, run='plain'))
    sealed = run_scenario(scenario(voters=voters, run='sealed', sealed=True))
    assert sealed.tally == plain.tally == Counter({b'candidate-alice': 4, b'candidate-bob': 2})
    assert sealed.assertion('Fairness').verdict == 'pass'
    assert sealed.ok

    lines = read(sealed.transcript_path).splitlines()
    publish = next(i for i, line in enumerate(lines) if '"kind":"publish"' in line)
    before = '\n'.join(lines[:publish])
    for ballot in (b'candidate-alice', b'candidate-bob'):
        assert ballot.hex() not in before
    # the same ballots are visible in the plain run
    assert b'candidate-alice'.hex() in read(plain.transcript_path)


def test_voter_kinds(scenario):
    voters = [{'name': 'honest', 'ballot': 'A'},
              {'name': 'quiet', 'ballot': 'B', 'kind': 'abstain'},
              {'name': 'outsider', 'ballot': 'B', 'kind': 'ineligible'},
              {'name': 'greedy', 'ballot': 'B', 'kind': 'double-voter'},
              {'name': 'twice', 'ballots': ['A', 'B'], 'chances': 2}]
    report = run_scenario(scenario(voters=voters))
    assert report.tally == Counter({b'A': 2, b'B': 2})
    assert report.voters['quiet'].signed == 1 and report.voters['quiet'].casts == []
    assert report.voters['outsider'].signed == 0
    assert report.voters['outsider'].errors[0].startswith('SignRefused')
    assert report.voters['greedy'].casts == [True]
    assert report.voters['greedy'].repeats == [False]
    assert report.voters['twice'].casts == [True, True]
    assert report.assertion('Democracy/Eligibility').verdict == 'pass'
    assert report.assertion('Democracy/PMV').verdict == 'pass'
    assert report.ok


def test_linkable_voter_flagged(scenario):
    """ casting from the eligible account breaks anonymity """
    voters = [{'name': 'a', 'ballot': 'A'}, {'name': 'b', 'ballot': 'B', 'kind': 'linkable'}]
    report = run_scenario(scenario(voters=voters))
    assert report.tally == Counter({b'A': 1, b'B': 1})
    assert report.assertion('Privacy').verdict == 'fail'
    assert 'linkable' in report.assertion('Privacy').detail
    assert not report.ok


def test_concurrent_voters(scenario):
    report = run_scenario(scenario(concurrent=True))
    assert report.tally == Counter({b'A': 6, b'B': 4})
    assert report.ok


# ballot box never exceeds the chances handed out, whatever the voters do
def test_ballot_box_bounded_by_chances(scenario):
    kinds = ['honest', 'abstain', 'ineligible', 'double-voter', 'linkable']
    for seed in range(100):
        voters = [{'name': 'v{}'.format(i), 'ballot': 'AB'[(seed + i) % 2],
                   'kind': kinds[(seed * 7 + i * 3) % len(kinds)]} for i in range(3)]
        report = run_scenario(scenario(voters=voters, seed=seed, key_bits='toy', run='sweep'))
        chances = sum(1 for v in voters if v['kind'] != 'ineligible')
        assert sum(report.tally.values()) <= chances
        assert report.assertion('Democracy/Eligibility').verdict == 'pass'
        assert report.assertion('Democracy/PMV').verdict == 'pass'


def test_no_voters(scenario):
    with pytest.raises(ConfigInvalid) as err:
        run_scenario(scenario(voters=[]))
    assert any('voters' in p for p in err.value.problems)


def test_all_problems_listed(scenario):
    bad = scenario(windows={'st': 5, 'ct': 5, 'et': 1}, key_bits=8, seed=-1, colour='blue',
                   voters=[{'name': 'a', 'ballot': 'A'}, {'name': 'a', 'ballot': 'B'},
                           {'name': 'b', 'ballots': ['A', 'B']},
                           {'name': 'c', 'ballot': 'A', 'kind': 'sneaky'},
                           {'name': 'd'}])
    with pytest.raises(ConfigInvalid) as err:
        ScenarioConfig.from_dict(bad)
    text = '\n'.join(err.value.problems)
    for expected in ('windows', 'key_bits', 'seed', "'colour'", "name 'a'",
                     '2 ballots but only 1 chances', 'sneaky', 'exactly one of ballot'):
        assert expected in text


def test_not_a_mapping():
    with pytest.raises(ConfigInvalid):
        ScenarioConfig.from_dict(['voters'])


def test_load_config(config_file):
    config = load_config(config_file(sealed=True))
    assert config.sealed
    assert config.windows == (10, 20, 30)
    assert config.expected_tally() == Counter({b'A': 6, b'B': 4})


def test_example_configs_load():
    folder = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'example_yaml')
    names = sorted(f for f in os.listdir(folder) if f.endswith('.yaml'))
    assert names
    for name in names:
        load_config(os.path.join(folder, name))
