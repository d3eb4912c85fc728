import os

import oyaml as yaml
import pytest

from blindballot import blindsig
from blindballot.actors import Organizer
from blindballot.ledger import Ledger

WINDOWS = (10, 20, 30)

# keys shared across the suite; seeded so every run sees the same ones
KEY_512 = blindsig.keygen(512, seed=1)
TOY = blindsig.toy_keypair()


def ten_voters():
    """ A x6, B x4 """
    return [{'name': 'voter{}'.format(i), 'ballot': 'A' if i < 6 else 'B'} for i in range(10)]


@pytest.fixture
def scenario(tmp_path):
    """ factory for scenario config dicts that write under tmp_path """
    def make(voters=None, **changes):
        configs = {'name': 'test', 'seed': 5, 'key_bits': 512,
                   'windows': {'st': 10, 'ct': 20, 'et': 30},
                   'voters': voters if voters is not None else ten_voters(),
                   'out_dir': str(tmp_path / changes.pop('run', 'run'))}
        configs.update(changes)
        return configs
    return make


@pytest.fixture
def config_file(tmp_path, scenario):
    """ factory writing a scenario config to a YAML file """
    def make(**changes):
        filename = os.path.join(str(tmp_path), 'scenario.yaml')
        with open(filename, 'w') as f:
            yaml.dump(scenario(**changes), f, default_flow_style=False)
        return filename
    return make


def open_election(voters, key=KEY_512, chances=1, sealed=False, sealing_key=None, seed=0):
    """
    A ledger with a deployed election

    Returns
    -------
    ledger, organizer, dict of name -> eligible Account
    """
    ledger = Ledger()
    organizer_account = ledger.create_account((seed, 'organizer'))
    accounts = {name: ledger.create_account((seed, 'voter', name)) for name in voters}
    organizer = Organizer.setup(ledger, organizer_account,
                                [(a.address, chances) for a in accounts.values()],
                                key, WINDOWS, sealed=sealed, sealing_key=sealing_key)
    return ledger, organizer, accounts
