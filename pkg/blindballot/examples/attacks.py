# Runs every attack against the toy-key scenario.
import os

from blindballot.attacks import ATTACKS, run_attack

config = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                      'example_yaml', 'toy.yaml')

for name in ATTACKS:
    report = run_attack(name, config)
    a = report.attack
    print('{:<18} {:<22} {:<10} {}'.format(
        name, a.property, 'succeeded' if a.succeeded else 'failed',
        'as expected' if a.as_expected else 'UNEXPECTED'))
    print('    ' + a.detail)
