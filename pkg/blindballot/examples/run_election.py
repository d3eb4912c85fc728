# Runs the ten-voter example scenario and prints the property table.
import os

from blindballot.cli import print_report
from blindballot.config import setup_logging
from blindballot.scenario import run_scenario

setup_logging('INFO')

config = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                      'example_yaml', 'ten_voters.yaml')

print('Running the ten-voter election')
print('-'*40)
report = run_scenario(config)
print_report(report)

assert report.ok, 'a property verdict did not match its expectation'
