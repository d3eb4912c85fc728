# One voter walked through the protocol without the scenario runner.
from blindballot import blindsig
from blindballot.actors import (Organizer, prove_receipt, verify_receipt,
                                voter_cast, voter_check_inclusion,
                                voter_obtain_signature, voter_prepare)
from blindballot.calls import Payload
from blindballot.ledger import Ledger

st, ct, et = 10, 20, 30
key = blindsig.keygen(512, seed=1)

ledger = Ledger()
organizer_account = ledger.create_account('organizer')
alice = ledger.create_account('alice')
organizer = Organizer.setup(ledger, organizer_account, [alice.address], key, (st, ct, et))
contract = organizer.contract
print('contract deployed at {}'.format(contract.address.hex()))

# sign stage
state = voter_prepare(b'yes', seed=42, pk=contract.params.pk, eligible_account=alice)
ledger.advance_clock(st)
voter_obtain_signature(state, ledger, contract)
print('signature verifies: {}'.format(blindsig.verify(state.signed, state.digest, key)))

# vote stage, from a fresh account
ledger.advance_clock(ct)
voter_cast(state, ledger, contract, seed=43)
print('ballot in the BallotBox: {}'.format(voter_check_inclusion(state, contract)))

# counting
ledger.advance_clock(et)
print('tally: {}'.format(dict(ledger.submit(organizer_account, contract.address,
                                            Payload('tally')).unwrap())))

# keeping r lets alice prove her vote to anyone
print('receipt verifies: {}'.format(verify_receipt(prove_receipt(state), ledger, contract)))

for line in ledger.export().splitlines():
    print(line[:100])
