import uuid

import pytest

from blindballot import calls, utils
from blindballot.calls import CALLS, Payload
from blindballot.errors import UnknownCall

CONTRACT_KINDS = ['deploy', 'check', 'cast', 'publish', 'tally']
MESSAGE_KINDS = ['request', 'sign']


def test_call_table():
    """ every payload kind is in the table with the right target """
    assert sorted(CALLS) == sorted(CONTRACT_KINDS + MESSAGE_KINDS)
    assert all(CALLS[k].is_contract for k in CONTRACT_KINDS)
    assert not any(CALLS[k].is_contract for k in MESSAGE_KINDS)
    assert CALLS['cast'].field_names == ['signed', 'ballot', 'uuid']
    assert CALLS['tally'].fields == []
    assert CALLS['cast'].mutates and not CALLS['check'].mutates


def test_wire_form():
    u = uuid.UUID(bytes=bytes(range(16)))
    payload = Payload('cast', signed=255, ballot=b'A', uuid=u)
    assert payload.to_wire() == ['ff', '41', '000102030405060708090a0b0c0d0e0f']
    assert Payload.from_wire('cast', payload.to_wire()) == payload


def test_values_are_normalized():
    """ uuids given as bytes come back as UUID objects """
    payload = Payload('cast', signed=1, ballot=b'', uuid=bytes(16))
    assert payload['uuid'] == uuid.UUID(bytes=bytes(16))
    assert payload['ballot'] == b''


def test_flag_field():
    payload = Payload('deploy', n=3233, e=17, st=1, ct=2, et=3, sealed=True,
                      sealing_n=0, sealing_e=0, salt=b'')
    assert payload.to_wire()[5] == '1'
    with pytest.raises(ValueError):
        CALLS['deploy'].decode(['1', '1', '1', '2', '3', '2', '0', '0', ''])


def test_missing_field():
    with pytest.raises(UnknownCall):
        Payload('check', blinded=3)


def test_unknown_kind():
    with pytest.raises(UnknownCall):
        Payload('mint')
    with pytest.raises(UnknownCall):
        calls.lookup('mint')


def test_wrong_field_count():
    with pytest.raises(ValueError):
        Payload.from_wire('check', ['1'])


def test_load_calls_strips(tmp_path):
    """ cells and headers are stripped of white space """
    filename = tmp_path / 'calls.csv'
    filename.write_text('kind , target,fields,mutates,doc\n ping ,account, x:int ,False, a ping \n')
    table = calls.load_calls(str(filename))
    assert list(table) == ['ping']
    assert table['ping'].fields == [('x', 'int')]
    assert table['ping'].doc == 'a ping'


@pytest.mark.parametrize('value,text', [(0, '0'), (10, 'a'), (3233, 'ca1'), (2 ** 64, '1' + '0' * 16)])
def test_int_hex(value, text):
    assert utils.int_to_hex(value) == text
    assert utils.hex_to_int(text) == value


@pytest.mark.parametrize('text', ['0a', 'FF', '', '-1', 'xyz'])
def test_non_canonical_int(text):
    with pytest.raises(ValueError):
        utils.hex_to_int(text)


def test_negative_int():
    with pytest.raises(ValueError):
        utils.int_to_hex(-1)


def test_hex_bytes():
    assert utils.hex_to_bytes('00ff') == b'\x00\xff'
    with pytest.raises(ValueError):
        utils.hex_to_bytes('0F')
    with pytest.raises(ValueError):
        utils.hex_to_bytes('abc')
    with pytest.raises(ValueError):
        utils.hex_to_bytes('00', width=2)


def test_child_rng():
    """ same labels give the same stream, other labels another """
    assert utils.child_rng(1, 'a', 2).bytes(8) == utils.child_rng(1, 'a', 2).bytes(8)
    assert utils.child_rng(1, 'a').bytes(8) != utils.child_rng(1, 'b').bytes(8)
    assert utils.child_rng(1, 'a').bytes(8) != utils.child_rng(2, 'a').bytes(8)
