'''
The call table: every payload kind that can travel in a ledger
transaction, its field order and how each field is written on the wire.

The table lives in tables/calls.csv and is read with pandas, one row per
kind. Contract kinds execute on a deployed contract; account kinds are
plain messages between accounts and are only recorded.
'''

# standard library imports
import os
import uuid as _uuid
from collections import defaultdict

# imports that may need installation
import pandas as pd

# local package imports
from blindballot import utils
from blindballot.errors import UnknownCall

calls_dir = os.path.join(os.path.dirname(__file__), 'tables')
default_calls_file = os.path.join(calls_dir, 'calls.csv')


def _encode_flag(value):
    return '1' if value else '0'


def _decode_flag(text):
    if text not in ('0', '1'):
        raise ValueError('flag must be 0 or 1, got {!r}'.format(text))
    return text == '1'


def _encode_uuid(value):
    if isinstance(value, _uuid.UUID):
        return value.hex
    return utils.bytes_to_hex(value)


def _decode_uuid(text):
    return _uuid.UUID(bytes=utils.hex_to_bytes(text, width=16))


# field type -> (encoder, decoder); unknown types pass strings through
field_codecs = defaultdict(lambda: (str, str))
field_codecs['int'] = (utils.int_to_hex, utils.hex_to_int)
field_codecs['bytes'] = (utils.bytes_to_hex, utils.hex_to_bytes)
field_codecs['uuid'] = (_encode_uuid, _decode_uuid)
field_codecs['flag'] = (_encode_flag, _decode_flag)


class Call(object):
    """
    One kind of ledger payload

    Parameters
    ----------
    kind : str
        tag written in the transcript (deploy, check, cast, ...)
    target : str
        'contract' if the payload executes on a contract, 'account' for messages
    fields : list of (str, str)
        (name, type) pairs in wire order
    mutates : bool
        True if executing the call can change contract state
    doc : str, optional
    """

    def __init__(self, kind, target, fields, mutates=False, doc=''):
        self.kind = kind
        self.target = target
        self.fields = list(fields)
        self.mutates = mutates
        self.doc = doc

    @property
    def field_names(self):
        return [name for name, _ in self.fields]

    @property
    def is_contract(self):
        return self.target == 'contract'

    def encode(self, values):
        """ values dict -> list of hex strings in field order """
        missing = [name for name in self.field_names if name not in values]
        if missing:
            raise UnknownCall('{} payload is missing fields {}'.format(self.kind, missing))
        return [field_codecs[ftype][0](values[name]) for name, ftype in self.fields]

    def decode(self, texts):
        """ list of hex strings -> values dict """
        texts = list(texts)
        if len(texts) != len(self.fields):
            raise ValueError('{} takes {} fields, got {}'.format(
                self.kind, len(self.fields), len(texts)))
        return {name: field_codecs[ftype][1](text)
                for (name, ftype), text in zip(self.fields, texts)}


class Payload(object):
    """ a typed call: a kind from the call table plus its field values """

    def __init__(self, kind, **values):
        self.call = lookup(kind)
        self.kind = kind
        # encoding validates the field set up front
        self._wire = self.call.encode(values)
        # values as a replayed transcript would see them (UUIDs, bytes, bools)
        self.values = self.call.decode(self._wire)

    def __getitem__(self, name):
        return self.values[name]

    def __repr__(self):
        return 'Payload({}, {})'.format(self.kind, ', '.join(self._wire))

    def __eq__(self, other):
        return isinstance(other, Payload) and (self.kind, self._wire) == (other.kind, other._wire)

    def to_wire(self):
        return list(self._wire)

    @classmethod
    def from_wire(cls, kind, texts):
        return cls(kind, **lookup(kind).decode(texts))


def load_calls(filename=default_calls_file):
    """
    Build the call table from a csv file

    Parameters
    ----------
    filename : str
        csv with columns kind, target, fields, mutates, doc

    Returns
    -------
    dict
        kind -> Call
    """
    df = pd.read_csv(filename, dtype=str, keep_default_na=False)
    # strip white space and end-of-line from column headers and cells
    df = df.rename(columns=lambda x: x.strip())
    df = df.apply(lambda col: col.str.strip())

    calls = {}
    for _, row in df.iterrows():
        fields = []
        for token in row['fields'].split():
            name, _, ftype = token.partition(':')
            fields.append((name, ftype or 'str'))
        mutates = row['mutates'] in ['True', 'T', 'TRUE', 'true']
        calls[row['kind']] = Call(row['kind'], row['target'], fields,
                                  mutates=mutates, doc=row['doc'])
    return calls


CALLS = load_calls()


def lookup(kind):
    try:
        return CALLS[kind]
    except KeyError:
        raise UnknownCall('no call of kind {!r}'.format(kind))
