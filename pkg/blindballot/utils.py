"""
Hex codecs for the wire format and seeded randomness helpers.
"""
import re

import numpy as np
from Crypto.Hash import SHA256

_canonical_int = re.compile(r'^(0|[1-9a-f][0-9a-f]*)$')
_lower_hex = re.compile(r'^([0-9a-f]{2})*$')


def int_to_hex(value):
    """
    Lowercase big-endian hex without leading zeros

    Parameters
    ----------
    value : int
        non-negative integer

    Returns
    -------
    str
    """
    if value < 0:
        raise ValueError('negative integers have no wire form: {}'.format(value))
    return format(value, 'x')


def hex_to_int(text):
    """ inverse of int_to_hex; rejects non-canonical forms such as '0a' or 'FF' """
    if not _canonical_int.match(text):
        raise ValueError('not a canonical hex integer: {!r}'.format(text))
    return int(text, 16)


def bytes_to_hex(data):
    return bytes(data).hex()


def hex_to_bytes(text, width=None):
    """
    Parse lowercase hex into bytes

    Parameters
    ----------
    text : str
    width : int, optional
        required length in bytes (uuids, addresses)

    Returns
    -------
    bytes
    """
    if not _lower_hex.match(text):
        raise ValueError('not lowercase hex bytes: {!r}'.format(text))
    data = bytes.fromhex(text)
    if width is not None and len(data) != width:
        raise ValueError('expected {} bytes, got {}'.format(width, len(data)))
    return data


def label_to_int(label):
    """ map a label (str, bytes or int) onto a 64-bit integer for seeding """
    if isinstance(label, int):
        return label
    if isinstance(label, str):
        label = label.encode('utf-8')
    return int.from_bytes(SHA256.new(bytes(label)).digest()[:8], 'big')


def child_rng(seed, *labels):
    """
    A numpy Generator derived from a seed and a path of labels

    The same (seed, labels) always yields the same stream, and different
    label paths yield independent streams.

    Parameters
    ----------
    seed : int, str or bytes
    labels : str, bytes or int

    Returns
    -------
    numpy.random.Generator
    """
    return np.random.default_rng([label_to_int(seed)] + [label_to_int(lab) for lab in labels])


def randfunc_for(rng):
    """ adapt a Generator to the randfunc(n) -> bytes convention of pycryptodome """
    if isinstance(rng, np.random.Generator):
        return rng.bytes
    if callable(rng):
        return rng
    return np.random.default_rng(rng).bytes
