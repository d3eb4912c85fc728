"""
Ballot sealing for the publish option.

Each ballot gets a fresh AES-256-GCM key; the key is wrapped with
RSA-OAEP under the sealing public key. Two seals of the same ballot
never look alike, so sealed BallotBox entries leak no equality.

Sealed layout::

    wrapped_len (2 bytes) | wrapped key | nonce (12) | tag (16) | ciphertext
"""
from Crypto.Cipher import AES, PKCS1_OAEP
from Crypto.Hash import SHA256
from Crypto.PublicKey import RSA

from blindballot import utils
from blindballot.errors import SealingError

NONCE_BYTES = 12
TAG_BYTES = 16
SESSION_KEY_BYTES = 32
# OAEP with SHA-256 needs 2*32 + 2 bytes of overhead plus the session key
MIN_SEALING_BITS = 8 * (2 * 32 + 2 + SESSION_KEY_BYTES)


def _oaep(key, randfunc=None):
    if key.bits < MIN_SEALING_BITS:
        raise SealingError('sealing keys need at least {} bits, got {}'.format(
            MIN_SEALING_BITS, key.bits))
    if key.has_private:
        rsa_key = RSA.construct((key.n, key.e, key.d))
    else:
        rsa_key = RSA.construct((key.n, key.e))
    return PKCS1_OAEP.new(rsa_key, hashAlgo=SHA256, randfunc=randfunc)


def seal(ballot, sealing_pk, rng):
    """
    Encrypt a ballot under the sealing public key

    Parameters
    ----------
    ballot : bytes
    sealing_pk : KeyPair
        public sealing key
    rng : numpy Generator or randfunc
        source of the session key, nonce and OAEP padding

    Returns
    -------
    bytes
    """
    randfunc = utils.randfunc_for(rng)
    session_key = randfunc(SESSION_KEY_BYTES)
    nonce = randfunc(NONCE_BYTES)
    wrapped = _oaep(sealing_pk.public(), randfunc=randfunc).encrypt(session_key)
    cipher = AES.new(session_key, AES.MODE_GCM, nonce=nonce)
    ciphertext, tag = cipher.encrypt_and_digest(bytes(ballot))
    return len(wrapped).to_bytes(2, 'big') + wrapped + nonce + tag + ciphertext


def unseal(sealed, sealing_sk):
    """
    Decrypt a sealed ballot with the sealing private key

    Raises
    ------
    SealingError
        if the layout is broken or authentication fails
    """
    sealed = bytes(sealed)
    if len(sealed) < 2:
        raise SealingError('sealed ballot too short')
    wrapped_len = int.from_bytes(sealed[:2], 'big')
    body = sealed[2:]
    if len(body) < wrapped_len + NONCE_BYTES + TAG_BYTES:
        raise SealingError('sealed ballot too short')
    wrapped = body[:wrapped_len]
    nonce = body[wrapped_len:wrapped_len + NONCE_BYTES]
    tag = body[wrapped_len + NONCE_BYTES:wrapped_len + NONCE_BYTES + TAG_BYTES]
    ciphertext = body[wrapped_len + NONCE_BYTES + TAG_BYTES:]
    try:
        session_key = _oaep(sealing_sk).decrypt(wrapped)
        cipher = AES.new(session_key, AES.MODE_GCM, nonce=nonce)
        return cipher.decrypt_and_verify(ciphertext, tag)
    except ValueError as e:
        raise SealingError('could not unseal ballot: {}'.format(e))


def key_matches(public, private):
    """ True if ``private`` is the private half of ``public`` """
    if not private.has_private or not public.matches(private):
        return False
    sample = 2 if public.n > 2 else 1
    return pow(pow(sample, public.e, public.n), private.d, public.n) == sample
