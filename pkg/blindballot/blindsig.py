"""
Chaum blind signatures over textbook RSA with a full-domain hash.

A ballot travels through four forms::

    digest  = Hash(ballot) + uuid                 (48 bytes)
    blinded = FDH(digest) * r^e mod n             (voter)
    signed_blinded = blinded^d mod n              (organizer; 0 means refused)
    signed  = signed_blinded * r^-1 mod n         (voter)

and ``signed^e mod n == FDH(digest)`` is what the contract checks.

Values are plain Python integers; only the key is wrapped in a class.
"""

# standard library imports
import uuid as _uuid
import functools
from dataclasses import dataclass
from typing import Optional

# imports that may need installation
import oyaml as yaml
from Crypto.Hash import SHA256
from Crypto.PublicKey import RSA
from Crypto.Signature.pss import MGF1
from Crypto.Util.number import GCD, getPrime, inverse

# local package imports
from blindballot import utils
from blindballot.errors import (KeyBitsError, MissingPrivateKey, NonUnit,
                                RefusalSentinel)

DIGEST_BYTES = 32
UUID_BYTES = 16
BALLOT_DIGEST_BYTES = DIGEST_BYTES + UUID_BYTES
REFUSAL = 0

DEFAULT_BITS = 2048
DEFAULT_EXPONENT = 65537
MIN_BITS = 16

# enumeration parameter set: p=61, q=53, e=17 gives n=3233, d=2753
TOY_P = 61
TOY_Q = 53
TOY_E = 17
# smallest modulus an election may be deployed with
MIN_MODULUS = TOY_P * TOY_Q


@dataclass(frozen=True)
class KeyPair:
    """
    An RSA key. The public part alone has ``private_exponent`` set to None.

    Parameters
    ----------
    modulus : int
        n, a product of two distinct primes
    public_exponent : int
        e, coprime to lambda(n)
    private_exponent : int, optional
        d with e*d = 1 mod lambda(n)
    """
    modulus: int
    public_exponent: int
    private_exponent: Optional[int] = None

    @property
    def n(self):
        return self.modulus

    @property
    def e(self):
        return self.public_exponent

    @property
    def d(self):
        if self.private_exponent is None:
            raise MissingPrivateKey('this key holds only the public part')
        return self.private_exponent

    @property
    def has_private(self):
        return self.private_exponent is not None

    @property
    def bits(self):
        return self.modulus.bit_length()

    def public(self):
        """ the key without its private exponent """
        return KeyPair(self.modulus, self.public_exponent)

    def matches(self, other):
        """ True if both keys share n and e """
        return (self.modulus, self.public_exponent) == (other.modulus, other.public_exponent)

    @classmethod
    def from_primes(cls, p, q, e=DEFAULT_EXPONENT):
        if p == q:
            raise KeyBitsError('the two primes must be distinct')
        phi = (p - 1) * (q - 1)
        if GCD(e, phi) != 1:
            raise KeyBitsError('e={} is not coprime to phi(n)={}'.format(e, phi))
        return cls(p * q, e, inverse(e, phi))


def toy_keypair():
    """ the n = 3233 key used for exhaustive enumeration """
    return KeyPair.from_primes(TOY_P, TOY_Q, TOY_E)


def keygen(bits=DEFAULT_BITS, seed=0, public_exponent=DEFAULT_EXPONENT):
    """
    Generate a key pair deterministically from a seed

    Parameters
    ----------
    bits : int
        size of the modulus; at least 16. Sizes of 1024 and up are handed
        to pycryptodome's RSA.generate, smaller (toy) sizes are built from
        two seeded primes directly.
    seed : int
        randomness seed; the same seed gives the same key
    public_exponent : int, optional

    Returns
    -------
    KeyPair
    """
    if bits < MIN_BITS:
        raise KeyBitsError('key size must be at least {} bits, got {}'.format(MIN_BITS, bits))
    randfunc = utils.child_rng(seed, 'keygen', bits).bytes

    if bits >= 1024:
        key = RSA.generate(bits, randfunc=randfunc, e=public_exponent)
        return KeyPair(key.n, key.e, key.d)

    half = bits // 2
    while True:
        p = getPrime(half, randfunc=randfunc)
        q = getPrime(bits - half, randfunc=randfunc)
        if p == q or (p * q).bit_length() != bits:
            continue
        try:
            return KeyPair.from_primes(p, q, public_exponent)
        except KeyBitsError:
            continue


def hash_ballot(ballot):
    """ SHA-256 of the ballot bytes """
    return SHA256.new(bytes(ballot)).digest()


def uuid_bytes(value):
    """ the 16 big-endian bytes of a uuid (accepts UUID or bytes) """
    if isinstance(value, _uuid.UUID):
        return value.bytes
    value = bytes(value)
    if len(value) != UUID_BYTES:
        raise ValueError('a uuid is {} bytes, got {}'.format(UUID_BYTES, len(value)))
    return value


def new_uuid(randfunc):
    """ a uniformly random 128-bit uuid (no version bits are forced) """
    return _uuid.UUID(bytes=randfunc(UUID_BYTES))


def ballot_digest(ballot, uuid):
    """ Hash(ballot) + uuid, where + appends """
    return hash_ballot(ballot) + uuid_bytes(uuid)


def fdh(digest, modulus):
    """
    Full-domain hash of a ballot digest into [1, n)

    MGF1-SHA256 over ``digest + counter`` is truncated to the bit length of
    n; the counter is incremented until the value lands in [1, n).

    Parameters
    ----------
    digest : bytes
    modulus : int

    Returns
    -------
    int
    """
    k = (modulus.bit_length() + 7) // 8
    excess = 8 * k - modulus.bit_length()
    counter = 0
    while True:
        block = MGF1(bytes(digest) + counter.to_bytes(4, 'big'), k, SHA256)
        value = int.from_bytes(block, 'big') >> excess
        if 1 <= value < modulus:
            return value
        counter += 1


def is_unit(value, modulus):
    return 1 <= value < modulus and GCD(value, modulus) == 1


def random_blinding_factor(modulus, randfunc):
    """ draw r uniformly from the units of Z_n """
    k = (modulus.bit_length() + 7) // 8
    excess = 8 * k - modulus.bit_length()
    while True:
        r = int.from_bytes(randfunc(k), 'big') >> excess
        if is_unit(r, modulus):
            return r


def blind(digest, r, key):
    """
    BlindedBallot = FDH(digest) * r^e mod n

    Parameters
    ----------
    digest : bytes
        Hash(ballot) + uuid
    r : int
        blinding factor, a unit mod n
    key : KeyPair
        only the public part is used

    Returns
    -------
    int
    """
    if not is_unit(r, key.n):
        raise NonUnit('blinding factor is not a unit mod n')
    return fdh(digest, key.n) * pow(r, key.e, key.n) % key.n


def sign_blinded(blinded, key):
    """ SignedBlindedBallot = blinded^d mod n """
    return pow(blinded, key.d, key.n)


def sign_digest(digest, key):
    """ the direct (unblinded) signature FDH(digest)^d mod n """
    return pow(fdh(digest, key.n), key.d, key.n)


def unblind(signed_blinded, r, key):
    """
    SignedBallot = signed_blinded * r^-1 mod n

    Raises
    ------
    RefusalSentinel
        if the organizer answered 0
    NonUnit
        if r has no inverse
    """
    if signed_blinded == REFUSAL:
        raise RefusalSentinel('the organizer refused to sign')
    if not is_unit(r, key.n):
        raise NonUnit('blinding factor is not a unit mod n')
    return signed_blinded * inverse(r, key.n) % key.n


def verify(signed, digest, key):
    """ True iff signed^e mod n equals FDH(digest) """
    if not 0 <= signed < key.n:
        return False
    return pow(signed, key.e, key.n) == fdh(digest, key.n)


# ---------------------------------------------------------------------
# enumeration helpers (toy moduli only)

def unit_group(modulus):
    """ every unit of Z_n, ascending """
    return [r for r in range(1, modulus) if GCD(r, modulus) == 1]


@functools.lru_cache(maxsize=8)
def _unit_powers(modulus, e):
    return tuple(pow(r, e, modulus) for r in unit_group(modulus))


def count_blinding_factors(blinded, digest, key):
    """
    Number of units r with blind(digest, r) == blinded

    With FDH(digest) a unit this is exactly 1 for any unit ``blinded``,
    so an observed blinded value supports every candidate digest equally.
    """
    m = fdh(digest, key.n)
    if not is_unit(m, key.n):
        return 0
    target = blinded * inverse(m, key.n) % key.n
    return _unit_powers(key.n, key.e).count(target)


def blinding_is_perfect(digest, key):
    """
    True iff {blind(digest, r) : r a unit} is the whole unit group, each
    element reached once. Enumerates every unit, so toy moduli only.
    """
    m = fdh(digest, key.n)
    if not is_unit(m, key.n):
        return False
    images = sorted(m * p % key.n for p in _unit_powers(key.n, key.e))
    return images == unit_group(key.n)


def explaining_factor(blinded, digest, key):
    """
    The blinding factor that turns ``digest`` into ``blinded``

    Needs the private key: r = (blinded / FDH(digest))^d mod n. Holders of
    the key can explain any observed blinded value with any digest.

    Returns
    -------
    int or None
        None when FDH(digest) or blinded is not a unit
    """
    m = fdh(digest, key.n)
    if not is_unit(m, key.n) or not is_unit(blinded, key.n):
        return None
    return pow(blinded * inverse(m, key.n) % key.n, key.d, key.n)


# ---------------------------------------------------------------------
# key files

def key_to_dict(key, private=True):
    configs = {'n': utils.int_to_hex(key.n), 'e': utils.int_to_hex(key.e)}
    if private and key.has_private:
        configs['d'] = utils.int_to_hex(key.d)
    return configs


def key_from_dict(configs):
    d = configs.get('d')
    return KeyPair(utils.hex_to_int(str(configs['n'])),
                   utils.hex_to_int(str(configs['e'])),
                   None if d is None else utils.hex_to_int(str(d)))


def save_key(key, filename, private=True):
    """
    Write a key file (YAML with hex fields n, e and, for private files, d)

    Parameters
    ----------
    key : KeyPair
    filename : str
    private : bool, optional
        if False the private exponent is left out
    """
    with open(filename, 'w') as f:
        yaml.dump(key_to_dict(key, private=private), f, default_flow_style=False)


def load_key(filename):
    with open(filename, 'r') as f:
        return key_from_dict(yaml.safe_load(f))
