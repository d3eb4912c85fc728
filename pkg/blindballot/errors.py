"""
Exceptions raised across blindballot.

Contract errors are special: the ledger commits the offending transaction
with a revert status and hands the exception back through the receipt.
"""


class BlindBallotError(Exception):
    """Base class for every blindballot error."""


# ------------------------------ crypto ------------------------------
class CryptoError(BlindBallotError):
    pass


class KeyBitsError(CryptoError, ValueError):
    pass


class NonUnit(CryptoError, ValueError):
    """A blinding factor with no inverse modulo n."""


class RefusalSentinel(CryptoError):
    """The organizer answered with 0 (the refusal value)."""


class MissingPrivateKey(CryptoError):
    pass


class SealingError(CryptoError):
    pass


# ------------------------------ ledger ------------------------------
class LedgerError(BlindBallotError):
    pass


class AuthFailure(LedgerError):
    pass


class ClockViolation(LedgerError):
    pass


class UnknownCall(LedgerError):
    pass


class DuplicateAccount(LedgerError):
    pass


class TranscriptParseError(LedgerError, ValueError):
    """A transcript line could not be parsed."""


class ReplayDivergence(LedgerError):
    """
    Replaying a log did not reproduce the recorded history.

    Parameters
    ----------
    index : int
        index of the first divergent transaction
    reason : str
        what disagreed
    """

    def __init__(self, index, reason):
        self.index = index
        self.reason = reason
        super().__init__('replay diverged at index {}: {}'.format(index, reason))


# ------------------------------ contract ------------------------------
class ContractError(BlindBallotError):
    pass


class BadParams(ContractError, ValueError):
    pass


class BadWindow(BadParams):
    pass


class Redeploy(ContractError):
    pass


class OutOfWindow(ContractError):
    pass


class ElectionOpen(ContractError):
    pass


class ResultSealed(ContractError):
    pass


class KeyMismatch(ContractError):
    pass


class NotSealed(ContractError):
    pass


class UnknownContract(ContractError):
    pass


# ------------------------------ actors ------------------------------
class ActorError(BlindBallotError):
    pass


class DuplicateAddress(ActorError, ValueError):
    pass


class SignRefused(ActorError):
    pass


class CheckFailed(ActorError):
    """The contract's signature check rejected the organizer's answer."""


class NoSignature(ActorError):
    pass


# ------------------------------ scenarios ------------------------------
class ScenarioError(BlindBallotError):
    pass


class ConfigInvalid(ScenarioError, ValueError):
    """
    A scenario config failed validation.

    Parameters
    ----------
    problems : list of str
        one diagnostic per offending field
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__('invalid scenario config: ' + '; '.join(self.problems))


class UnknownAttack(ScenarioError, KeyError):
    pass
