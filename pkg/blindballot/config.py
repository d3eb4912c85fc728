"""
Directories, defaults and environment overrides for blindballot.

Run outputs (transcripts and reports) go to ~/.blindballot/runs unless a
scenario config names its own out_dir.
"""
import os
import logging

import colorama

home = os.path.join(os.path.expanduser("~"), '.blindballot')
runs_path = os.path.join(home, 'runs')

if not os.path.exists(runs_path):
    os.makedirs(runs_path)

SEED_ENV = 'BLINDBALLOT_SEED'
LOG_ENV = 'BLINDBALLOT_LOG'


class Defaults():
    def __init__(self, **kwds):
        self.__dict__.update(kwds)


defaults = Defaults(key_bits=512,
                    sealing_bits=1024,
                    chances=1,
                    seed=0,
                    # moduli below this are small enough to enumerate every unit
                    enumeration_limit=2 ** 16,
                    forgery_attempts=1000,
                    # quantile of the blind-guessing baseline used by the forge attack
                    guess_quantile=0.999)


def seed_override(seed):
    """ return the seed from the environment if BLINDBALLOT_SEED is set

    Parameters
    ----------
    seed : int
        the seed found in the scenario config

    Returns
    -------
    int
    """
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == '':
        return seed
    return int(env, 0)


_level_colors = {'DEBUG': colorama.Fore.CYAN,
                 'INFO': colorama.Fore.GREEN,
                 'WARNING': colorama.Fore.YELLOW,
                 'ERROR': colorama.Fore.RED,
                 'CRITICAL': colorama.Fore.RED + colorama.Style.BRIGHT}


class ColorFormatter(logging.Formatter):
    """ colours the level name; everything else is plain text """

    def format(self, record):
        color = _level_colors.get(record.levelname, '')
        record.levelcolor = f'{color}{record.levelname}{colorama.Style.RESET_ALL}'
        return super().format(record)


def setup_logging(level=None):
    """ install one stderr handler on the blindballot logger

    Parameters
    ----------
    level : str or int, optional
        defaults to $BLINDBALLOT_LOG, then WARNING
    """
    if level is None:
        level = os.environ.get(LOG_ENV, 'WARNING')
    if isinstance(level, str):
        level = level.upper()
    logger = logging.getLogger('blindballot')
    logger.setLevel(level)
    if not any(getattr(h, '_blindballot', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(ColorFormatter('%(levelcolor)s %(name)s: %(message)s'))
        handler._blindballot = True
        logger.addHandler(handler)
    return logger
