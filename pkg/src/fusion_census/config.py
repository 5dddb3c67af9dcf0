"""Enumeration caps.

The oracle caps can be overridden for a whole process with the
``FUSION_CENSUS_CAP`` environment variable (a positive integer); it replaces
every oracle cap at once. Exceeding a cap raises
:class:`~fusion_census.errors.ResourceError`, never a silent skip.
"""

import os

from .errors import DomainError

ELEMENT_CAP = 10**6
ORTH_CAP = 10**4        # bound on |A|^2 for orthogonal-group / Lagrangian scans
HOM_SCAN_CAP = 10**8    # bound on |Hom(A, A*)| for gamma scans
EXHAUSTIVE_CHECK_CAP = 10**4


def _env_cap():
    raw = os.environ.get("FUSION_CENSUS_CAP")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"FUSION_CENSUS_CAP must be an integer, got {raw!r}")
    if value <= 0:
        raise DomainError("FUSION_CENSUS_CAP must be positive")
    return value


def oracle_cap(default):
    """The cap to use for an oracle scan whose built-in limit is ``default``."""
    env = _env_cap()
    return default if env is None else env
