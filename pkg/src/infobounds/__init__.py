"""Information-theoretic bounds on learning and estimation.

Modules: ``concentration`` (subgaussian tails), ``metric_entropy`` (covering
and packing numbers), ``learning`` (ERM, Rademacher and VC tools),
``info_gen`` (mutual-information, Gibbs and PAC-Bayes bounds), ``minimax``
(Fano lower bounds) and ``verify`` (invariant-check suites).
"""

__version__ = "0.1.0"

from . import concentration, info_gen, learning, metric_entropy, minimax  # noqa: F401
from .errors import (  # noqa: F401
    BoundsError,
    CapabilityError,
    CertificationError,
    ConfigurationError,
    DomainError,
    SizeError,
)
