"""Random Hyperbolic Block Model toolkit.

Calibrates latent fitnesses and block forces against target degree and
group-mixing constraints, samples graphs from the resulting edge
probabilities, and evaluates how well sphere embeddings reproduce the target
mesoscale structure. The heavy lifting lives in the compiled `_core` module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
