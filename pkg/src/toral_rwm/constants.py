"""Reference constants of the random wave model."""

import math
from dataclasses import dataclass

from scipy.special import jn_zeros

J0_FIRST_ZERO = float(jn_zeros(0, 1)[0])


@dataclass(frozen=True)
class RwmConstants:
    # percolation prediction for lim 4 pi N / eigenvalue
    sigma: float = (3 * math.sqrt(3) - 5) / math.pi
    # Pleijel upper bound (2 / j0)^2
    pleijel: float = (2 / J0_FIRST_ZERO) ** 2
    # horizontal-tangency upper bound
    tangency: float = 1 / (math.sqrt(2) * math.pi)

    @property
    def nu_bar(self) -> float:
        return self.sigma / (4 * math.pi)


CONSTANTS = RwmConstants()
