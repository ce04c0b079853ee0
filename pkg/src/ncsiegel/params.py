from dataclasses import dataclass
from fractions import Fraction

from . import _reals

# smallest exponent the iteration accepts; anything at or below 2/7 is raised to this
MU_FLOOR = Fraction(3, 10)


def as_fraction(x):
    """Exact rational from int, Fraction, mpq, decimal string or float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") \
        else Fraction(x)


@dataclass(frozen=True)
class SiegelParams:
    """Small-divisor constants: ``|lambda^I - lambda_j| >= c (N/2)**(-mu)``.

    ``mu = 0`` is allowed so degenerate fits can be represented; the
    linearization driver raises ``mu`` to :data:`MU_FLOOR` when it is at or
    below 2/7.
    """

    c: Fraction
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "mu", as_fraction(self.mu))
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")

    @property
    def C_sigma(self):
        """Divisor-reciprocal constant: ``1/|lambda^I - lambda_j| <= C_sigma (N/2)**mu``."""
        return 1 / self.c

    @property
    def mu_eff(self):
        return self.mu if self.mu > Fraction(2, 7) else MU_FLOOR

    def seven_mu_power(self):
        """``(7 mu)**mu`` for the effective exponent, as an interval."""
        mu = _reals.interval(self.mu_eff)
        return (7 * mu) ** mu

    def to_json(self):
        return {"c": str(self.c), "mu": str(self.mu), "C_sigma": str(self.C_sigma),
                "mu_effective": str(self.mu_eff)}
