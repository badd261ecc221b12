"""Income-driven payment schedules built from borrower inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .model import DomainError, PaymentBounds


@dataclass(frozen=True)
class BorrowerProfile:
    """Borrower income data from which the payment band is derived.

    Payments are fractions of income above subsistence; income and the
    subsistence level share a common growth rate.  Currency in thousands
    per year.
    """

    annual_income: float
    subsistence: float
    growth: float
    f_min: float
    f_max: float

    def __post_init__(self) -> None:
        if self.annual_income <= self.subsistence:
            raise DomainError(
                "income does not exceed subsistence: the income-driven minimum "
                "payment would be zero"
            )
        if not (0.0 < self.f_min < self.f_max):
            raise ValueError(
                f"payment fractions must satisfy 0 < f_min < f_max, "
                f"got {self.f_min}, {self.f_max}"
            )

    @property
    def discretionary(self) -> float:
        return self.annual_income - self.subsistence


def bounds_from_profile(profile: BorrowerProfile, horizon: float) -> PaymentBounds:
    """Payment band m(t) = f_min * (income - subsistence) * e^{g t}, M(t) likewise."""
    return PaymentBounds.exponential(
        base_min=profile.f_min * profile.discretionary,
        base_max=profile.f_max * profile.discretionary,
        growth=profile.growth,
        horizon=horizon,
    )
