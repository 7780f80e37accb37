"""The parameter triple (m, n, t) shared by all object families.

m is the block-divisibility parameter, n the size parameter (the ground set
is {1, ..., m*n}), and t the number of initially separated elements.
"""

from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True, order=True)
class Params:
    """Immutable, validated parameter triple with m >= 1 and 1 <= t <= n."""

    m: int
    n: int
    t: int

    def __post_init__(self):
        for name, value in (("m", self.m), ("n", self.n), ("t", self.t)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.m < 1:
            raise ParameterError(f"m must be at least 1, got {self.m}")
        if self.n < 1:
            raise ParameterError(f"n must be at least 1, got {self.n}")
        if not 1 <= self.t <= self.n:
            raise ParameterError(
                f"t must satisfy 1 <= t <= n, got t={self.t} with n={self.n}"
            )

    @property
    def ground_size(self) -> int:
        """Size of the partitioned set, m*n."""
        return self.m * self.n

    @property
    def max_rank(self) -> int:
        """Top rank n - t of the refinement order."""
        return self.n - self.t
