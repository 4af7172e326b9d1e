"""Exception types shared across the toolkit."""


class CapacityError(RuntimeError):
    """A contact plan cannot carry the requested payload.

    ``shortfall_bits`` is the number of bits left over after every window
    in the plan has been filled.
    """

    def __init__(self, shortfall_bits: float):
        self.shortfall_bits = float(shortfall_bits)
        super().__init__(
            f"contact plan capacity insufficient: {self.shortfall_bits:.0f} bits short"
        )


class EstimationError(RuntimeError):
    """Geometry estimation failed (too few or degenerate correspondences)."""
