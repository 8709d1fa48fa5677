"""Seeded random streams with documented, reproducible semantics.

A :class:`RngStream` is a counter-based SplitMix64 stream: the j-th raw
output of a stream seeded with ``s`` is ``mix64(s + (j+1)*GOLDEN)`` over
64-bit arithmetic, so the sequence is a pure function of the seed and the
draw position. Identical seeds give bit-identical sequences on every run.

Substreams are derived hash-style from (seed, index) alone — never from the
parent's cursor — which makes them cheap to fan out across parallel chunks:
chunk results depend only on which indices a chunk covers, not on execution
order. Parallel callers must use distinct derived streams; sharing one
stream across threads is not supported.
"""

from __future__ import annotations

from ._backend import kernel
from .errors import InvalidParameterError

_U64_MAX = (1 << 64) - 1


def _check_u64(value: int, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParameterError(f"{what} must be an integer, got {value!r}")
    if not 0 <= value <= _U64_MAX:
        raise InvalidParameterError(f"{what} must be in [0, 2**64), got {value}")
    return value


class RngStream:
    """A deterministic stream of random variates, identified by a 64-bit seed."""

    __slots__ = ("seed", "_pos")

    def __init__(self, seed: int = 0):
        self.seed = _check_u64(seed, "seed")
        self._pos = 0

    @property
    def position(self) -> int:
        """Number of raw 64-bit words consumed so far."""
        return self._pos

    def uniform(self) -> float:
        """Uniform deviate in the open interval (0, 1)."""
        value, self._pos = kernel.uniform_one(self.seed, self._pos)
        return value

    def normal(self) -> float:
        """Standard normal deviate."""
        value, self._pos = kernel.normal_one(self.seed, self._pos)
        return value

    def gamma(self, shape: float) -> float:
        """Standard gamma deviate, shape > 0."""
        if not shape > 0.0:
            raise InvalidParameterError(f"gamma shape must be > 0, got {shape}")
        value, self._pos = kernel.gamma_one(self.seed, self._pos, float(shape))
        return value

    def beta(self, alpha: float, beta: float) -> float:
        """Beta deviate via two gamma draws; always strictly inside (0, 1)."""
        value, self._pos = kernel.beta_one(self.seed, self._pos, float(alpha), float(beta))
        return value

    def binomial(self, n: int, theta: float) -> int:
        """Binomial count of successes out of n Bernoulli(theta) trials."""
        value, self._pos = kernel.binomial_one(self.seed, self._pos, int(n), float(theta))
        return int(value)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, position={self._pos})"


def derive_substream(rng: RngStream, index: int) -> RngStream:
    """Statistically independent stream derived from (seed, index).

    Deterministic in the pair alone: the parent's cursor does not matter,
    and deriving the same index twice gives the same stream.
    """
    _check_u64(index, "substream index")
    return RngStream(kernel.derive_key(rng.seed, index))
