"""Working-precision configuration shared by every numeric routine."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import mpmath

DEFAULT_DIGITS = 40
FLOAT_DIGITS = 15


@lru_cache(maxsize=None)
def _context(digits: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


@dataclass(frozen=True)
class PrecisionConfig:
    """Decimal digits to carry, or machine floats when ``fast_mode`` is set."""

    digits: int = DEFAULT_DIGITS
    fast_mode: bool = False

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < FLOAT_DIGITS:
            raise ValueError(f"digits must be an integer >= {FLOAT_DIGITS}, got {self.digits!r}")

    @property
    def ctx(self):
        if self.fast_mode:
            return mpmath.fp
        return _context(self.digits)

    @property
    def effective_digits(self) -> int:
        return FLOAT_DIGITS if self.fast_mode else self.digits

    def extended(self, extra: int) -> "PrecisionConfig":
        """Same mode with ``extra`` guard digits (ignored for floats)."""
        if self.fast_mode:
            return self
        return replace(self, digits=self.digits + extra)

    def tolerance(self, slack: int = 0) -> float:
        """Relative tolerance ``10**(slack - digits)``.

        Float mode loses a few digits to cancellation, so it gets four
        digits of extra slack.
        """
        if self.fast_mode:
            return 10.0 ** (slack - FLOAT_DIGITS + 4)
        return 10.0 ** (slack - self.digits)


DEFAULT = PrecisionConfig()


def as_config(prec) -> PrecisionConfig:
    """Accept a config, a digit count, or None."""
    if prec is None:
        return DEFAULT
    if isinstance(prec, PrecisionConfig):
        return prec
    if isinstance(prec, int):
        return PrecisionConfig(prec)
    raise TypeError(f"expected PrecisionConfig or int, got {type(prec).__name__}")
