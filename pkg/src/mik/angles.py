"""Exact and high-precision angles on the unit circle.

Rational multiples of pi are kept as exact fractions of pi.  Everything else
is carried as a decimal string and evaluated with mpmath on demand; an angle
is only ever treated as irrational because the caller said so.
"""

from fractions import Fraction
import math

import mpmath

from .errors import DomainError, PrecisionError

# Working precision in bits for irrational angles.
DEFAULT_PREC = 256
# Distance below which a fractional part is considered too close to an integer.
BOUNDARY_GUARD = mpmath.mpf("1e-20")
# Digits used to identify irrational angles with each other.
_KEY_DIGITS = 40


_working_prec = [DEFAULT_PREC]


def set_precision(bits):
    """Change the working precision (in bits) used by contexts created without an explicit one."""
    bits = int(bits)
    if bits < 128:
        raise DomainError(f"working precision must be at least 128 bits, got {bits}")
    _working_prec[0] = bits


def working_precision():
    return _working_prec[0]


_contexts = {}


def make_context(prec=None):
    """A shared mpmath context at ``prec`` bits (default: the working precision).

    Contexts are cached per precision; callers must not change their precision.
    """
    prec = prec or _working_prec[0]
    ctx = _contexts.get(prec)
    if ctx is None:
        ctx = _contexts[prec] = mpmath.MPContext()
        ctx.prec = prec
    return ctx


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Angle:
    """An angle theta in (0, 2*pi).

    Use :meth:`rational` for theta = (p/q)*pi and :meth:`irrational` for a
    value declared to be an irrational multiple of pi.
    """

    __slots__ = ("over_pi", "text", "_key", "_conj")

    def __init__(self, over_pi=None, text=None):
        if (over_pi is None) == (text is None):
            raise ValueError("give exactly one of over_pi or text")
        if over_pi is not None:
            over_pi = _as_fraction(over_pi)
            if not 0 < over_pi < 2:
                raise DomainError(f"theta/pi = {over_pi} is outside (0, 2)")
        else:
            text = str(text).strip()
            ctx = make_context()
            value = ctx.mpf(text)
            if not 0 < value < 2 * ctx.pi:
                raise DomainError(f"theta = {text} is outside (0, 2*pi)")
        object.__setattr__(self, "over_pi", over_pi)
        object.__setattr__(self, "text", text)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_conj", None)

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")

    def __reduce__(self):
        return (Angle, (self.over_pi, self.text))

    @classmethod
    def rational(cls, num, den=1):
        return cls(over_pi=Fraction(num, den))

    @classmethod
    def irrational(cls, value):
        """Angle from a decimal string (radians), flagged irrational."""
        if not isinstance(value, str):
            value = mpmath.nstr(value, 70, strip_zeros=False) if isinstance(
                value, mpmath.mpf) else repr(value)
        return cls(text=value)

    @classmethod
    def from_turns(cls, turns, prec=DEFAULT_PREC):
        """Irrational angle 2*pi*turns with turns in (0, 1), rendered at ``prec``."""
        ctx = make_context(prec + 32)
        v = 2 * ctx.pi * ctx.mpf(turns)
        return cls(text=ctx.nstr(v, int(prec * 0.30103) + 5, strip_zeros=False))

    @property
    def is_rational(self):
        return self.over_pi is not None

    def value(self, ctx=None):
        """theta as an mpf in ``ctx`` (defaults to a fresh 256-bit context)."""
        ctx = ctx or make_context()
        if self.over_pi is not None:
            return ctx.pi * self.over_pi.numerator / self.over_pi.denominator
        return ctx.mpf(self.text)

    def __float__(self):
        if self.over_pi is not None:
            return math.pi * float(self.over_pi)
        return float(self.text)

    def conjugate(self):
        """The angle 2*pi - theta (eigenvalue e^{-i theta})."""
        if self._conj is None:
            if self.over_pi is not None:
                conj = Angle(over_pi=2 - self.over_pi)
            else:
                digits = max(len(self.text), 70)
                ctx = make_context(int(digits * 3.33) + 64)
                v = 2 * ctx.pi - ctx.mpf(self.text)
                conj = Angle(text=ctx.nstr(v, digits, strip_zeros=False))
            object.__setattr__(self, "_conj", conj)
        return self._conj

    @property
    def key(self):
        if self._key is None:
            if self.over_pi is not None:
                key = ("q", self.over_pi)
            else:
                ctx = make_context()
                key = ("r", ctx.nstr(ctx.mpf(self.text), _KEY_DIGITS))
            object.__setattr__(self, "_key", key)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Angle) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.over_pi is not None:
            return f"Angle({self.over_pi}*pi)"
        return f"Angle({self.text[:20]}{'...' if len(self.text) > 20 else ''})"

    # -- iteration arithmetic ------------------------------------------------

    def turns_times(self, m, ctx=None):
        """m*theta/(2*pi): a Fraction for rational angles, else an mpf."""
        if self.over_pi is not None:
            return m * self.over_pi / 2
        ctx = ctx or make_context()
        return m * ctx.mpf(self.text) / (2 * ctx.pi)

    def ceil_turns(self, m):
        """E(m*theta/(2*pi)) with E the integer ceiling.

        Irrational angles are evaluated at working precision; a value within
        1e-20 of an integer triggers one retry at four times the precision and
        then a PrecisionError.
        """
        if self.over_pi is not None:
            return -((-m * self.over_pi.numerator) // (2 * self.over_pi.denominator))
        return _guarded(self, m, 2, ceil=True)

    def floor_over_pi(self, m):
        """[m*theta/pi] (integer part)."""
        if self.over_pi is not None:
            return (m * self.over_pi.numerator) // self.over_pi.denominator
        return _guarded(self, m, 1, ceil=False)

    def frac_over_pi(self, m, ctx=None):
        """{m*theta/pi} as Fraction (rational) or mpf (irrational)."""
        if self.over_pi is not None:
            x = m * self.over_pi
            return x - (x.numerator // x.denominator)
        ctx = ctx or make_context()
        x = m * ctx.mpf(self.text) / ctx.pi
        return x - ctx.floor(x)

    def root_order(self):
        """Least q >= 1 with e^{i q theta} = 1, or None when irrational."""
        if self.over_pi is None:
            return None
        return (self.over_pi / 2).denominator


def _guarded(angle, m, div, ceil):
    # m*theta/(div*pi) rounded, refusing to decide near an integer boundary
    prec = DEFAULT_PREC
    for _ in range(2):
        ctx = make_context(prec)
        x = m * ctx.mpf(angle.text) / (div * ctx.pi)
        nearest = ctx.nint(x)
        if abs(x - nearest) >= BOUNDARY_GUARD:
            return int(ctx.ceil(x)) if ceil else int(ctx.floor(x))
        prec *= 4
    raise PrecisionError(
        f"m*theta/{div}pi is within 1e-20 of an integer for m={m}, theta={angle!r}")


ONE = 1
MINUS_ONE = -1


def circle_key(omega):
    """Canonical key of a unit-circle point given as 1, -1 or an Angle."""
    if isinstance(omega, Angle):
        if omega.over_pi == 1:
            return ("q", Fraction(1))
        return omega.key
    if omega == 1:
        return ("q", Fraction(0))
    if omega == -1:
        return ("q", Fraction(1))
    raise DomainError(f"unit-circle point must be 1, -1 or an Angle, got {omega!r}")


def conjugate_point(omega):
    if isinstance(omega, Angle) and omega.over_pi != 1:
        return omega.conjugate()
    return omega


def point_value(omega, ctx=None):
    """Argument of a unit-circle point in [0, 2*pi)."""
    ctx = ctx or make_context()
    if isinstance(omega, Angle):
        return omega.value(ctx)
    if omega == 1:
        return ctx.mpf(0)
    if omega == -1:
        return +ctx.pi
    raise DomainError(f"unit-circle point must be 1, -1 or an Angle, got {omega!r}")
