"""Conversions between parameter-space cells and image lines."""

import math
from dataclasses import dataclass

__all__ = [
    "LineModel",
    "WrapInfo",
    "PeakCell",
    "slope_range",
    "intercept_range",
    "peak_to_line",
    "line_to_peak",
    "wrap_slope",
    "wrap_intercept",
    "same_geometry",
    "line_to_rho_theta",
    "angle_of",
]


@dataclass(frozen=True)
class LineModel:
    """A line ``y = slope x + intercept`` or, when ``inverse``,
    ``x = slope y + intercept`` (centered pixel coordinates)."""

    slope: float
    intercept: float
    inverse: bool = False

    @property
    def group(self):
        """1 for ``|k| <= 1`` (slope form in ``(-1, 1]``), else 2."""
        if self.inverse:
            return 2 if -1.0 <= self.slope < 1.0 else 1
        return 1 if -1.0 < self.slope <= 1.0 else 2

    def as_inverse(self):
        """Same line in the other form; ``None`` if that form is singular."""
        if self.slope == 0:
            return None
        return LineModel(1.0 / self.slope, -self.intercept / self.slope, not self.inverse)

    def direction(self):
        """Unit direction vector ``(dx, dy)``."""
        if self.inverse:
            d = (self.slope, 1.0)
        else:
            d = (1.0, self.slope)
        r = math.hypot(*d)
        return d[0] / r, d[1] / r

    def point(self):
        """The point where the line meets its intercept axis."""
        return (self.intercept, 0.0) if self.inverse else (0.0, self.intercept)


@dataclass(frozen=True)
class WrapInfo:
    """``value = multiplicity * period + wrapped_value``."""

    multiplicity: int
    wrapped_value: float
    period: float

    def unwrap(self):
        return self.multiplicity * self.period + self.wrapped_value


@dataclass(frozen=True)
class PeakCell:
    """Centered cell ``(m, n)`` of a parameter space.

    In the regular space ``m`` indexes slope and ``n`` the y-intercept; in
    the inverse space ``m`` is the x-intercept and ``n`` indexes inverse
    slope.
    """

    space: str
    m: int
    n: int
    brightness: float = 0.0


def _centered_range(length):
    return -(length // 2), (length - 1) // 2


def slope_range(space, width, height):
    """Inclusive range of the slope-axis index for an image of ``width x height``."""
    return _centered_range(width if space == "regular" else height)


def intercept_range(space, width, height):
    """Inclusive range of the intercept-axis index (expanded length)."""
    if space == "regular":
        return _centered_range(height + 2 * (-(-width // 2)))
    return _centered_range(width + 2 * (-(-height // 2)))


def _check(value, lo, hi, what):
    if not lo <= value <= hi:
        raise ValueError(f"{what} index {value} outside [{lo}, {hi}]")


def peak_to_line(cell, width, height):
    """Decode a peak cell of a ``width x height`` image into a line.

    Regular space: ``k = 2 m / W``, ``b_y = n``.  Inverse space:
    ``1/k = 2 n / H``, ``b_x = m``.  The slope axis is periodic, so for even
    ``W`` the cell ``m = -W/2`` stands for ``k = +1``, keeping the regular
    slope range ``(-1, 1]``; the inverse range stays ``[-1, 1)``.
    """
    if cell.space == "regular":
        _check(cell.m, *slope_range("regular", width, height), "slope")
        _check(cell.n, *intercept_range("regular", width, height), "intercept")
        m = cell.m
        if width % 2 == 0 and m == -width // 2:
            m = width // 2
        return LineModel(2.0 * m / width, float(cell.n), inverse=False)
    if cell.space == "inverse":
        _check(cell.n, *slope_range("inverse", width, height), "inverse slope")
        _check(cell.m, *intercept_range("inverse", width, height), "intercept")
        return LineModel(2.0 * cell.n / height, float(cell.m), inverse=True)
    raise ValueError(f"unknown space {cell.space!r}")


def line_to_peak(line, width, height):
    """Nearest cell at which ``line`` peaks, slope wrapped onto the periodic axis.

    Returns ``None`` when the intercept falls outside the expanded space.
    """
    space = "inverse" if line.inverse else "regular"
    n_slope = width if space == "regular" else height
    lo, hi = slope_range(space, width, height)
    s = int(round(line.slope * n_slope / 2.0))
    s = (s - lo) % n_slope + lo
    b = int(round(line.intercept))
    blo, bhi = intercept_range(space, width, height)
    if not blo <= b <= bhi:
        return None
    if space == "regular":
        return PeakCell(space, s, b)
    return PeakCell(space, b, s)


def _wrap(value, period):
    # value = p * period + r with r in (-period/2, period/2]
    p = math.ceil(value / period - 0.5)
    r = value - p * period
    if r <= -period / 2:
        p -= 1
        r += period
    elif r > period / 2:
        p += 1
        r -= period
    return p, r


def wrap_slope(k):
    """Write ``k = 2 q + k~`` with ``k~`` in ``(-1, 1]``."""
    if not math.isfinite(k):
        raise ValueError("slope must be finite")
    q, r = _wrap(k, 2.0)
    return WrapInfo(q, r, 2.0)


def wrap_intercept(b, n):
    """Write ``b = n p + b~`` with ``b~`` in ``(-n/2, n/2]``."""
    if not math.isfinite(b) or n <= 0:
        raise ValueError("intercept must be finite and the period positive")
    p, r = _wrap(b, float(n))
    return WrapInfo(p, r, float(n))


def line_to_rho_theta(line):
    """Normal form ``rho = x cos(theta) + y sin(theta)``, theta in degrees in [0, 180)."""
    if line.inverse:
        # x - k y = b  ->  normal (1, -k)
        nx, ny, c = 1.0, -line.slope, line.intercept
    else:
        # y - k x = b  ->  normal (-k, 1)
        nx, ny, c = -line.slope, 1.0, line.intercept
    r = math.hypot(nx, ny)
    nx, ny, rho = nx / r, ny / r, c / r
    theta = math.degrees(math.atan2(ny, nx))
    if theta < 0 or theta >= 180.0:
        theta = (theta + 180.0) % 360.0
        rho = -rho
    if theta >= 180.0:
        # a tiny negative angle can round to exactly 180 above
        theta -= 180.0
        rho = -rho
    # + 0.0 turns a negative zero into 0.0
    return rho + 0.0, theta + 0.0


def same_geometry(a, b, tol_angle=2.0, tol_offset=3.0):
    """Whether two line models describe (nearly) the same image line.

    Compares orientations modulo 180 degrees and the signed offsets of the
    lines from the image center.
    """
    rho_a, th_a = line_to_rho_theta(a)
    rho_b, th_b = line_to_rho_theta(b)
    d = abs(th_a - th_b)
    if d > 90.0:
        # normals point opposite ways across the 0/180 seam
        d = 180.0 - d
        rho_b = -rho_b
    return d <= tol_angle and abs(rho_a - rho_b) <= tol_offset


def angle_of(line: LineModel) -> float:
    """Direction angle in degrees, in ``[0, 180)``."""
    dx, dy = line.direction()
    return math.degrees(math.atan2(dy, dx)) % 180.0

