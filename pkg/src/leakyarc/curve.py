"""Planar open arcs in arc-length parametrization.

Every curve is a unit-speed map ``s -> Gamma(s)`` on the extended range
``[-margin, length + margin]``; the arc itself is ``s in [0, length]``.
Points are returned as arrays with a trailing axis of size 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy import optimize

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_COARSE_SCAN = 512
_CURVATURE_SAMPLES = 2048
_SAFETY = 1.1


class CurveError(ValueError):
    pass


class ClosedLoop(CurveError):
    pass


class TubeTooWide(CurveError):
    pass


@dataclass(frozen=True)
class Frame:
    tangent: np.ndarray
    normal: np.ndarray


def default_margin(length: float, kmax: float) -> float:
    if kmax <= 0:
        return 0.5 * length
    return min(0.5 * length, 0.4 / kmax)


def tube_halfwidth(beta):
    """Half-width a = 6 log(beta) / beta of the tubular neighbourhood."""
    return 6.0 * np.log(beta) / beta


def beta_floor(margin: float) -> float:
    """Smallest beta > e for which 6 log(beta)/beta < margin.

    6 log(b)/b peaks at b = e with value 6/e, so every beta is admissible
    once the margin exceeds that.
    """
    if margin > 6.0 / math.e:
        return 0.0
    return optimize.brentq(lambda b: tube_halfwidth(b) - margin, math.e, 1e12, xtol=1e-12)


def _golden_section(f, a, b, iters=64):
    """Vectorized golden-section search for minima of f on [a, b]; returns the final bracket."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        new = np.where(left, b - _GOLDEN * (b - a), a + _GOLDEN * (b - a))
        fnew = f(new)
        c, d = np.where(left, new, d), np.where(left, c, new)
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
    return a, b


class ArcCurve:
    """Base class; subclasses provide vectorized ``_point``, ``_tangent``, ``_curvature``."""

    kind: str = "arc"
    length: float
    margin: float

    # -- subclass hooks -------------------------------------------------
    def _point(self, s):
        raise NotImplementedError

    def _tangent(self, s):
        raise NotImplementedError

    def _curvature(self, s):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    # -- public surface -------------------------------------------------
    @property
    def extent(self) -> tuple[float, float]:
        return (-self.margin, self.length + self.margin)

    def _checked(self, s):
        s = np.asarray(s, dtype=float)
        lo, hi = self.extent
        slack = 1e-12 * (self.length + 2 * self.margin)
        if np.any(s < lo - slack) or np.any(s > hi + slack):
            raise CurveError(f"arc-length parameter outside [{lo}, {hi}]")
        return s

    def point(self, s):
        return self._point(self._checked(s))

    def tangent(self, s):
        return self._tangent(self._checked(s))

    def normal(self, s):
        tau = self.tangent(s)
        return np.stack([-tau[..., 1], tau[..., 0]], axis=-1)

    def curvature(self, s):
        return self._curvature(self._checked(s))

    def frame(self, s) -> Frame:
        return Frame(self.tangent(s), self.normal(s))

    def tubular_map(self, s, t):
        """Phi(s, t) = Gamma(s) + t n(s)."""
        t = np.asarray(t, dtype=float)
        kmax = self.max_curvature()
        if kmax > 0 and np.any(np.abs(t) * kmax >= 0.5):
            raise TubeTooWide(f"|t| must stay below 1/(2K) = {0.5 / kmax}")
        return self.point(s) + t[..., None] * self.normal(s)

    def max_curvature(self) -> float:
        lo, hi = self.extent
        s = np.linspace(lo, hi, _CURVATURE_SAMPLES)
        return float(np.max(np.abs(self._curvature(s))))

    def validate_tubular(self, a: float) -> bool:
        """True iff a K < 1/2 (with a 10% margin on K) and Phi is injective on sampled P(a)."""
        if a <= 0:
            raise CurveError("tube half-width must be positive")
        kmax = self.max_curvature()
        if a * _SAFETY * kmax >= 0.5:
            return False
        if a > self.margin:
            return False
        s = np.linspace(-a, self.length + a, 64)
        t = np.linspace(-a, a, 11)[1:-1]
        ss, tt = np.meshgrid(s, t, indexing="ij")
        ss, tt = ss.ravel(), tt.ravel()
        pts = self._point(ss) + tt[:, None] * np.stack(
            [-self._tangent(ss)[:, 1], self._tangent(ss)[:, 0]], axis=-1
        )
        dphi = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        dpar = np.hypot(ss[:, None] - ss[None, :], tt[:, None] - tt[None, :])
        far = dpar > 2.5 * max(s[1] - s[0], t[1] - t[0])
        return bool(np.all(dphi[far] > 0.05 * dpar[far]))

    def distance_to_arc(self, x) -> np.ndarray | float:
        """Distance from point(s) x to Gamma([0, L]); coarse scan plus golden-section refinement."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 1
        pts = x.reshape(-1, 2)
        sigma = np.linspace(0.0, self.length, _COARSE_SCAN)
        coarse = self._point(sigma)
        d2 = ((pts[:, None, :] - coarse[None, :, :]) ** 2).sum(-1)
        # candidate basins: the three smallest coarse local minima
        padded = np.pad(d2, ((0, 0), (1, 1)), constant_values=np.inf)
        is_min = (d2 <= padded[:, :-2]) & (d2 <= padded[:, 2:])
        ranked = np.where(is_min, d2, np.inf)
        ncand = min(3, _COARSE_SCAN)
        cand = np.argsort(ranked, axis=1)[:, :ncand]
        step = sigma[1] - sigma[0]
        lo = np.clip(sigma[cand] - step, 0.0, self.length)
        hi = np.clip(sigma[cand] + step, 0.0, self.length)
        rep = np.repeat(pts[:, None, :], ncand, axis=1)

        def f(u):
            return ((self._point(u) - rep) ** 2).sum(-1)

        a, b = _golden_section(f, lo, hi)
        u = 0.5 * (a + b)
        best = np.minimum(f(u), np.minimum(f(lo), f(hi)))
        dist = np.sqrt(best.min(axis=1))
        return float(dist[0]) if scalar else dist.reshape(x.shape[:-1])

    def nearest_parameter(self, x) -> np.ndarray:
        """Parameter sigma in [0, L] of the nearest arc point (same search as distance_to_arc)."""
        x = np.asarray(x, dtype=float).reshape(-1, 2)
        sigma = np.linspace(0.0, self.length, _COARSE_SCAN)
        coarse = self._point(sigma)
        d2 = ((x[:, None, :] - coarse[None, :, :]) ** 2).sum(-1)
        k = np.argmin(d2, axis=1)
        step = sigma[1] - sigma[0]
        a = np.clip(sigma[k] - step, 0.0, self.length)
        b = np.clip(sigma[k] + step, 0.0, self.length)

        def f(u):
            return ((self._point(u) - x) ** 2).sum(-1)

        a, b = _golden_section(f, a, b)
        return 0.5 * (a + b)

    def reversed(self) -> "ArcCurve":
        return ReversedArc(self)

    def polyline(self, n: int = 257, extended: bool = False) -> np.ndarray:
        """Rows (s, x, y, kappa) sampled uniformly on the arc (or its extension)."""
        lo, hi = self.extent if extended else (0.0, self.length)
        s = np.linspace(lo, hi, n)
        p = self._point(s)
        return np.column_stack([s, p[:, 0], p[:, 1], self._curvature(s)])

    def beta_floor(self) -> float:
        return beta_floor(self.margin)


@dataclass(frozen=True, eq=False)
class Segment(ArcCurve):
    length: float
    margin: float
    kind: str = field(default="segment", init=False)

    def _point(self, s):
        s = np.asarray(s, dtype=float)
        return np.stack([s, np.zeros_like(s)], axis=-1)

    def _tangent(self, s):
        s = np.asarray(s, dtype=float)
        return np.stack([np.ones_like(s), np.zeros_like(s)], axis=-1)

    def _curvature(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))

    def describe(self):
        return {"kind": "segment", "length": self.length, "margin": self.margin}


@dataclass(frozen=True, eq=False)
class CircularArc(ArcCurve):
    """Counterclockwise arc of the circle of given radius about the origin, starting at angle 0."""

    radius: float
    angle: float
    margin: float
    kind: str = field(default="circular_arc", init=False)

    @property
    def length(self):
        return self.radius * self.angle

    def _point(self, s):
        phi = np.asarray(s, dtype=float) / self.radius
        return self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def _tangent(self, s):
        phi = np.asarray(s, dtype=float) / self.radius
        return np.stack([-np.sin(phi), np.cos(phi)], axis=-1)

    def _curvature(self, s):
        return np.full_like(np.asarray(s, dtype=float), 1.0 / self.radius)

    def describe(self):
        return {"kind": "circular_arc", "radius": self.radius, "angle": self.angle, "margin": self.margin}


class ReversedArc(ArcCurve):
    """The same arc traversed from its far end: Gamma_r(s) = Gamma(L - s)."""

    def __init__(self, base: ArcCurve):
        self.base = base
        self.length = base.length
        self.margin = base.margin
        self.kind = base.kind

    def _point(self, s):
        return self.base._point(self.length - np.asarray(s, dtype=float))

    def _tangent(self, s):
        return -self.base._tangent(self.length - np.asarray(s, dtype=float))

    def _curvature(self, s):
        return -self.base._curvature(self.length - np.asarray(s, dtype=float))

    def describe(self):
        return {**self.base.describe(), "reversed": True}


def _central_diff(f, h):
    def df(u):
        return (f(u + h) - f(u - h)) / (2 * h)

    return df


def _central_diff2(f, h):
    def ddf(u):
        return (f(u + h) - 2 * f(u) + f(u - h)) / (h * h)

    return ddf


class ParametricArc(ArcCurve):
    """Arc-length reparametrization of a regular map u -> (x(u), y(u)).

    The cumulative length s(u) is tabulated on 256 u-panels with 20-point
    Gauss-Legendre; s -> u is inverted by Newton's method started from a
    monotone interpolant of the table.
    """

    kind = "parametric"
    _PANELS = 256

    def __init__(self, x, y, u_range, dx=None, dy=None, ddx=None, ddy=None,
                 margin=None, spec=None):
        u0, u1 = map(float, u_range)
        if not u1 > u0:
            raise CurveError("u-range must be increasing")
        self._x, self._y = x, y
        hu = 1e-5 * (u1 - u0)
        self._dx = dx or _central_diff(x, hu)
        self._dy = dy or _central_diff(y, hu)
        self._ddx = ddx or _central_diff2(x, 10 * hu)
        self._ddy = ddy or _central_diff2(y, 10 * hu)
        self.u_range = (u0, u1)
        self._spec = spec

        uu = np.linspace(u0, u1, _CURVATURE_SAMPLES)
        self._check_speed(uu)
        self.length = self._quad_length(u0, u1)
        kmax = float(np.max(np.abs(self._kappa_u(uu))))
        self.margin = float(margin) if margin is not None else default_margin(self.length, kmax)
        if self.margin <= 0:
            raise CurveError("margin must be positive")
        self._u_lo = self._extend(u0, -self.margin, -1.0)
        self._u_hi = self._extend(u1, self.margin, +1.0)
        self._check_speed(np.linspace(self._u_lo, self._u_hi, _CURVATURE_SAMPLES))
        self._tabulate()
        self._check_injective()

    # -- u-space geometry ------------------------------------------------
    def _speed(self, u):
        return np.hypot(self._dx(u), self._dy(u))

    def _kappa_u(self, u):
        xd, yd = self._dx(u), self._dy(u)
        return (xd * self._ddy(u) - self._ddx(u) * yd) / np.hypot(xd, yd) ** 3

    def _check_speed(self, u):
        sp = self._speed(u)
        if np.min(sp) <= 1e-8 * max(np.max(sp), 1e-300):
            raise CurveError("parametrization has vanishing speed")

    def _quad_length(self, a, b, panels=64):
        x, w = np.polynomial.legendre.leggauss(20)
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * np.diff(edges)
        nodes = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * x
        return float(((self._speed(nodes) * w).sum(1) * half).sum())

    def _extend(self, u_end, target, direction):
        sp = float(self._speed(np.float64(u_end)))
        guess = abs(target) / sp
        width = guess
        while self._quad_length(min(u_end, u_end + direction * width),
                                max(u_end, u_end + direction * width)) < abs(target):
            width *= 2.0
        g = lambda w: self._quad_length(min(u_end, u_end + direction * w),
                                        max(u_end, u_end + direction * w)) - abs(target)
        w = optimize.brentq(g, 0.0, width, xtol=1e-14, rtol=1e-15)
        return u_end + direction * w

    def _tabulate(self):
        lo, hi = self._u_lo, self._u_hi
        self._ub = np.linspace(lo, hi, self._PANELS + 1)
        gx, gw = np.polynomial.legendre.leggauss(20)
        self._gx, self._gw = gx, gw
        half = 0.5 * np.diff(self._ub)
        mid = 0.5 * (self._ub[1:] + self._ub[:-1])
        nodes = mid[:, None] + half[:, None] * gx[None, :]
        seg = (self._speed(nodes) * gw[None, :]).sum(1) * half
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        # shift so that s(u0) = 0
        self._sb = cum - self._s_from_table(np.array([self.u_range[0]]), cum)[0]

    def _s_from_table(self, u, cum):
        k = np.clip(np.searchsorted(self._ub, u, side="right") - 1, 0, self._PANELS - 1)
        a = self._ub[k]
        half = 0.5 * (u - a)
        nodes = (a + half)[..., None] + half[..., None] * self._gx
        part = (self._speed(nodes) * self._gw).sum(-1) * half
        return cum[k] + part

    def arclength(self, u):
        return self._s_from_table(np.asarray(u, dtype=float), self._sb)

    def parameter(self, s):
        """Inverse of arclength: u with s(u) = s."""
        s = np.asarray(s, dtype=float)
        u = np.interp(s, self._sb, self._ub)
        for _ in range(8):
            du = (self._s_from_table(u, self._sb) - s) / self._speed(u)
            u = np.clip(u - du, self._u_lo, self._u_hi)
            if np.all(np.abs(du) <= 1e-15 * (1.0 + np.abs(u))):
                break
        return u

    def _check_injective(self):
        s = np.linspace(-self.margin, self.length + self.margin, 512)
        p = self._point(s)
        h = s[1] - s[0]
        d = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
        idx = np.arange(len(s))
        apart = np.abs(idx[:, None] - idx[None, :]) >= 2
        if np.any(d[apart] < 0.5 * h):
            raise CurveError("self-intersection detected at sampling resolution")

    # -- arc-length hooks ------------------------------------------------
    def _point(self, s):
        u = self.parameter(s)
        return np.stack([self._x(u), self._y(u)], axis=-1)

    def _tangent(self, s):
        u = self.parameter(s)
        xd, yd = self._dx(u), self._dy(u)
        sp = np.hypot(xd, yd)
        return np.stack([xd / sp, yd / sp], axis=-1)

    def _curvature(self, s):
        return self._kappa_u(self.parameter(s))

    def describe(self):
        base = dict(self._spec) if self._spec else {"kind": "parametric"}
        base.setdefault("margin", self.margin)
        return base


def make_segment(length: float, margin: float | None = None) -> Segment:
    if not length > 0:
        raise CurveError("segment length must be positive")
    margin = default_margin(length, 0.0) if margin is None else float(margin)
    if margin <= 0:
        raise CurveError("margin must be positive")
    return Segment(float(length), margin)


def make_circular_arc(radius: float, angle: float, margin: float | None = None) -> CircularArc:
    if not radius > 0:
        raise CurveError("radius must be positive")
    if angle >= 2 * math.pi:
        raise ClosedLoop("opening angle must stay below 2*pi for an open arc")
    if not angle > 0:
        raise CurveError("opening angle must be positive")
    length = radius * angle
    if margin is None:
        margin = default_margin(length, 1.0 / radius)
        # keep the extended arc from closing up
        margin = min(margin, 0.45 * (2 * math.pi - angle) * radius)
    margin = float(margin)
    if margin <= 0 or angle + 2 * margin / radius >= 2 * math.pi:
        raise CurveError("margin incompatible with an injective extension")
    return CircularArc(float(radius), float(angle), margin)


def make_parametric(x, y, u_range, dx=None, dy=None, ddx=None, ddy=None,
                    margin=None) -> ParametricArc:
    """Arc-length reparametrization of a user map; derivatives default to central differences."""
    return ParametricArc(x, y, u_range, dx, dy, ddx, ddy, margin)


def make_polynomial(x_coeffs, y_coeffs, u_range, margin=None) -> ParametricArc:
    """Parametric arc with polynomial components (coefficients in increasing degree)."""
    px, py = Polynomial(x_coeffs), Polynomial(y_coeffs)
    spec = {"kind": "parametric", "x": [float(c) for c in x_coeffs],
            "y": [float(c) for c in y_coeffs], "u_range": [float(u) for u in u_range]}
    if margin is not None:
        spec["margin"] = float(margin)
    return ParametricArc(px, py, u_range, px.deriv(), py.deriv(), px.deriv(2), py.deriv(2),
                         margin, spec)


# functional aliases
def curvature(c: ArcCurve, s):
    return c.curvature(s)


def frame(c: ArcCurve, s) -> Frame:
    return c.frame(s)


def tubular_map(c: ArcCurve, s, t):
    return c.tubular_map(s, t)


def distance_to_arc(c: ArcCurve, x):
    return c.distance_to_arc(x)


def max_curvature(c: ArcCurve) -> float:
    return c.max_curvature()


def validate_tubular(c: ArcCurve, a: float) -> bool:
    return c.validate_tubular(a)
