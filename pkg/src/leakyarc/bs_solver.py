"""Birman-Schwinger discretization for the delta interaction on an open arc.

E < 0 is a bound state of -Laplace - beta delta_gamma exactly when 1/beta is an
eigenvalue of the single-layer operator with kernel (1/2pi) K0(sqrt(-E)|x-y|)
on gamma.  The operator is discretized by Nystrom product integration:

* gamma is cut into Gauss-Legendre panels, graded geometrically toward both
  endpoints where the density has a boundary layer of width ~1/beta;
* the density is the panel-wise Lagrange interpolant of its nodal values;
* panels closer to a target than their own width are integrated with a
  graded rule clustered at the nearest point, which resolves the log
  singularity of K0; all other panels use their Gauss nodes directly.

The collocation matrix A is similarity-scaled by the Gauss weights,
Q = W^1/2 A W^-1/2.  Q itself is only symmetric up to the near-field
corrections, so eigenpairs of its symmetric part are polished on Q.
Everything geometric is cached in :class:`Discretization`; only the kernel
values change with E.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .curve import ArcCurve, tube_halfwidth
from .specfun import k0, k1

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

ORDER = 16          # Gauss-Legendre nodes per panel
GRADING = 8         # dyadic refinement levels toward each endpoint
_SUB_ORDER = 12     # nodes per sub-interval of the near rule
_RATIO = 0.3        # geometric ratio of the near rule
_MAX_LEVELS = 10
_NEAR = 1.0         # a panel is near when closer than NEAR * its width
_BRACKET_WIDEN = 1.2
_E_TOP = -1e-8


class BsError(RuntimeError):
    pass


class EssentialSpectrum(BsError):
    pass


class NoSuchLevel(BsError):
    pass


class NonMonotoneDetected(BsError):
    pass


class TooCloseToArc(BsError):
    pass


def min_nodes(grading: int = GRADING) -> int:
    return ORDER * (2 * (grading + 1) + 2)


def default_nodes(beta: float, length: float, grading: int = GRADING) -> int:
    """Node count whose interior panels are about 6/kappa wide at the bottom of the bracket."""
    kappa = 0.5 * _BRACKET_WIDEN ** 0.5 * (beta + max(math.log(beta), 0.0))
    interior = max(4, math.ceil(kappa * length / 6.0))
    return ORDER * (interior + 2 * (grading + 1))


# ---------------------------------------------------------------------------
# mesh and near-field quadrature


def _panel_breaks(length: float, n_panels: int, grading: int) -> np.ndarray:
    graded = 2 * (grading + 1)
    interior = n_panels - graded
    if interior < 1:
        raise BsError(f"need at least {graded + 1} panels, got {n_panels}")
    h = length / (interior + 2)
    end = [h * 2.0 ** -grading] + [h * 2.0 ** -k for k in range(grading, 0, -1)]
    widths = np.array(end + [h] * interior + end[::-1])
    breaks = np.concatenate([[0.0], np.cumsum(widths)])
    breaks[-1] = length
    return breaks


def _bary_weights(x):
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / diff.prod(axis=1)


def _lagrange(xi, nodes, bw):
    """Values of all Lagrange basis polynomials at local coordinates xi, shape (len(xi), p)."""
    diff = xi[:, None] - nodes[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = bw[None, :] / diff
    out = terms / terms.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if np.any(hit):
        out[hit] = exact[hit].astype(float)
    return out


def _side_rule(ell: float, dist: float, wmax: float):
    """Offsets in [0, ell] and weights clustering at offset 0, where the kernel
    singularity sits at perpendicular distance ``dist``."""
    gx, gw = np.polynomial.legendre.leggauss(_SUB_ORDER)
    floor = max(0.5 * dist, ell * _RATIO ** _MAX_LEVELS)
    levels = 0 if floor >= ell else min(_MAX_LEVELS, math.ceil(math.log(floor / ell) / math.log(_RATIO)))
    edges = ell * _RATIO ** np.arange(levels + 1)
    offs, wts = [], []
    for hi, lo in zip(edges[:-1], edges[1:]):
        pieces = max(1, math.ceil((hi - lo) / wmax))
        sub = np.linspace(lo, hi, pieces + 1)
        for a, b in zip(sub[:-1], sub[1:]):
            offs.append(0.5 * (a + b) + 0.5 * (b - a) * gx)
            wts.append(0.5 * (b - a) * gw)
    inner = edges[-1]
    # innermost piece: substitution offset = inner * v^3 removes the log endpoint singularity
    pieces = max(1, math.ceil(inner / wmax))
    for k in range(pieces):
        if k == 0:
            v = 0.5 * (gx + 1.0)
            a = inner / pieces
            offs.append(a * v ** 3)
            wts.append(a * 3.0 * v ** 2 * 0.5 * gw)
        else:
            a, b = inner * k / pieces, inner * (k + 1) / pieces
            offs.append(0.5 * (a + b) + 0.5 * (b - a) * gx)
            wts.append(0.5 * (b - a) * gw)
    return np.concatenate(offs), np.concatenate(wts)


@dataclass
class NearField:
    """Flat product-integration data for (target, panel) pairs needing special quadrature."""

    target: np.ndarray       # (npairs,) target index
    panel: np.ndarray        # (npairs,) panel index
    starts: np.ndarray       # (npairs,) offsets into the flat arrays
    r: np.ndarray            # (nflat,) target-to-source distances
    wl: np.ndarray           # (nflat, ORDER) quadrature weight times Lagrange value

    def integrate(self, kernel) -> np.ndarray:
        """Per pair, the ORDER weights int kernel(r) l_j(sigma) d sigma."""
        return np.add.reduceat(kernel(self.r)[:, None] * self.wl, self.starts, axis=0)


@dataclass
class Discretization:
    curve: ArcCurve
    n_panels: int
    grading: int
    kappa_max: float
    breaks: np.ndarray = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    distances: np.ndarray = field(repr=False)
    near: NearField = field(repr=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def spacing(self) -> float:
        """Mean node spacing L/N."""
        return self.curve.length / self.size

    def panel_slice(self, k: int) -> slice:
        return slice(k * ORDER, (k + 1) * ORDER)

    def near_field(self, x: np.ndarray, on_curve: np.ndarray | None = None) -> NearField:
        """Near-field data for arbitrary targets x (shape (m, 2))."""
        return _build_near(self, x, on_curve)


_GX, _GW = np.polynomial.legendre.leggauss(ORDER)
_BW = _bary_weights(_GX)


def _build_near(disc: Discretization, x: np.ndarray, on_curve=None) -> NearField:
    curve = disc.curve
    br = disc.breaks
    widths = np.diff(br)
    pts = disc.points.reshape(disc.n_panels, ORDER, 2)
    ends = curve.point(br)
    # distance from every target to every panel, estimated on nodes and endpoints
    dnode = np.linalg.norm(x[:, None, None, :] - pts[None, :, :, :], axis=-1).min(axis=2)
    dend = np.linalg.norm(x[:, None, :] - ends[None, :, :], axis=-1)
    dpan = np.minimum(dnode, np.minimum(dend[:, :-1], dend[:, 1:]))
    ti, pj = np.nonzero(dpan < _NEAR * widths[None, :])
    if ti.size == 0:
        return NearField(ti, pj, np.zeros(0, dtype=int), np.zeros(0), np.zeros((0, ORDER)))
    wmax = 3.0 / disc.kappa_max
    # nearest parameter on each near panel (golden section, vectorized over pairs)
    if on_curve is not None:
        sstar = np.clip(on_curve[ti], br[pj], br[pj + 1])
    else:
        a, b = br[pj].copy(), br[pj + 1].copy()
        xt = x[ti]
        f = lambda u: ((curve.point(u) - xt) ** 2).sum(-1)
        g = (math.sqrt(5.0) - 1.0) / 2.0
        for _ in range(60):
            c = b - g * (b - a)
            d = a + g * (b - a)
            left = f(c) < f(d)
            b = np.where(left, d, b)
            a = np.where(left, a, c)
        sstar = 0.5 * (a + b)
    perp = np.linalg.norm(x[ti] - curve.point(sstar), axis=-1)
    sig_all, w_all, starts = [], [], []
    total = 0
    for k in range(ti.size):
        lo, hi, s0 = br[pj[k]], br[pj[k] + 1], sstar[k]
        sig, wts = [], []
        for ell, sign in ((hi - s0, 1.0), (s0 - lo, -1.0)):
            if ell <= 1e-14 * widths[pj[k]]:
                continue
            o, w = _side_rule(ell, perp[k], wmax)
            sig.append(s0 + sign * o)
            wts.append(w)
        sig = np.concatenate(sig)
        starts.append(total)
        total += sig.size
        sig_all.append(sig)
        w_all.append(np.concatenate(wts))
    sig = np.concatenate(sig_all)
    wq = np.concatenate(w_all)
    counts = np.diff(np.append(starts, total))
    owner = np.repeat(np.arange(ti.size), counts)
    pan = pj[owner]
    xi = 2.0 * (sig - br[pan]) / widths[pan] - 1.0
    wl = wq[:, None] * _lagrange(xi, _GX, _BW)
    r = np.linalg.norm(x[ti[owner]] - curve.point(sig), axis=-1)
    return NearField(ti, pj, np.asarray(starts), r, wl)


def discretize(curve: ArcCurve, n_nodes: int, kappa_max: float, grading: int = GRADING) -> Discretization:
    """Panel mesh and cached geometry with (about) ``n_nodes`` nodes on gamma."""
    if n_nodes < 16:
        raise BsError("N must be at least 16")
    n_panels = max(2 * (grading + 1) + 1, round(n_nodes / ORDER))
    breaks = _panel_breaks(curve.length, n_panels, grading)
    half = 0.5 * np.diff(breaks)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    nodes = (mid[:, None] + half[:, None] * _GX[None, :]).ravel()
    weights = (half[:, None] * _GW[None, :]).ravel()
    points = curve.point(nodes)
    dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    disc = Discretization(curve, n_panels, grading, float(kappa_max), breaks, nodes, weights,
                          points, dist, None)
    disc.near = _build_near(disc, points, on_curve=nodes)
    log.debug("discretized: %d nodes, %d near pairs, %d near points",
              nodes.size, disc.near.target.size, disc.near.r.size)
    return disc


def _green(kappa):
    def g(r):
        out = np.zeros_like(r)
        z = kappa * r
        ok = (z < 745.0) & (r > 0)
        out[ok] = k0(z[ok]) / TWO_PI
        return out

    return g


def _near_columns(disc: Discretization, near: NearField) -> np.ndarray:
    return (near.panel[:, None] * ORDER + np.arange(ORDER)[None, :])


def collocation_matrix(disc: Discretization, E: float) -> np.ndarray:
    """A_ij with (A f)_i = int G0(Gamma(s_i), Gamma(sigma)) f(sigma) d sigma for panel-polynomial f."""
    kappa = math.sqrt(-E)
    g = _green(kappa)
    A = g(disc.distances) * disc.weights[None, :]
    near = disc.near
    A[near.target[:, None], _near_columns(disc, near)] = near.integrate(g)
    return A


# ---------------------------------------------------------------------------
# public surface


@dataclass(frozen=True, eq=False)
class BsSystem:
    """Discretized operator at one spectral parameter E.

    ``Q = W^1/2 A W^-1/2`` is the weight-scaled collocation matrix; its
    spectrum is that of A.  ``Q_sym`` is its exactly symmetric part, used for
    ordering the eigenvalues and as a starting point for polishing them.
    """

    curve: ArcCurve
    E: float
    disc: Discretization = field(repr=False)
    Q: np.ndarray = field(repr=False)

    @property
    def Q_sym(self) -> np.ndarray:
        return 0.5 * (self.Q + self.Q.T)

    @property
    def nodes(self):
        return self.disc.nodes

    @property
    def weights(self):
        return self.disc.weights

    @property
    def N(self):
        return self.disc.size


def assemble(curve: ArcCurve, E: float, N: int | None = None,
             disc: Discretization | None = None) -> BsSystem:
    """Nystrom matrix of the Birman-Schwinger operator at spectral parameter E."""
    if not E < 0:
        raise EssentialSpectrum(f"E = {E} lies in the essential spectrum [0, inf)")
    kappa = math.sqrt(-E)
    if disc is None:
        if N is None:
            raise BsError("give N or a prebuilt discretization")
        if N < 16:
            raise BsError("N must be at least 16")
        if kappa * curve.length > 1e4:
            raise BsError("sqrt(-E) L exceeds the sanity cap 1e4")
        disc = discretize(curve, N, kappa)
    A = collocation_matrix(disc, E)
    sw = np.sqrt(disc.weights)
    return BsSystem(curve, float(E), disc, sw[:, None] * A / sw[None, :])


def _top_symmetric(S: np.ndarray, m: int):
    n = S.shape[0]
    vals, vecs = linalg.eigh(S, subset_by_index=[n - m, n - 1], driver="evr")
    return vals[::-1], vecs[:, ::-1]


def _polish(Q, lam0, x0):
    """Two-sided inverse iteration at shift lam0; returns (lambda, right vector)."""
    n = Q.shape[0]
    lu = linalg.lu_factor(Q - lam0 * np.eye(n), check_finite=False)
    x, y = x0.copy(), x0.copy()
    lam = lam0
    for _ in range(2):
        x = linalg.lu_solve(lu, x, check_finite=False)
        x /= np.linalg.norm(x)
        y = linalg.lu_solve(lu, y, trans=1, check_finite=False)
        y /= np.linalg.norm(y)
        lam = float(y @ (Q @ x) / (y @ x))
    return lam, x


def bs_eigenvalues(sys: BsSystem | np.ndarray, j_max: int, vectors: bool = False):
    """Largest j_max eigenvalues in descending order (optionally with right eigenvectors as columns).

    A plain symmetric matrix is handed to a symmetric eigensolver.  For a
    BsSystem the eigenpairs of the symmetric part are polished on the full
    operator; if a polished value moves more than a quarter of the distance
    to a neighbouring level, the dense nonsymmetric solver decides instead.
    """
    if not isinstance(sys, BsSystem):
        Q = np.asarray(sys, dtype=float)
        if j_max > Q.shape[0]:
            raise BsError(f"j_max = {j_max} exceeds matrix size {Q.shape[0]}")
        vals, vecs = _top_symmetric(Q, j_max)
        return (vals, vecs) if vectors else vals
    Q = sys.Q
    n = Q.shape[0]
    if j_max > n:
        raise BsError(f"j_max = {j_max} exceeds matrix size {n}")
    m = min(n, j_max + 1)
    svals, svecs = _top_symmetric(sys.Q_sym, m)
    vals = np.empty(j_max)
    vecs = np.empty((n, j_max))
    scale = abs(svals[0])
    for k in range(j_max):
        gaps = np.abs(np.delete(svals, k) - svals[k])
        gap = gaps.min() if gaps.size else scale
        lam, x = _polish(Q, svals[k] * (1.0 + 1e-14), svecs[:, k])
        if not abs(lam - svals[k]) < 0.25 * gap:
            return _dense_eigenvalues(Q, j_max, vectors)
        vals[k], vecs[:, k] = lam, x
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    return (vals, vecs) if vectors else vals


def _dense_eigenvalues(Q, j_max, vectors):
    log.info("falling back to the dense nonsymmetric eigensolver")
    w, v = linalg.eig(Q)
    order = np.argsort(-w.real, kind="stable")[:j_max]
    vals, vecs = w.real[order], v.real[:, order]
    return (vals, vecs) if vectors else vals


@dataclass(frozen=True, eq=False)
class BoundState:
    """Bound state E_j(beta) with its charge density F sampled at the Gauss nodes.

    F is the nodal density (not weight-scaled), normalized so that the
    single-layer potential u = int G0 F dS has unit L2 norm on R^2.
    """

    j: int
    beta: float
    energy: float
    density: np.ndarray = field(repr=False)
    disc: Discretization = field(repr=False)
    tol: float = 0.0
    residual: float = 0.0
    evaluations: int = 0

    @property
    def N(self) -> int:
        return self.disc.size

    @property
    def kappa(self) -> float:
        return math.sqrt(-self.energy)

    def record(self) -> dict:
        return {"beta": self.beta, "j": self.j, "E": self.energy, "N": self.N,
                "tol": self.tol, "residual": self.residual}


def _l2_norm_squared(disc: Discretization, F: np.ndarray, E: float) -> float:
    """||u||^2 = <F, dG0/dE F>, using int G0(x,y;E) G0(y,z;E) dy = dG0/dE(x,z;E)."""
    kappa = math.sqrt(-E)
    r = disc.distances
    z = kappa * r
    kern = np.empty_like(r)
    small = z < 1e-300
    kern[small] = 1.0 / (4.0 * math.pi * kappa ** 2)
    ok = ~small & (z < 745.0)
    kern[ok] = r[ok] * k1(z[ok]) / (4.0 * math.pi * kappa)
    kern[~small & ~ok] = 0.0
    wf = disc.weights * F
    return float(wf @ kern @ wf)


def solve_eigenvalue(curve: ArcCurve, beta: float, j: int = 1, N: int | None = None,
                     tol: float = 1e-7, disc: Discretization | None = None) -> BoundState:
    """E_j(beta): root of lambda_j(E) = 1/beta, bracketed by (beta +- log beta)^2/4.

    lambda_j is increasing in E.  The root is polished with Brent's method,
    which keeps a sign-changing bracket at every step; every sampled value is
    also checked for a single sign change along E.
    """
    if not beta > 0:
        raise BsError("beta must be positive")
    if j < 1:
        raise BsError("level index j starts at 1")
    lb = math.log(beta)
    e_lo = -_BRACKET_WIDEN * (beta + abs(lb)) ** 2 / 4.0
    e_hi = _E_TOP
    if disc is None:
        if N is None:
            N = default_nodes(beta, curve.length)
        disc = discretize(curve, N, math.sqrt(-e_lo))
    target = 1.0 / beta
    samples: dict[float, float] = {}

    def g(E):
        if E not in samples:
            lam = bs_eigenvalues(assemble(curve, E, disc=disc), j)
            samples[E] = lam[j - 1] - target
        return samples[E]

    if g(e_hi) < 0:
        raise NoSuchLevel(f"lambda_{j} < 1/beta on the whole bracket: fewer than {j} bound states at beta={beta}")
    if g(e_lo) > 0:
        raise BsError(f"lambda_{j}(E) exceeds 1/beta at the bottom of the a-priori bracket (beta={beta})")
    root = optimize.brentq(g, e_lo, e_hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    _check_single_crossing(samples)

    sys = assemble(curve, root, disc=disc)
    vals, vecs = bs_eigenvalues(sys, j, vectors=True)
    v = vecs[:, j - 1]
    resid = float(np.linalg.norm(sys.Q @ v - vals[j - 1] * v) / np.linalg.norm(sys.Q, 2))
    F = v / np.sqrt(disc.weights)
    if F[np.argmax(np.abs(F))] < 0:
        F = -F
    F = F / math.sqrt(_l2_norm_squared(disc, F, root))
    return BoundState(j, float(beta), float(root), F, disc, tol, resid, len(samples))


def _check_single_crossing(samples: dict[float, float]) -> None:
    es = sorted(samples)
    signs = [samples[e] > 0 for e in es]
    changes = sum(1 for a, b in zip(signs[:-1], signs[1:]) if a != b)
    if changes > 1:
        raise NonMonotoneDetected("sampled lambda_j(E) - 1/beta changes sign more than once")


# ---------------------------------------------------------------------------
# eigenfunction reconstruction


def reconstruct_u(state: BoundState, x, min_distance: float | None = None):
    """u(x) = int_gamma G0(x, y; E) F(y) dS_y at point(s) x off the arc."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    pts = x.reshape(-1, 2)
    disc = state.disc
    band = 0.5 * disc.spacing if min_distance is None else min_distance
    d = disc.curve.distance_to_arc(pts)
    if np.any(d < band):
        raise TooCloseToArc(f"target within {band:g} of the arc")
    u = _single_layer(state, pts)
    return float(u[0]) if scalar else u.reshape(x.shape[:-1])


def _single_layer(state: BoundState, pts: np.ndarray) -> np.ndarray:
    disc = state.disc
    g = _green(state.kappa)
    r = np.linalg.norm(pts[:, None, :] - disc.points[None, :, :], axis=-1)
    A = g(r) * disc.weights[None, :]
    near = disc.near_field(pts)
    if near.target.size:
        A[near.target[:, None], _near_columns(disc, near)] = near.integrate(g)
    return A @ state.density


@dataclass(frozen=True)
class EigenGrid:
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray        # nan where flagged
    flag: np.ndarray     # True = within the exclusion band of gamma, not evaluated

    def rows(self):
        return np.column_stack([self.x, self.y, self.u, self.flag.astype(int)])


def eigenfunction_grid(state: BoundState, bbox, resolution) -> EigenGrid:
    """Row-major samples of u on a bbox = (xmin, xmax, ymin, ymax) grid."""
    xmin, xmax, ymin, ymax = map(float, bbox)
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    if not (xmax > xmin and ymax > ymin) or nx < 2 or ny < 2:
        raise BsError("degenerate bounding box or resolution")
    arc = state.disc.curve.point(np.linspace(0, state.disc.curve.length, 64))
    if arc[:, 0].min() < xmin or arc[:, 0].max() > xmax or arc[:, 1].min() < ymin or arc[:, 1].max() > ymax:
        raise BsError("bounding box must contain the arc")
    ys, xs = np.meshgrid(np.linspace(ymin, ymax, ny), np.linspace(xmin, xmax, nx), indexing="ij")
    pts = np.column_stack([xs.ravel(), ys.ravel()])
    d = state.disc.curve.distance_to_arc(pts)
    flag = d < 0.5 * state.disc.spacing
    u = np.full(pts.shape[0], np.nan)
    keep = ~flag
    for chunk in np.array_split(np.nonzero(keep)[0], max(1, keep.sum() // 2000)):
        if chunk.size:
            u[chunk] = _single_layer(state, pts[chunk])
    return EigenGrid(pts[:, 0], pts[:, 1], u, flag)


# ---------------------------------------------------------------------------
# decay envelope


@dataclass(frozen=True)
class DecayReport:
    points: np.ndarray
    distance: np.ndarray
    log_abs_u: np.ndarray
    slope: float                  # (beta - log beta)/2
    log_D: float                  # minimal feasible constant, log scale
    violations: int
    rejected: int = 0

    @property
    def D(self) -> float:
        return math.exp(self.log_D)


def decay_samples(curve: ArcCurve, beta: float, count: int = 200, reach: float = 3.0) -> np.ndarray:
    """Deterministic points outside the tube W(6 log beta / beta): normal offsets and end caps."""
    inner = tube_halfwidth(beta) * 1.05
    outer = max(reach * inner, inner + 0.5 * curve.length)
    n_side = count // 4
    s = np.linspace(0.1, 0.9, n_side) * curve.length
    dist = np.geomspace(inner, outer, n_side)
    above = curve.point(s) + dist[:, None] * curve.normal(s)
    below = curve.point(s[::-1]) - dist[:, None] * curve.normal(s[::-1])
    n_cap = (count - 2 * n_side) // 2
    ang = np.linspace(-0.4 * math.pi, 0.4 * math.pi, n_cap)
    dcap = np.geomspace(inner, outer, n_cap)
    ends = []
    for s_end, sign in ((curve.length, 1.0), (0.0, -1.0)):
        tau = sign * curve.tangent(s_end)
        nrm = np.array([-tau[1], tau[0]])
        dirs = np.cos(ang)[:, None] * tau + np.sin(ang)[:, None] * nrm
        ends.append(curve.point(s_end) + dcap[:, None] * dirs)
    return np.vstack([above, below] + ends)


def verify_decay(state: BoundState, samples, k: float = 6.0, c: float = 0.0) -> DecayReport:
    """Check log|u| <= log D + 2 log beta - (beta - log beta) d / 2 with the minimal D."""
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise BsError("empty sample set")
    beta = state.beta
    curve = state.disc.curve
    d = curve.distance_to_arc(pts)
    allowed = d >= (k * math.log(beta) - c) / beta
    if not np.any(allowed):
        raise BsError("every sample lies inside the excluded tube")
    pts, d = pts[allowed], d[allowed]
    u = _single_layer(state, pts)
    with np.errstate(divide="ignore"):
        logu = np.log(np.abs(u))
    slope = 0.5 * (beta - math.log(beta))
    excess = logu - 2.0 * math.log(beta) + slope * d
    log_D = float(np.max(excess))
    # a violation is an increase of the envelope-normalized value beyond the fitted constant
    violations = int(np.sum(excess > log_D + 1e-12))
    return DecayReport(pts, d, logu, slope, log_D, violations, int((~allowed).sum()))
