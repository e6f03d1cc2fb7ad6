"""Strong-coupling sweeps: compare E_j(beta) + beta^2/4 with the effective mu_j."""
from __future__ import annotations

import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import bs_solver
from .curve import ArcCurve
from .effective1d import dirichlet_eigenvalues, extended_eigenvalues

SWEEP_COLUMNS = ("beta", "j", "E", "mu", "delta", "N", "tol")


class SweepError(RuntimeError):
    pass


class InsufficientRows(ValueError):
    pass


@dataclass(frozen=True)
class SweepRow:
    beta: float
    j: int
    E: float
    mu: float
    N: int
    tol: float

    @property
    def delta(self) -> float:
        """Measured remainder E_j + beta^2/4 - mu_j."""
        return self.E + 0.25 * self.beta ** 2 - self.mu


@dataclass(frozen=True)
class MissingRow:
    beta: float
    j: int
    reason: str


@dataclass
class SweepTable:
    rows: list[SweepRow]
    missing: list[MissingRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.j, r.beta))
        self.missing = sorted(self.missing, key=lambda r: (r.j, r.beta))

    def levels(self) -> list[int]:
        return sorted({r.j for r in self.rows})

    def for_level(self, j: int) -> list[SweepRow]:
        return [r for r in self.rows if r.j == j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(SWEEP_COLUMNS) + "\n")
        for r in self.rows:
            buf.write(f"{r.beta!r},{r.j},{r.E!r},{r.mu!r},{r.delta!r},{r.N},{r.tol!r}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class RateFit:
    """Per level: C_j = max |delta_j| beta / log beta, and whether |delta_j| shrinks."""

    C: dict[int, float]
    trend: dict[int, bool]

    def summary(self) -> dict:
        return {"C": {str(j): c for j, c in self.C.items()},
                "trend": {str(j): t for j, t in self.trend.items()}}


def curve_hash(curve: ArcCurve) -> str:
    blob = json.dumps(curve.describe(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _solve_level(args):
    curve, beta, j, N, tol = args
    try:
        st = bs_solver.solve_eigenvalue(curve, beta, j, N=N, tol=tol)
        return beta, j, st.energy, st.N, None
    except bs_solver.BsError as exc:
        return beta, j, None, None, f"{type(exc).__name__}: {exc}"


def sweep(curve: ArcCurve, betas, j_max: int = 2, N: int | None = None, tol: float = 1e-7,
          workers: int = 1, M: int | None = None) -> SweepTable:
    """One row per (beta, j) with a bound state; failed solves are recorded as missing."""
    betas = [float(b) for b in betas]
    if not betas:
        raise SweepError("empty beta list")
    if any(b < 20 for b in betas):
        raise SweepError("sweep betas must be >= 20")
    if any(b2 <= b1 for b1, b2 in zip(betas[:-1], betas[1:])):
        raise SweepError("betas must be strictly ascending")
    mu = dirichlet_eigenvalues(curve, 0.0, curve.length, j_max, M).eigenvalues
    tasks = [(curve, b, j, N, tol) for b in betas for j in range(1, j_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_level, tasks))
    else:
        results = [_solve_level(t) for t in tasks]
    rows, missing = [], []
    for beta, j, E, n_used, err in results:
        if err is None:
            rows.append(SweepRow(beta, j, E, float(mu[j - 1]), n_used, tol))
        else:
            missing.append(MissingRow(beta, j, err))
    if not rows:
        raise SweepError("every row of the sweep failed: " + "; ".join(m.reason for m in missing))
    meta = {"curve": curve.describe(), "curve_hash": curve_hash(curve),
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "mu": [float(m) for m in mu]}
    return SweepTable(rows, missing, meta)


def _top_half(rows):
    n = len(rows)
    return rows[n - (n + 2) // 2:]


def fit_rate(table: SweepTable) -> RateFit:
    C, trend = {}, {}
    for j in table.levels():
        rows = table.for_level(j)
        if len(rows) < 3:
            raise InsufficientRows(f"level {j} has {len(rows)} rows; need at least 3 betas")
        C[j] = max(abs(r.delta) * r.beta / math.log(r.beta) for r in rows)
        top = [abs(r.delta) for r in _top_half(rows)]
        trend[j] = all(b < a for a, b in zip(top[:-1], top[1:]))
    return RateFit(C, trend)


def apriori_ok(beta: float, E: float) -> bool:
    root = math.sqrt(-E) if E < 0 else -1.0
    lb = math.log(beta)
    return 0.5 * (beta - lb) <= root <= 0.5 * (beta + lb)


def check_apriori(table: SweepTable) -> bool:
    """Every row with beta >= 50 satisfies (beta - log beta)/2 <= sqrt(-E) <= (beta + log beta)/2."""
    return all(apriori_ok(r.beta, r.E) for r in table.rows if r.beta >= 50)


def check_ordering(table: SweepTable) -> bool:
    """E_1 <= E_2 <= ... at each beta, and the number of present levels never drops with beta."""
    betas = sorted({r.beta for r in table.rows} | {m.beta for m in table.missing})
    counts = []
    for b in betas:
        es = [r.E for r in sorted(table.rows, key=lambda r: r.j) if r.beta == b]
        if any(e2 < e1 for e1, e2 in zip(es[:-1], es[1:])):
            return False
        counts.append(len(es))
    return all(c2 >= c1 for c1, c2 in zip(counts[:-1], counts[1:]))


def gap_consistency(curve: ArcCurve, betas, j_max: int = 2, M: int | None = None) -> dict[int, float]:
    """Fitted C_j = max |mu_j(beta) - mu_j| beta / log beta over the prolonged intervals."""
    mu = dirichlet_eigenvalues(curve, 0.0, curve.length, j_max, M).eigenvalues
    worst = np.zeros(j_max)
    for b in betas:
        ext = extended_eigenvalues(curve, float(b), j_max, M).eigenvalues
        worst = np.maximum(worst, np.abs(ext - mu) * b / math.log(b))
    return {j + 1: float(c) for j, c in enumerate(worst)}
