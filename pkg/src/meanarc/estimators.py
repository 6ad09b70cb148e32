"""Monte Carlo estimation over the placement measure, plus the derived
procedures: scale sweeps, critical-scale search, and the embeddability test.

Estimator convention: an integral over placements is estimated as
window.measure times the sample mean of the integrand; standard errors come
from the sample variance (delta method for the per-arc ratio). All runs are
deterministic in (seed, streams) and bit-identical for any worker count
because each stream accumulates independently and streams reduce in index
order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._kernels import CLS_CONTAINED, CLS_COVERING, CLS_CROSSING, CLS_DISJOINT, ClipKernel
from .arcs import classify_containment
from .formulas import NegativeResult, ShapeSummary, cauchy_mean, mazzolo_mean, small_trajectory_mean
from .geometry import RigidMotion, SimplePolygon, Tolerance, signed_distances
from .sampling import (
    FLOOD_FRACTION,
    MAX_REDRAWS,
    DegenerateFlood,
    SamplingWindow,
    _draw_motions,
    _stream_counts,
    _stream_seeds,
    build_window,
)
from .shapes import centered_on_centroid
from .shapes import scale as scale_shape


class NoIntersections(RuntimeError):
    """No sampled placement crossed the domain boundary; the mean arc length
    is undefined at this sample size."""


class BoundsInvalid(ValueError):
    """Critical-scale bracket is wrong: the trajectory must fit at the lower
    bound and fail to fit at the upper bound."""


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    std_error: float
    samples: int
    window_measure: float


def z_score(estimate: MeasureEstimate, target: float) -> float:
    """Standardized deviation of an estimate from a target value."""
    diff = estimate.value - target
    if estimate.std_error > 0.0:
        return diff / estimate.std_error
    return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)


@dataclass(frozen=True)
class MeasureSet:
    """Estimates of the five placement-measure integrals."""

    arc_length: MeasureEstimate  # total boundary length inside the domain
    crossings: MeasureEstimate  # total boundary crossing count
    overlap: MeasureEstimate  # placements with any interior overlap
    contained: MeasureEstimate  # trajectory strictly inside the domain
    covering: MeasureEstimate  # domain strictly inside the trajectory
    window_measure: float
    samples: int
    resampled: int


@dataclass(frozen=True)
class MeanArcEstimate:
    per_arc_mean: float
    per_arc_stderr: float
    per_trajectory_mean: float
    per_trajectory_stderr: float
    normalized_per_arc: float
    intersecting_count: int
    contained_count: int
    covering_count: int
    disjoint_count: int
    inside_length_sum: float
    arc_count_sum: float
    samples: int


@dataclass
class PairRun:
    """Raw per-placement results for one (domain, trajectory) pair."""

    s: np.ndarray
    n: np.ndarray
    cls: np.ndarray
    window: SamplingWindow
    samples: int
    resampled: int
    exhausted: int


def _run_stream(kernel: ClipKernel, window: SamplingWindow, seed_seq, count: int):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    motions = _draw_motions(rng, window, count)
    s, n, cls, degen = kernel.run(motions)
    bad = np.nonzero(degen | (n % 2 == 1))[0]
    resampled = 0
    rounds = 0
    while len(bad) and rounds < MAX_REDRAWS:
        redraw = _draw_motions(rng, window, len(bad))
        s2, n2, cls2, degen2 = kernel.run(redraw)
        s[bad] = s2
        n[bad] = n2
        cls[bad] = cls2
        resampled += len(bad)
        bad = bad[degen2 | (n2 % 2 == 1)]
        rounds += 1
    return s, n, cls, resampled, len(bad)


def run_pair(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    samples: int,
    seed,
    streams: int = 4,
    tol: Tolerance | None = None,
    window: SamplingWindow | None = None,
    workers: int = 1,
) -> PairRun:
    """Sample placements of the trajectory over the domain and clip each one.

    The trajectory template is re-centered on its area centroid so the
    minimal covering window applies; degenerate draws are replaced from
    their own stream.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    template = centered_on_centroid(trajectory)
    if tol is None:
        tol = Tolerance.for_shapes(domain, trajectory)
    if window is None:
        window = build_window(domain, template, ref=(0.0, 0.0))
    kernel = ClipKernel(
        domain.vertices, template.vertices, tol.eps_length, tol.eps_param
    )
    seeds = _stream_seeds(seed, streams)
    counts = _stream_counts(samples, streams)
    if workers > 1:
        kernel.run(np.zeros((0, 3)))  # compile before forking threads
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda sc: _run_stream(kernel, window, sc[0], sc[1]), zip(seeds, counts))
            )
    else:
        parts = [_run_stream(kernel, window, sq, c) for sq, c in zip(seeds, counts)]
    s = np.concatenate([p[0] for p in parts])
    n = np.concatenate([p[1] for p in parts])
    cls = np.concatenate([p[2] for p in parts])
    resampled = sum(p[3] for p in parts)
    exhausted = sum(p[4] for p in parts)
    if exhausted > FLOOD_FRACTION * samples:
        raise DegenerateFlood(exhausted, samples)
    return PairRun(s, n, cls, window, samples, resampled, exhausted)


def _measure(values: np.ndarray, wm: float) -> MeasureEstimate:
    m = len(values)
    mean = float(values.mean())
    se = float(values.std(ddof=1)) / math.sqrt(m) if m > 1 else math.inf
    return MeasureEstimate(wm * mean, wm * se, m, wm)


def estimate_measures(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    samples: int,
    seed,
    streams: int = 4,
    tol: Tolerance | None = None,
    window: SamplingWindow | None = None,
    workers: int = 1,
) -> MeasureSet:
    """Estimate the five placement-measure integrals for a shape pair."""
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    run = run_pair(domain, trajectory, samples, seed, streams, tol, window, workers)
    return measures_from_run(run)


def measures_from_run(run: PairRun) -> MeasureSet:
    wm = run.window.measure
    return MeasureSet(
        arc_length=_measure(run.s, wm),
        crossings=_measure(run.n.astype(np.float64), wm),
        overlap=_measure((run.cls != CLS_DISJOINT).astype(np.float64), wm),
        contained=_measure((run.cls == CLS_CONTAINED).astype(np.float64), wm),
        covering=_measure((run.cls == CLS_COVERING).astype(np.float64), wm),
        window_measure=wm,
        samples=run.samples,
        resampled=run.resampled,
    )


def estimate_mean_arc(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    samples: int,
    seed,
    streams: int = 4,
    tol: Tolerance | None = None,
    window: SamplingWindow | None = None,
    workers: int = 1,
) -> MeanArcEstimate:
    """Mean arc length per crossing placement, per arc and per trajectory.

    Contained, covering and disjoint placements are counted but excluded
    from both means. Raises NoIntersections when nothing crossed.
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    run = run_pair(domain, trajectory, samples, seed, streams, tol, window, workers)
    return mean_arc_from_run(run, ShapeSummary.of(domain))


def mean_arc_from_run(run: PairRun, domain_summary: ShapeSummary) -> MeanArcEstimate:
    cross = run.cls == CLS_CROSSING
    n_cross = int(cross.sum())
    contained = int((run.cls == CLS_CONTAINED).sum())
    covering = int((run.cls == CLS_COVERING).sum())
    disjoint = int((run.cls == CLS_DISJOINT).sum())
    if n_cross == 0:
        raise NoIntersections(
            f"none of {run.samples} placements crossed the domain boundary"
        )
    s_c = run.s[cross]
    a_c = 0.5 * run.n[cross].astype(np.float64)
    sum_s = float(s_c.sum())
    sum_a = float(a_c.sum())
    per_arc = sum_s / sum_a
    # Linearized (delta-method) standard error of the ratio estimator.
    resid = s_c - per_arc * a_c
    per_arc_se = math.sqrt(float((resid * resid).sum())) / sum_a
    per_traj = sum_s / n_cross
    per_traj_se = (
        float(s_c.std(ddof=1)) / math.sqrt(n_cross) if n_cross > 1 else math.inf
    )
    return MeanArcEstimate(
        per_arc_mean=per_arc,
        per_arc_stderr=per_arc_se,
        per_trajectory_mean=per_traj,
        per_trajectory_stderr=per_traj_se,
        normalized_per_arc=per_arc / cauchy_mean(domain_summary),
        intersecting_count=n_cross,
        contained_count=contained,
        covering_count=covering,
        disjoint_count=disjoint,
        inside_length_sum=sum_s,
        arc_count_sum=sum_a,
        samples=run.samples,
    )


@dataclass(frozen=True)
class SweepRow:
    lam: float
    area_ratio: float
    estimate: MeanArcEstimate
    small_trajectory: float  # closed-form small-trajectory mean (may be out of regime)
    cauchy: float  # domain plateau value
    mazzolo: float  # all-overlap average


@dataclass(frozen=True)
class SweepResult:
    rows: list
    domain_summary: ShapeSummary
    trajectory_summary: ShapeSummary  # at scale 1
    samples: int
    seed: int


def sweep_scale(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    lambdas,
    samples: int,
    seed: int,
    streams: int = 4,
    tol: Tolerance | None = None,
    workers: int = 1,
) -> SweepResult:
    """Estimate the mean arc length across a grid of trajectory scale
    factors, with closed-form overlays computed from exactly scaled
    summaries."""
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    lambdas = [float(v) for v in lambdas]
    if not lambdas or any(b <= a for a, b in zip(lambdas, lambdas[1:])) or lambdas[0] <= 0:
        raise ValueError("scale grid must be positive and strictly increasing")
    dom_sum = ShapeSummary.of(domain)
    base = centered_on_centroid(trajectory)
    base_sum = ShapeSummary.of(base)
    rows = []
    for k, lam in enumerate(lambdas):
        scaled = scale_shape(base, float(lam))
        child = np.random.SeedSequence([int(seed), k])
        run = run_pair(domain, scaled, samples, child, streams, tol, None, workers)
        est = mean_arc_from_run(run, dom_sum)
        traj_sum = ShapeSummary(
            base_sum.area * lam * lam, base_sum.perimeter * lam, base_sum.convex
        )
        try:
            eq5 = small_trajectory_mean(dom_sum, traj_sum)
        except NegativeResult as exc:
            eq5 = exc.value
        rows.append(
            SweepRow(
                lam=float(lam),
                area_ratio=traj_sum.area / dom_sum.area,
                estimate=est,
                small_trajectory=eq5,
                cauchy=cauchy_mean(dom_sum),
                mazzolo=mazzolo_mean(dom_sum, traj_sum),
            )
        )
    return SweepResult(rows, dom_sum, base_sum, samples, int(seed))


class _ContainmentSearcher:
    """Multi-start containment search over (x, y, theta).

    A coarse jittered grid seeds Nelder-Mead refinement of a containment
    margin (worst signed clearance over sampled boundary points); every
    candidate that looks feasible is verified with the exact
    classify_containment predicate before being accepted.
    """

    def __init__(self, domain: SimplePolygon, template: SimplePolygon, budget: int, seed):
        self.domain = domain
        self.template = template
        self.budget = max(400, int(budget))
        self.rng = np.random.default_rng(seed)
        self.evaluations = 0
        self.tol = Tolerance.for_shapes(domain, template)

        # Margin guide points: subsample huge boundaries, keep exactness in
        # the final verification instead.
        heavy = len(template.vertices) * len(domain.vertices) > 32768
        self._keep = 96 if heavy else max(len(template.vertices), len(domain.vertices))
        self._dom_pts = self._thin(domain.vertices, self._keep)
        xmin, ymin, xmax, ymax = domain.bounds
        self._bounds = (xmin, ymin, xmax, ymax)
        self._scale = max(xmax - xmin, ymax - ymin)

    @staticmethod
    def _thin(verts: np.ndarray, keep: int) -> np.ndarray:
        if len(verts) <= keep:
            return verts
        idx = np.unique(np.linspace(0, len(verts) - 1, keep).astype(int))
        return verts[idx]

    def _margins(self, motions: np.ndarray, verts: np.ndarray) -> np.ndarray:
        """Containment margin for each (theta, x, y) row: worst clearance of
        trajectory points inside the domain, and of domain vertices staying
        outside the trajectory."""
        self.evaluations += len(motions)
        out = np.empty(len(motions))
        guide = self._thin(verts, self._keep)
        for chunk in range(0, len(motions), 128):
            rows = motions[chunk : chunk + 128]
            c = np.cos(rows[:, 0])[:, None]
            s = np.sin(rows[:, 0])[:, None]
            wx = c * guide[None, :, 0] - s * guide[None, :, 1] + rows[:, 1][:, None]
            wy = s * guide[None, :, 0] + c * guide[None, :, 1] + rows[:, 2][:, None]
            m = len(rows)
            pts = np.stack([wx.ravel(), wy.ravel()], axis=1)
            term1 = signed_distances(pts, self.domain).reshape(m, -1).min(axis=1)
            out[chunk : chunk + 128] = term1
        return out

    def _margin_one(self, motion_row, verts: np.ndarray, scaled: SimplePolygon) -> float:
        self.evaluations += 1
        th, tx, ty = motion_row
        c, s = math.cos(th), math.sin(th)
        wx = c * verts[:, 0] - s * verts[:, 1] + tx
        wy = s * verts[:, 0] + c * verts[:, 1] + ty
        pts = np.stack([wx, wy], axis=1)
        term1 = float(signed_distances(pts, self.domain).min())
        # Domain vertices poking into the moved trajectory disqualify a
        # placement even when every trajectory point is inside the domain
        # (reflex domains). Transform domain points into the template frame.
        rx = self._dom_pts[:, 0] - tx
        ry = self._dom_pts[:, 1] - ty
        ux = c * rx + s * ry
        uy = -s * rx + c * ry
        term2 = float(-signed_distances(np.stack([ux, uy], axis=1), scaled).max())
        return min(term1, term2)

    def find(self, lam: float, warm: RigidMotion | None = None):
        """Verified containing motion for the template scaled by lam, or
        None when the search cannot find one."""
        verts = lam * self.template.vertices
        scaled = SimplePolygon._from_trusted(verts)

        candidates = []
        if warm is not None:
            base = np.array([warm.theta, warm.tx, warm.ty])
            jitter = np.zeros((9, 3))
            jitter[1:, 0] = self.rng.normal(0.0, 0.05, 8)
            jitter[1:, 1] = self.rng.normal(0.0, 0.02 * self._scale, 8)
            jitter[1:, 2] = self.rng.normal(0.0, 0.02 * self._scale, 8)
            candidates.append(base[None, :] + jitter)

        n_theta = 12
        n_xy = max(4, int(math.sqrt(self.budget / n_theta)))
        xmin, ymin, xmax, ymax = self._bounds
        gx = np.linspace(xmin, xmax, n_xy)
        gy = np.linspace(ymin, ymax, n_xy)
        gt = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
        gt = gt + self.rng.uniform(0.0, 2.0 * math.pi / n_theta)
        grid = np.stack(
            [g.ravel() for g in np.meshgrid(gt, gx, gy, indexing="ij")], axis=1
        )
        candidates.append(grid)
        cand = np.vstack(candidates)

        margins = self._margins(cand, verts)
        order = np.argsort(margins)[::-1]

        # Any coarse point already strictly feasible: verify and return.
        for idx in order[:3]:
            if margins[idx] > 0.0:
                motion = RigidMotion(*cand[idx])
                if classify_containment(self.domain, scaled, motion, self.tol):
                    return motion

        steps = np.array([0.2, 0.05 * self._scale, 0.05 * self._scale])
        for idx in order[:6]:
            start = cand[idx]
            res = optimize.minimize(
                lambda m: -self._margin_one(m, verts, scaled),
                start,
                method="Nelder-Mead",
                options={
                    "initial_simplex": start[None, :] + np.vstack([np.zeros(3), np.diag(steps)]),
                    "xatol": 1e-6 * self._scale,
                    "fatol": 1e-7 * self._scale,
                    "maxfev": 400,
                },
            )
            if -res.fun > -1e-12:
                motion = RigidMotion(*res.x)
                if classify_containment(self.domain, scaled, motion, self.tol):
                    return motion
        return None


@dataclass(frozen=True)
class CriticalScaleResult:
    lambda_critical: float
    witness_motion: RigidMotion
    evaluations: int
    bisection_steps: int


def find_critical_scale(
    domain: SimplePolygon,
    trajectory: SimplePolygon,
    lambda_bounds: tuple[float, float],
    budget: int = 2500,
    seed: int = 0,
    rel_tol: float = 4e-4,
) -> CriticalScaleResult:
    """Largest scale factor at which the trajectory still fits inside the
    domain, by bisection on a verified containment search.

    The returned value carries a found, verified witness, so it is a lower
    bound on the true critical scale; rel_tol controls the bracket width.
    Raises BoundsInvalid unless the trajectory fits at lambda_bounds[0] and
    fails to fit at lambda_bounds[1].
    """
    lo, hi = float(lambda_bounds[0]), float(lambda_bounds[1])
    if not (0.0 < lo < hi):
        raise BoundsInvalid(f"bad scale bounds ({lo}, {hi})")
    template = centered_on_centroid(trajectory)
    searcher = _ContainmentSearcher(domain, template, budget, seed)
    witness = searcher.find(lo)
    if witness is None:
        raise BoundsInvalid(f"trajectory does not fit at the lower bound {lo}")
    if searcher.find(hi, warm=witness) is not None:
        raise BoundsInvalid(f"trajectory still fits at the upper bound {hi}")
    steps = 0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        found = searcher.find(mid, warm=witness)
        if found is None:
            hi = mid
        else:
            lo, witness = mid, found
        steps += 1
    return CriticalScaleResult(lo, witness, searcher.evaluations, steps)


@dataclass(frozen=True)
class EmbeddabilityReport:
    fits: bool
    witness: RigidMotion | None
    contained_measure: MeasureEstimate
    contained_z: float
    statistical_fits: bool
    mean_gap: float


def test_embeddability(
    container: SimplePolygon,
    candidate: SimplePolygon,
    samples: int = 20000,
    seed: int = 0,
) -> EmbeddabilityReport:
    """Can the candidate be placed strictly inside the container?

    Two independent routes: a direct containment search (returns a witness
    motion) and the statistical route (the contained-placement measure must
    be positive; its z-score serves as evidence strength). mean_gap is the
    estimated gap between the plateau value and the observed per-arc mean,
    which is positive in the embeddable regime.
    """
    root = np.random.SeedSequence([int(seed), 0x5EED])
    template = centered_on_centroid(candidate)
    searcher = _ContainmentSearcher(container, template, max(2000, samples // 10), root.spawn(1)[0])
    witness = searcher.find(1.0)

    run = run_pair(container, candidate, samples, np.random.SeedSequence([int(seed), 1]))
    measures = measures_from_run(run)
    z = z_score(measures.contained, 0.0)
    dom_sum = ShapeSummary.of(container)
    try:
        arc = mean_arc_from_run(run, dom_sum)
        gap = cauchy_mean(dom_sum) - arc.per_arc_mean
    except NoIntersections:
        gap = math.nan
    return EmbeddabilityReport(
        fits=witness is not None,
        witness=witness,
        contained_measure=measures.contained,
        contained_z=z,
        statistical_fits=z > 3.0,
        mean_gap=gap,
    )
