"""Monte Carlo estimators and batch experiments.

Every sample ``i`` of an experiment runs on its own environment seed
``sample_seed(base_seed, name, i)``; reports are pure functions of their
arguments.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import _kernels
from .environment import GAMMA, MASK64, EdgeConfig, _signed64, mix64
from .errors import InsufficientDataError
from .genealogy import Forest
from .kuczek import _break_records, count_crossings, default_margin
from .lattice import Vertex, Window
from .paths import greedy_path
from .reachability import cluster_mask, co_reach_mask, percolates_to


def sample_seed(base_seed: int, name: str, i: int) -> int:
    digest = int.from_bytes(hashlib.blake2b(name.encode(), digest_size=8).digest(), "little")
    h = base_seed & MASK64
    for w in (digest, i):
        h = mix64(((h + GAMMA) & MASK64) ^ (w & MASK64))
    return h


@dataclass
class EstimateReport:
    estimate: float
    se: float
    n: int
    N: int
    p: float
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def binomial_se(k: int, n: int) -> float:
    if n == 0:
        return math.nan
    q = k / n
    return math.sqrt(q * (1 - q) / n)


def lag1_autocorr(x) -> float:
    x = np.asarray(x, dtype=float)
    if len(x) < 3:
        return math.nan
    d = x - x.mean()
    den = np.dot(d, d)
    if den == 0:
        return 0.0
    return float(np.dot(d[:-1], d[1:]) / den)


def ks_distance(sample) -> float:
    """Kolmogorov-Smirnov distance between the sample and N(0, 1)."""
    return float(stats.kstest(np.asarray(sample, dtype=float), "norm").statistic)


# -- theta ---------------------------------------------------------------------

def estimate_theta(p: float, N: int, samples: int, seed: int) -> EstimateReport:
    """Fraction of environments in which the origin reaches height N."""
    hits = sum(percolates_to((0, 0), N, EdgeConfig(sample_seed(seed, "theta", i), p))
               for i in range(samples))
    return EstimateReport(hits / samples, binomial_se(hits, samples), samples, N, p)


# -- alpha and sigma^2 ---------------------------------------------------------

def _origin_grid(cfg, N: int):
    window = Window(-N, N, 0, N)
    grid = cfg.snapshot(window)
    co = co_reach_mask(grid, N)
    return grid, co


def survivor_records(p, N, samples, seed, margin=None, name="alpha_sigma"):
    """Break-point series of the origin for every sample in which it survives."""
    margin = default_margin(N) if margin is None else margin
    out = []
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, name, i), p)
        grid, co = _origin_grid(cfg, N)
        if not co[grid.window.index((0, 0))]:
            continue
        recs = _break_records(grid, co, Vertex(0, 0), N, N - margin)
        out.append(np.array([(r.X, r.tau) for r in recs], dtype=np.int64).reshape(-1, 2))
    return out


def _alpha_sigma(X, tau):
    mx, mt = X.mean(), tau.mean()
    return X.sum() / tau.sum(), float(np.mean((X * mt - tau * mx) ** 2))


def estimate_alpha_sigma(p: float, N: int, samples: int, seed: int,
                         margin: int | None = None, n_boot: int = 200) -> EstimateReport:
    """Pooled speed sum(X)/sum(tau) and sigma^2 = E(X E tau - tau E X)^2.

    Standard errors come from a bootstrap over surviving environments with a
    fixed generator.  Two plug-in CLT variances are reported alongside:
    sigma^2 itself and the renewal-reward form sigma^2 / (E tau)^3.
    """
    series = [s for s in survivor_records(p, N, samples, seed, margin) if len(s)]
    if not series:
        raise InsufficientDataError("no completed break-point records")
    allrec = np.concatenate(series)
    X, tau = allrec[:, 0].astype(float), allrec[:, 1].astype(float)
    alpha, sigma2 = _alpha_sigma(X, tau)
    rng = np.random.default_rng(seed)
    boots = []
    for _ in range(n_boot):
        pick = np.concatenate([series[k] for k in rng.integers(0, len(series), len(series))])
        boots.append(_alpha_sigma(pick[:, 0].astype(float), pick[:, 1].astype(float)))
    boots = np.array(boots)
    diag = {
        "sigma2": sigma2,
        "sigma2_se": float(boots[:, 1].std(ddof=1)) if n_boot > 1 else math.nan,
        "clt_var_raw": sigma2,
        "clt_var_renewal": float(sigma2 / tau.mean() ** 3),
        "mean_X": float(X.mean()),
        "mean_tau": float(tau.mean()),
        "records": int(len(X)),
        "survivors": len(series),
        "lag1_X": float(np.nanmean([lag1_autocorr(s[:, 0]) for s in series])),
        "lag1_tau": float(np.nanmean([lag1_autocorr(s[:, 1]) for s in series])),
    }
    se = float(boots[:, 0].std(ddof=1)) if n_boot > 1 else math.nan
    return EstimateReport(float(alpha), se, samples, N, p, diag)


# -- CLT -----------------------------------------------------------------------

def gamma_at(cfg, n: int, margin: int):
    """Column of the origin's right-most path at level n (horizon n + margin), or None."""
    grid, co = _origin_grid(cfg, n + margin)
    if not co[grid.window.index((0, 0))]:
        return None
    return greedy_path(grid, co, Vertex(0, 0), n).vertices[-1].x


def clt_diagnostic(p: float, n: int, samples: int, seed: int, margin: int | None = None,
                   max_tries: int | None = None) -> EstimateReport:
    """KS distance of the standardized gamma(n) over ``samples`` survivors."""
    margin = default_margin(n) if margin is None else margin
    max_tries = 20 * samples if max_tries is None else max_tries
    values = []
    i = 0
    while len(values) < samples and i < max_tries:
        g = gamma_at(EdgeConfig(sample_seed(seed, "clt", i), p), n, margin)
        if g is not None:
            values.append(g)
        i += 1
    if len(values) < samples:
        raise InsufficientDataError(f"only {len(values)} survivors in {i} environments")
    v = np.asarray(values, dtype=float)
    sd = v.std(ddof=1)
    diag = {"tries": i, "mean": float(v.mean()), "var_over_n": float(sd ** 2 / n)}
    if sd == 0:
        diag["degenerate_variance"] = True
        return EstimateReport(math.nan, math.nan, samples, n, p, diag)
    diag["degenerate_variance"] = False
    ks = ks_distance((v - v.mean()) / sd)
    diag["ks_critical_1pct"] = 1.63 / math.sqrt(samples)
    return EstimateReport(ks, math.nan, samples, n, p, diag)


# -- coalescence ---------------------------------------------------------------

def _meet_level(a, b, lowest, cutoff):
    common = [v.t for v in set(a) & set(b) if lowest <= v.t <= cutoff]
    return min(common) if common else None


def coalescence_curve(p: float, dx_list, N_ladder, samples: int, seed: int,
                      margin_frac: float = 0.2) -> list[dict]:
    """Fraction of certified pairs (0,0), (dx,0) whose right-most paths meet
    below ``N - margin``.  One environment per sample is shared by all N and dx."""
    N_ladder = list(N_ladder)
    dx_list = list(dx_list)
    counts = {(N, dx): [0, 0] for N in N_ladder for dx in dx_list}
    nmax = max(N_ladder)
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, "coalescence", i), p)
        big = cfg.snapshot(Window(-nmax, nmax + max(max(dx_list), 0), 0, nmax))
        for N in N_ladder:
            cutoff = N - int(margin_frac * N)
            grid = big.restrict(Window(-N, N + max(max(dx_list), 0), 0, N))
            co = co_reach_mask(grid, N)
            w = grid.window
            if not co[w.index((0, 0))]:
                continue
            base = greedy_path(grid, co, Vertex(0, 0), N).vertices
            for dx in dx_list:
                if not co[w.index((dx, 0))]:
                    continue
                c = counts[(N, dx)]
                c[1] += 1
                if dx == 0:
                    c[0] += 1
                    continue
                other = greedy_path(grid, co, Vertex(dx, 0), N).vertices
                c[0] += _meet_level(base, other, 0, cutoff) is not None
    rows = []
    for N in N_ladder:
        for dx in dx_list:
            met, cert = counts[(N, dx)]
            rows.append({"p": p, "N": N, "dx": dx, "certified": cert, "met": met,
                         "fraction": met / cert if cert else math.nan,
                         "se": binomial_se(met, cert)})
    return rows


# -- walk / path meeting equivalence -------------------------------------------

def meeting_agreement(p: float, N: int, samples: int, seed: int,
                      dx_list=(2, 4, 8, 12, 16, 20, 30), margin: int | None = None) -> dict:
    """Compare walk meetings with path meetings on pairs (0,0), (dx,0).

    A pair is certified when its paths meet by ``N - 2 margin`` or not by
    ``N - margin``; for those the walks are asked for a meeting by
    ``N - margin``.
    """
    margin = default_margin(N) if margin is None else margin
    cutoff = N - margin
    pairs = agree = 0
    rows = []
    width = max(dx_list)
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, "meeting", i), p)
        grid = cfg.snapshot(Window(-N, N + width, 0, N))
        co = co_reach_mask(grid, N)
        w = grid.window
        if not co[w.index((0, 0))]:
            continue
        origin = Vertex(0, 0)
        base_path = greedy_path(grid, co, origin, N).vertices
        base_jumps = _jump_sites(grid, co, origin, N, cutoff)
        for dx in dx_list:
            u = Vertex(dx, 0)
            if not co[w.index(u)]:
                continue
            path_level = _meet_level(base_path, greedy_path(grid, co, u, N).vertices, 0, cutoff)
            if path_level is not None and path_level > N - 2 * margin:
                continue
            walk_level = _meet_level(base_jumps, _jump_sites(grid, co, u, N, cutoff), 0, cutoff)
            pairs += 1
            ok = (path_level is None) == (walk_level is None)
            agree += ok
            rows.append({"sample": i, "dx": dx, "path_meet": path_level,
                         "walk_meet": walk_level, "agree": ok})
    return {"pairs": pairs, "agree": agree, "rows": rows}


def _jump_sites(grid, co, u, H, cutoff):
    recs = _break_records(grid, co, u, H, cutoff)
    x, out = u.x, []
    for r in recs:
        x += r.X
        out.append(Vertex(x, u.t + r.T))
    return out


# -- symmetric difference --------------------------------------------------------

def symm_diff_counts(cfg: EdgeConfig, u1, u2, top: int):
    """Per-level symmetric difference of the clusters of u1 and u2 up to ``top``.

    Returns ``(levels, counts, alive)`` where ``alive`` tells whether both
    clusters reach ``top``.
    """
    u1, u2 = Vertex(*u1), Vertex(*u2)
    t0 = min(u1.t, u2.t)
    lo = min(u1.x, u2.x) - (top - t0) - 1
    nx = max(u1.x, u2.x) + (top - t0) + 1 - lo + 1
    counts = np.zeros(top - t0 + 1, dtype=np.int64)
    alive = _kernels.stream_pair_diff(_signed64(cfg.seed), cfg.p, lo, nx, t0,
                                      u1.x, u1.t, u2.x, u2.t, top - t0 + 1, counts)
    return np.arange(t0, top + 1), counts, alive == 3


def symm_diff_stabilization(p: float, u1, u2, N_ladder, samples: int, seed: int) -> dict:
    """Sizes of the symmetric difference of two clusters inside growing boxes.

    Box N holds the levels up to ``max(t1, t2) + N``.  A sample is certified
    when both origins reach the top of the largest box; it is stable when the
    two largest boxes give the same size.
    """
    u1, u2 = Vertex(*u1), Vertex(*u2)
    N_ladder = sorted(N_ladder)
    base = max(u1.t, u2.t)
    t0 = min(u1.t, u2.t)
    rows = []
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, "symm_diff", i), p)
        _, counts, alive = symm_diff_counts(cfg, u1, u2, base + N_ladder[-1])
        if not alive:
            rows.append({"sample": i, "certified": False})
            continue
        cum = np.cumsum(counts)
        sizes = {N: int(cum[base + N - t0]) for N in N_ladder}
        stable = len(N_ladder) < 2 or sizes[N_ladder[-1]] == sizes[N_ladder[-2]]
        rows.append({"sample": i, "certified": True, "sizes": sizes, "stable": stable})
    cert = [r for r in rows if r["certified"]]
    frac = sum(r["stable"] for r in cert) / len(cert) if cert else math.nan
    return {"rows": rows, "certified": len(cert), "stable_fraction": frac}


# -- crossings -----------------------------------------------------------------

def crossing_counts(p: float, N_ladder, samples: int, seed: int, alpha: float,
                    margin_frac: float = 0.2) -> dict:
    """Crossings of the line t = x / alpha by gamma_(0,0) below N - margin."""
    out = {}
    for N in N_ladder:
        cutoff = N - int(margin_frac * N)
        counts = []
        for i in range(samples):
            cfg = EdgeConfig(sample_seed(seed, "crossings", i), p)
            grid, co = _origin_grid(cfg, N)
            if not co[grid.window.index((0, 0))]:
                continue
            path = greedy_path(grid, co, Vertex(0, 0), cutoff)
            cols = np.array([v.x for v in path.vertices], dtype=float)
            counts.append(count_crossings(cols, alpha))
        out[N] = counts
    return out


# -- genealogy checks ------------------------------------------------------------

def branch_stability(p: float, N_pair, samples: int, seed: int, width: int = 10,
                     below: int | None = None) -> dict:
    """Branch sizes of bidirectional points on one level under two horizons.

    Sampled sites reach the larger horizon and are reached from ``below``
    levels under them (default: the larger N); only branches that are
    untruncated under both horizons are compared.
    """
    n_small, n_big = N_pair
    below = n_big if below is None else below
    row = Window(-width, width, 0, 0)
    compared = same = 0
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, "branches", i), p)
        f_small = Forest(row, n_small, cfg, below=below)
        f_big = Forest(row, n_big, cfg, below=below)
        down = _down_reached(f_big, below)
        for v in sorted(f_big.vertices):
            if v not in f_small or not down(v):
                continue
            b1, b2 = f_small.branch(v), f_big.branch(v)
            if b1.truncated or b2.truncated:
                continue
            compared += 1
            same += len(b1.vertices) == len(b2.vertices)
    return {"compared": compared, "same": same,
            "fraction": same / compared if compared else math.nan}


def _down_reached(forest: Forest, depth: int):
    """Membership test: reached from the row ``depth`` levels below."""
    g = forest.grid
    r = forest.region
    reach = np.zeros((r.nt, r.nx), dtype=np.bool_)
    i0 = forest.window.t_min - depth - r.t_min
    reach[i0, (np.arange(r.nx) + r.x_min + r.t_min + i0) % 2 == 0] = True
    _kernels.sweep_up(g.left, g.right, reach, i0, forest.window.t_max - r.t_min)
    return lambda v: bool(reach[r.index(v)])


def succession_check(p: float, N: int, samples: int, seed: int,
                     window: Window = Window(-6, 6, 0, 2), below: int = 600,
                     max_steps: int = 200_000) -> dict:
    """Inverse property of successor/predecessor and line order versus precedence.

    Within each certified component of the window the vertices are sorted
    with the precedence comparator, then the successor walk from the first
    must meet every one of them exactly once, in that order.  ``covered``
    counts points in certified components (singletons included) and
    ``once`` those met exactly once.
    """
    inverse_checked = inverse_ok = 0
    comps = comps_ok = comps_cert = 0
    covered = once = total = 0
    for i in range(samples):
        cfg = EdgeConfig(sample_seed(seed, "succession", i), p)
        f = Forest(window, N, cfg, below=below)
        for v in f.vertices:
            s = f.successor(v)
            if s is not None:
                q = f.predecessor(s)
                if q is not None:
                    inverse_checked += 1
                    inverse_ok += q == v
        for members in f.components().values():
            total += len(members)
            if len(members) < 2:
                covered += 1
                once += 1
                continue
            comps += 1
            order = sorted(members, key=f.sort_key())
            wanted = set(order)
            seen = []
            cur = order[0]
            steps = 0
            while cur is not None and steps < max_steps:
                if cur in wanted:
                    seen.append(cur)
                    if cur == order[-1]:
                        break
                cur = f.successor(cur)
                steps += 1
            if not seen or seen[-1] != order[-1]:
                continue
            comps_cert += 1
            covered += len(seen)
            once += sum(seen.count(v) == 1 for v in order)
            ok = seen == order
            comps_ok += ok
    return {"inverse_checked": inverse_checked, "inverse_ok": inverse_ok,
            "components": comps, "components_certified": comps_cert,
            "components_ok": comps_ok, "covered": covered, "once": once, "total": total}
