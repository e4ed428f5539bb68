"""``simulate <experiment> --spec <file>``: batch runs with reproducible artifacts.

A spec file is JSON::

    {"experiment": "theta", "p": [0.5, 0.8], "N": [50, 100], "samples": 200,
     "seed": 1, "margin": null, "out": "runs/theta"}

Optional keys: ``dx`` (coalescence), ``u1``/``u2`` (symm_diff), ``alpha``
(crossings).  Outputs land in ``out``: ``table.csv`` (one row per (p, N)
cell), ``long.csv`` (one row per value) and ``manifest.json``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shutil
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

from . import experiments as ex
from .errors import InsufficientDataError, SpecError

EXPERIMENTS = ("theta", "alpha_sigma", "clt", "coalescence", "symm_diff", "crossings")


@dataclass
class ExperimentSpec:
    experiment: str
    p: list[float]
    N: list[int]
    samples: int
    seed: int = 0
    margin: int | None = None
    out: str = "out"
    extra: dict = field(default_factory=dict)

    def validate(self) -> ExperimentSpec:
        if self.experiment not in EXPERIMENTS:
            raise SpecError("experiment", f"unknown experiment {self.experiment!r}")
        if not self.p or any(not isinstance(q, (int, float)) or not 0 <= q <= 1 for q in self.p):
            raise SpecError("p", "p must be a non-empty list of numbers in [0, 1]")
        if not self.N or any(not isinstance(n, int) or isinstance(n, bool) or n < 1 for n in self.N):
            raise SpecError("N", "N must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(self.N, self.N[1:])):
            raise SpecError("N", "N ladder must be strictly increasing")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise SpecError("samples", "samples must be an integer >= 1")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise SpecError("seed", "seed must be a nonnegative integer")
        if self.margin is not None and (not isinstance(self.margin, int) or self.margin < 0):
            raise SpecError("margin", "margin must be a nonnegative integer or null")
        return self


_KNOWN = {"experiment", "p", "N", "samples", "seed", "margin", "out"}


def load_spec(text: str) -> ExperimentSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError("<file>", f"not valid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise SpecError("<file>", "top level must be an object")
    for key in ("experiment", "p", "N", "samples"):
        if key not in raw:
            raise SpecError(key, "missing")
    p = raw["p"] if isinstance(raw["p"], list) else [raw["p"]]
    N = raw["N"] if isinstance(raw["N"], list) else [raw["N"]]
    spec = ExperimentSpec(raw["experiment"], p, N, raw["samples"], raw.get("seed", 0),
                          raw.get("margin"), raw.get("out", "out"),
                          {k: v for k, v in raw.items() if k not in _KNOWN})
    return spec.validate()


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return "" if v is None else str(v)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def _long(rows: list[dict], keys: tuple[str, ...]) -> list[dict]:
    out = []
    for r in rows:
        for k, v in r.items():
            if k in keys:
                continue
            out.append({**{c: r[c] for c in keys}, "quantity": k, "value": v})
    return out


def _report_row(p, N, rep) -> dict:
    row = {"p": p, "N": N, "estimate": rep.estimate, "se": rep.se, "n": rep.n}
    row.update({k: v for k, v in sorted(rep.diagnostics.items())
                if isinstance(v, (int, float, bool))})
    return row


def compute(spec: ExperimentSpec) -> list[dict]:
    """Rows of the result table; a pure function of ``spec``."""
    e, rows = spec.experiment, []
    x = spec.extra
    for p in spec.p:
        if e == "theta":
            rows += [_report_row(p, N, ex.estimate_theta(p, N, spec.samples, spec.seed))
                     for N in spec.N]
        elif e == "alpha_sigma":
            for N in spec.N:
                try:
                    rep = ex.estimate_alpha_sigma(p, N, spec.samples, spec.seed, spec.margin)
                    rows.append(_report_row(p, N, rep))
                except InsufficientDataError:
                    rows.append({"p": p, "N": N, "estimate": math.nan, "se": math.nan, "n": 0})
        elif e == "clt":
            for N in spec.N:
                rep = ex.clt_diagnostic(p, N, spec.samples, spec.seed, spec.margin)
                rows.append(_report_row(p, N, rep))
        elif e == "coalescence":
            frac = 0.2 if spec.margin is None else None
            dx = x.get("dx", [0, 2, 6, 10, 20])
            if frac is None:
                for N in spec.N:
                    rows += ex.coalescence_curve(p, dx, [N], spec.samples, spec.seed,
                                                 margin_frac=spec.margin / N)
            else:
                rows += ex.coalescence_curve(p, dx, spec.N, spec.samples, spec.seed)
        elif e == "symm_diff":
            res = ex.symm_diff_stabilization(p, tuple(x.get("u1", (0, 0))),
                                             tuple(x.get("u2", (2, 0))),
                                             spec.N, spec.samples, spec.seed)
            for N in spec.N:
                sizes = [r["sizes"][N] for r in res["rows"] if r["certified"]]
                rows.append({"p": p, "N": N, "certified": res["certified"],
                             "mean_size": sum(sizes) / len(sizes) if sizes else math.nan,
                             "stable_fraction": res["stable_fraction"]})
        elif e == "crossings":
            alpha = x.get("alpha")
            if alpha is None:
                alpha = ex.estimate_alpha_sigma(p, max(spec.N), spec.samples, spec.seed).estimate
            res = ex.crossing_counts(p, spec.N, spec.samples, spec.seed, alpha)
            for N in spec.N:
                c = sorted(res[N])
                med = (c[(len(c) - 1) // 2] + c[len(c) // 2]) / 2 if c else math.nan
                rows.append({"p": p, "N": N, "alpha": alpha, "survivors": len(c),
                             "median_crossings": med})
    return rows


def run(spec: ExperimentSpec | str | Path) -> int:
    """Execute a spec; on failure no partial output is left behind."""
    if not isinstance(spec, ExperimentSpec):
        spec = load_spec(Path(spec).read_text())
    else:
        spec.validate()
    out = Path(spec.out)
    tmp = Path(tempfile.mkdtemp(prefix=".simulate-", dir=out.parent if out.parent.exists() else None))
    try:
        rows = compute(spec)
        (tmp / "table.csv").write_text(_csv(rows))
        keys = tuple(k for k in ("p", "N", "dx") if rows and k in rows[0])
        (tmp / "long.csv").write_text(_csv(_long(rows, keys)))
        manifest = {"spec": asdict(spec), "code_version": _version(),
                    "seed_rule": "sample i uses sample_seed(seed, experiment, i)",
                    "targets": "self-generated fixtures; no published values"}
        (tmp / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        if out.exists():
            shutil.rmtree(out)
        shutil.move(str(tmp), str(out))
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return 0


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simulate", description="Oriented percolation experiments.")
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--spec", required=True, help="JSON spec file")
    ap.add_argument("--p", type=float, nargs="+")
    ap.add_argument("--N", type=int, nargs="+")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--margin", type=int)
    ap.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        raw = json.loads(Path(args.spec).read_text())
        if not isinstance(raw, dict):
            raise SpecError("<file>", "top level must be an object")
        raw["experiment"] = args.experiment
        for key in ("p", "N", "samples", "seed", "margin", "out"):
            val = getattr(args, key)
            if val is not None:
                raw[key] = val
        run(load_spec(json.dumps(raw)))
    except (OSError, json.JSONDecodeError) as e:
        print(f"simulate: {e}", file=sys.stderr)
        return 2
    except SpecError as e:
        print(f"simulate: invalid spec: {e}", file=sys.stderr)
        return 2
    except InsufficientDataError as e:
        print(f"simulate: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
