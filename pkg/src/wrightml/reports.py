"""Grid specifications and scan reports, with lossless CSV serialisation."""
from dataclasses import dataclass, field
import enum
import io
import math

import numpy as np

CSV_FLOAT = ".17g"


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid.

    ``spacing`` is ``linear``, ``log`` (geometric between xmin and xmax,
    which must share a sign) or ``mixed``: half the points linear between
    ``xmin`` and ``split`` and the rest geometric between ``split`` and
    ``xmax``. Points are returned sorted and without duplicates.
    """

    xmin: float
    xmax: float
    n: int
    spacing: str = "linear"
    split: float = math.nan

    def __post_init__(self):
        if self.spacing not in ("linear", "log", "mixed", "index"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.n < 2:
            raise ValueError("a grid needs at least two points")

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        same_split = self.split == other.split or (math.isnan(self.split) and math.isnan(other.split))
        return (self.xmin, self.xmax, self.n, self.spacing) == (other.xmin, other.xmax, other.n, other.spacing) and same_split

    def __hash__(self):
        return hash((self.xmin, self.xmax, self.n, self.spacing))

    def points(self):
        if self.spacing in ("linear", "index"):
            pts = np.linspace(self.xmin, self.xmax, self.n)
        elif self.spacing == "log":
            pts = np.geomspace(self.xmin, self.xmax, self.n)
        else:
            n_lin = self.n // 2
            lin = np.linspace(self.xmin, self.split, n_lin)
            geo = np.geomspace(self.split, self.xmax, self.n - n_lin + 1)[1:]
            pts = np.concatenate([lin, geo])
        return np.unique(pts)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), CSV_FLOAT)


def _parse_number(s):
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        return float(s)


@dataclass(frozen=True)
class ScanReport:
    """Outcome of a grid scan of a sign condition."""

    property: str
    params: dict
    grid_spec: GridSpec
    verdict: Verdict
    min_value: float
    witness: float
    tolerance: float
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self):
        return self.verdict == Verdict.HOLDS

    def header(self):
        return (["property"] + [f"param_{k}" for k in self.params]
                + ["xmin", "xmax", "n", "spacing", "split", "verdict",
                   "min_value", "witness", "tolerance"])

    def row(self):
        g = self.grid_spec
        return ([self.property] + [_fmt(v) for v in self.params.values()]
                + [_fmt(g.xmin), _fmt(g.xmax), str(g.n), g.spacing, _fmt(g.split),
                   self.verdict.value, _fmt(self.min_value), _fmt(self.witness),
                   _fmt(self.tolerance)])

    def to_csv(self):
        return ",".join(self.header()) + "\n" + ",".join(self.row()) + "\n"

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.splitlines() if ln]
        head = lines[0].split(",")
        vals = lines[1].split(",")
        rec = dict(zip(head, vals))
        params = {k[len("param_"):]: _parse_number(v) for k, v in rec.items() if k.startswith("param_")}
        grid = GridSpec(float(rec["xmin"]), float(rec["xmax"]), int(rec["n"]),
                        rec["spacing"], float(rec["split"]))
        return cls(rec["property"], params, grid, Verdict(rec["verdict"]),
                   float(rec["min_value"]), float(rec["witness"]), float(rec["tolerance"]))

    def to_text(self):
        g = self.grid_spec
        p = ", ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        out = io.StringIO()
        out.write(f"property  = {self.property}\n")
        out.write(f"params    = {p}\n")
        out.write(f"grid      = [{_fmt(g.xmin)}, {_fmt(g.xmax)}] n={g.n} {g.spacing}"
                  + ("" if math.isnan(g.split) else f" split={_fmt(g.split)}") + "\n")
        out.write(f"verdict   = {self.verdict.value}\n")
        out.write(f"min_value = {_fmt(self.min_value)}\n")
        out.write(f"witness   = {_fmt(self.witness)}\n")
        out.write(f"tolerance = {_fmt(self.tolerance)}\n")
        return out.getvalue()


def verdict_from_samples(values, errors, xs, factor=10.0, floor=0.0):
    """Verdict for the condition ``values >= 0`` sampled at ``xs``.

    A point fails when its value is below ``-(factor * error + floor)``.
    Returns ``(verdict, min_value, witness, tolerance_at_witness)``.
    """
    values = np.asarray(values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    tol = factor * errors + floor
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.nonzero(~finite)[0][0])
        return Verdict.INCONCLUSIVE, math.nan, float(xs[bad]), math.inf
    i = int(np.argmin(values))
    margin = values + tol
    if np.any(margin < 0):
        j = int(np.argmin(values / np.maximum(tol, 1e-300)))
        j = j if margin[j] < 0 else int(np.nonzero(margin < 0)[0][0])
        return Verdict.FAILS, float(values[j]), float(xs[j]), float(tol[j])
    if values[i] < 0:
        return Verdict.INCONCLUSIVE, float(values[i]), float(xs[i]), float(tol[i])
    return Verdict.HOLDS, float(values[i]), float(xs[i]), float(tol[i])
