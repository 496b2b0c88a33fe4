"""Parameter grids, sweep records and their flat-file formats.

Floats are written as ``%.16e`` (17 significant digits, locale-free), which
round-trips IEEE doubles exactly. Undefined fidelities (vanishing heralding
probability) are written as ``nan`` in CSV and ``null`` in JSON.
"""

import csv
from dataclasses import asdict, dataclass
import json
import math
import re

import numpy as np

from .estimators import HeraldedQubitModel
from .exceptions import InvalidArgumentError
from .validation import check_cutoff_spec, check_eta, check_mode, check_outcome

_PI_TERM = re.compile(r"^\s*(?P<coef>[-+]?(\d+(\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(/\s*(?P<div>\d+(\.\d*)?))?\s*$")


def parse_value(text):
    """Parse a float, also accepting multiples of pi such as ``pi/3`` or ``2*pi``."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_TERM.match(text)
    if m is None:
        raise InvalidArgumentError(f"cannot parse number {text!r}")
    coef = m.group("coef")
    coef = -1.0 if coef == "-" else 1.0 if coef in ("", "+", None) else float(coef)
    div = float(m.group("div")) if m.group("div") else 1.0
    return coef * math.pi / div


@dataclass(frozen=True)
class GridRange:
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidArgumentError("range bounds must be finite")
        if self.steps < 2 and not (self.steps == 1 and self.start == self.stop):
            raise InvalidArgumentError(f"a range needs at least 2 steps, got {self.steps}")

    @classmethod
    def parse(cls, text):
        parts = str(text).split(":")
        if len(parts) != 3:
            raise InvalidArgumentError(f"range must look like a:b:n, got {text!r}")
        try:
            steps = int(parts[2])
        except ValueError:
            raise InvalidArgumentError(f"step count must be an integer, got {parts[2]!r}") from None
        return cls(parse_value(parts[0]), parse_value(parts[1]), steps)

    @classmethod
    def single(cls, value):
        return cls(float(value), float(value), 1)

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    gamma: GridRange
    phi: GridRange
    eta: float
    outcome: str = "yn"
    mode: str = "analytic"
    cutoff: object = "auto"

    def __post_init__(self):
        object.__setattr__(self, "eta", check_eta(self.eta))
        object.__setattr__(self, "outcome", check_outcome(self.outcome))
        check_mode(self.mode)
        object.__setattr__(self, "cutoff", check_cutoff_spec(self.cutoff))
        if min(self.gamma.start, self.gamma.stop) < 0:
            raise InvalidArgumentError("gamma range must be non-negative")

    def grid(self):
        """``(n, 2)`` array of ``(gamma, phi)``; phi is the outer (slow) index."""
        g = self.gamma.values()
        p = self.phi.values()
        return np.column_stack([np.tile(g, len(p)), np.repeat(p, len(g))])


@dataclass(frozen=True)
class SweepRecord:
    gamma: float
    phi: float
    eta: float
    p_yn: float
    fidelity: float
    dp: float = None
    dF: float = None

    def fields(self, with_deltas):
        out = [self.gamma, self.phi, self.eta, self.p_yn, self.fidelity]
        return out + [self.dp, self.dF] if with_deltas else out


CSV_FIELDS = ["gamma", "phi", "eta", "p_yn", "fidelity"]
DELTA_FIELDS = ["dp", "dF"]


def run_sweep(spec, n_jobs=None):
    X = spec.grid()
    model = HeraldedQubitModel(spec.eta, spec.outcome, spec.mode, spec.cutoff, n_jobs=n_jobs)
    Y = model.fit_transform(X)
    records = []
    for (g, p), row in zip(X, Y):
        extra = {"dp": float(row[2]), "dF": float(row[3])} if spec.mode == "both" else {}
        records.append(SweepRecord(float(g), float(p), spec.eta, float(row[0]), float(row[1]), **extra))
    return records


def format_float(x):
    if x is None or math.isnan(x):
        return "nan"
    return format(x, ".16e")


def _has_deltas(records):
    return bool(records) and records[0].dp is not None


def write_csv(records, fh):
    with_deltas = _has_deltas(records)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_FIELDS + (DELTA_FIELDS if with_deltas else []))
    for r in records:
        writer.writerow([format_float(x) for x in r.fields(with_deltas)])


def read_csv(fh):
    reader = csv.reader(fh)
    header = next(reader)
    if header[: len(CSV_FIELDS)] != CSV_FIELDS:
        raise InvalidArgumentError(f"unexpected CSV header {header}")
    return [SweepRecord(**{k: float(v) for k, v in zip(header, row)}) for row in reader]


def _json_value(x):
    return None if x is None or math.isnan(x) else x


def write_json(records, fh):
    with_deltas = _has_deltas(records)
    keys = CSV_FIELDS + (DELTA_FIELDS if with_deltas else [])
    rows = [{k: _json_value(v) for k, v in zip(keys, r.fields(with_deltas))} for r in records]
    json.dump(rows, fh, indent=1, allow_nan=False)
    fh.write("\n")


def read_json(fh):
    rows = json.load(fh)
    return [
        SweepRecord(**{k: (math.nan if v is None else v) for k, v in row.items()})
        for row in rows
    ]


def write_gnuplot(records, fh):
    """Blank-line separated blocks (one per phi) for ``splot ... with pm3d``."""
    fh.write("# gamma phi p_yn fidelity\n")
    last_phi = None
    for r in records:
        if last_phi is not None and r.phi != last_phi:
            fh.write("\n")
        last_phi = r.phi
        fh.write(" ".join(format_float(x) for x in (r.gamma, r.phi, r.p_yn, r.fidelity)) + "\n")


def records_as_dicts(records):
    return [asdict(r) for r in records]
