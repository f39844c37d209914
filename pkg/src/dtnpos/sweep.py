"""Parameter sweeps: classify along a grid, write CSV/JSON, summarize bands."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .assembly import assemble_outer
from .errors import AtPole, InnerBlockSingular
from .graphs import MetricGraph
from .positivity import DEFAULT_CONFIG, ClassifierConfig, classify
from .spectra import pole_scan

TAG_POLE = "pole"


@dataclass(frozen=True)
class SweepRecord:
    lam: float
    eigenvalues: tuple[float, ...]
    tag: str
    near_pole: bool


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    tag: str
    count: int


def sweep(g: MetricGraph, lo: float, hi: float, steps: int,
          cfg: ClassifierConfig = DEFAULT_CONFIG,
          scan_samples: int = 2000) -> list[SweepRecord]:
    """Classify the outer matrix on a uniform grid of `steps` samples.

    The sign pattern flips exactly at a pole, so classifications remain valid
    arbitrarily close to one; near_pole flags only the tight zone where the
    assembly loses precision.  Samples where the assembly itself breaks down
    get the tag "pole" and NaN eigenvalues.
    """
    if steps < 2:
        raise ValueError("need at least two samples")
    grid = np.linspace(lo, hi, steps)
    poles = pole_scan(g, lo, hi, samples=scan_samples)

    m = g.n_outer
    records = []
    for lam in grid:
        lam = float(lam)
        near = any(abs(lam - p) <= 1e-9 * max(1.0, abs(p)) for p in poles)
        try:
            D = assemble_outer(g, lam)
        except (AtPole, InnerBlockSingular):
            records.append(SweepRecord(lam, (math.nan,) * m, TAG_POLE, True))
            continue
        eigs = tuple(float(x) for x in np.linalg.eigvalsh(D.entries))
        records.append(SweepRecord(lam, eigs, classify(D, cfg).tag, near))
    return records


def report(records: Sequence[SweepRecord]) -> list[Band]:
    """Merge consecutive equal classifications into bands.

    near_pole samples are skipped: they neither open, extend, nor close a
    band, so a pole splits the surrounding samples into separate bands.
    """
    bands: list[Band] = []
    current: list[SweepRecord] = []

    def flush():
        if current:
            bands.append(Band(lo=current[0].lam, hi=current[-1].lam,
                              tag=current[0].tag, count=len(current)))
            current.clear()

    for rec in records:
        if rec.near_pole:
            flush()
            continue
        if current and rec.tag != current[0].tag:
            flush()
        current.append(rec)
    flush()
    return bands


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


def write_csv(records: Sequence[SweepRecord], out: TextIO) -> None:
    if not records:
        raise ValueError("nothing to write")
    m = len(records[0].eigenvalues)
    header = ["lambda"] + ["eig_%d" % (i + 1) for i in range(m)] + ["class", "near_pole"]
    out.write(",".join(header) + "\n")
    for rec in records:
        row = [_fmt(rec.lam)] + [_fmt(e) for e in rec.eigenvalues]
        row += [rec.tag, "true" if rec.near_pole else "false"]
        out.write(",".join(row) + "\n")


def write_json(records: Sequence[SweepRecord], out: TextIO) -> None:
    payload = [
        {
            "lambda": rec.lam,
            "eigenvalues": [None if math.isnan(e) else e for e in rec.eigenvalues],
            "class": rec.tag,
            "near_pole": rec.near_pole,
        }
        for rec in records
    ]
    json.dump(payload, out, indent=2)
    out.write("\n")
