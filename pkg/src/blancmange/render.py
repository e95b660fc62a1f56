"""Multiscale snapshot rendering: one CSV and one SVG per magnification frame.

Frame ``i`` is the window of width ``factor**-i`` centred on ``center``.
Every frame plots the same tuple of partial sums ``B_N1, ..., B_Nk``.
Abscissae are lattice points, so each cell has an exact reference value;
cells are written as floats within ``tail_bound(N) + 2**-40`` of ``B``.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import DomainError
from .numeric import rat_str
from .series import BlancmangeSpec, partial_sum, tail_bound

MAX_SUMS = 6
FLOAT_SLACK = Fraction(1, 2**40)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf")

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 30, 40


@dataclass(frozen=True)
class RenderJob:
    spec: BlancmangeSpec
    sums: tuple[int, ...]
    center: Fraction
    factor: Fraction
    frames: int = 6
    resolution: int = 256
    out: Path = field(default=Path("frames"))

    def __post_init__(self) -> None:
        object.__setattr__(self, "sums", tuple(self.sums))
        object.__setattr__(self, "out", Path(self.out))
        if not 1 <= len(self.sums) <= MAX_SUMS:
            raise DomainError(f"need between 1 and {MAX_SUMS} partial-sum orders, got {len(self.sums)}")
        if any(n < 0 for n in self.sums):
            raise DomainError("partial-sum orders must be >= 0")
        if self.factor <= 1:
            raise DomainError(f"magnification factor must exceed 1, got {self.factor}")
        if self.frames < 1:
            raise DomainError(f"need at least one frame, got {self.frames}")
        if self.resolution < 2:
            raise DomainError(f"resolution must be >= 2, got {self.resolution}")

    @property
    def budget(self) -> Fraction:
        return tail_bound(self.spec, max(self.sums)) + FLOAT_SLACK


@dataclass(frozen=True)
class Frame:
    index: int
    lo: Fraction
    hi: Fraction
    level: int
    abscissae: tuple[Fraction, ...]
    columns: tuple[tuple[float, ...], ...]

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def frame_window(job: RenderJob, index: int) -> tuple[Fraction, Fraction]:
    half = job.factor**-index / 2
    return job.center - half, job.center + half


def frame_abscissae(spec: BlancmangeSpec, lo: Fraction, hi: Fraction, resolution: int) -> tuple[int, list[Fraction]]:
    """Lattice abscissae in ``[lo, hi]``: the coarsest level giving ``resolution`` points, thinned evenly."""
    level, denom = 0, spec.p
    while math.floor(hi * denom) - math.ceil(lo * denom) + 1 < resolution:
        level += 1
        denom *= spec.b
    first, last = math.ceil(lo * denom), math.floor(hi * denom)
    stride = max(1, (last - first) // (resolution - 1))
    return level, [Fraction(j, denom) for j in range(first, last + 1, stride)]


def compute_frame(job: RenderJob, index: int) -> Frame:
    lo, hi = frame_window(job, index)
    level, ts = frame_abscissae(job.spec, lo, hi, job.resolution)
    columns = tuple(tuple(float(partial_sum(job.spec, n, t)) for t in ts) for n in job.sums)
    return Frame(index, lo, hi, level, tuple(ts), columns)


def frame_csv(job: RenderJob, frame: Frame) -> str:
    lines = [",".join(["t"] + [f"B_{n}" for n in job.sums])]
    for row, t in enumerate(frame.abscissae):
        lines.append(",".join([rat_str(t)] + [repr(col[row]) for col in frame.columns]))
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def frame_svg(job: RenderJob, frame: Frame) -> str:
    """Polyline chart with a legend box; no plotting library involved."""
    x0, x1 = float(frame.lo), float(frame.hi)
    values = [v for col in frame.columns for v in col]
    y0, y1 = min(values), max(values)
    if y1 - y0 < 1e-300:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = (y1 - y0) * 0.05
    y0, y1 = y0 - pad, y1 + pad
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x0) / (x1 - x0) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (y1 - y) / (y1 - y0) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#444" stroke-width="1"/>',
        f'<text x="{MARGIN_L}" y="{MARGIN_T - 10}" font-size="13">frame {frame.index}: '
        f'center {rat_str(job.center)}, width {rat_str(frame.width)}</text>',
    ]
    for frac, anchor in ((0.0, "start"), (1.0, "end")):
        xv = x0 + frac * (x1 - x0)
        out.append(
            f'<text x="{_fmt(px(xv))}" y="{HEIGHT - MARGIN_B + 16}" text-anchor="{anchor}">{xv:.6g}</text>'
        )
    for yv in (y0 + pad, y1 - pad):
        out.append(f'<text x="{MARGIN_L - 4}" y="{_fmt(py(yv))}" text-anchor="end">{yv:.4g}</text>')
    cx = float(job.center)
    out.append(
        f'<line x1="{_fmt(px(cx))}" y1="{MARGIN_T}" x2="{_fmt(px(cx))}" y2="{MARGIN_T + plot_h}" '
        f'stroke="#bbb" stroke-dasharray="4 3"/>'
    )
    for color, n, col in zip(PALETTE, job.sums, frame.columns):
        pts = " ".join(f"{_fmt(px(float(t)))},{_fmt(py(v))}" for t, v in zip(frame.abscissae, col))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')

    lx, ly = MARGIN_L + 8, MARGIN_T + 8
    out.append(
        f'<rect x="{lx}" y="{ly}" width="70" height="{14 * len(job.sums) + 8}" '
        f'fill="white" fill-opacity="0.85" stroke="#888"/>'
    )
    for row, (color, n) in enumerate(zip(PALETTE, job.sums)):
        yy = ly + 14 + 14 * row
        out.append(f'<line x1="{lx + 6}" y1="{yy - 4}" x2="{lx + 24}" y2="{yy - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 30}" y="{yy}">B_{n}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _manifest(job: RenderJob, frames: Sequence[Frame]) -> dict:
    return {
        "spec": job.spec.to_json(),
        "sums": list(job.sums),
        "center": rat_str(job.center),
        "factor": rat_str(job.factor),
        "resolution": job.resolution,
        "budget": rat_str(job.budget),
        "frames": [
            {
                "index": fr.index,
                "lo": rat_str(fr.lo),
                "hi": rat_str(fr.hi),
                "width": rat_str(fr.width),
                "level": fr.level,
                "samples": len(fr.abscissae),
                "csv": f"frame_{fr.index}.csv",
                "svg": f"frame_{fr.index}.svg",
            }
            for fr in frames
        ],
    }


def render(job: RenderJob, workers: int = 1) -> list[Path]:
    """Write ``frame_<i>.csv``/``frame_<i>.svg`` for each frame plus ``manifest.json``."""
    try:
        job.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DomainError(f"cannot create output directory {job.out}: {exc}") from None
    indices = range(job.frames)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            frames = list(pool.map(compute_frame, [job] * job.frames, indices))
    else:
        frames = [compute_frame(job, i) for i in indices]

    written = []
    try:
        for fr in frames:
            csv_path = job.out / f"frame_{fr.index}.csv"
            svg_path = job.out / f"frame_{fr.index}.svg"
            csv_path.write_text(frame_csv(job, fr))
            svg_path.write_text(frame_svg(job, fr))
            written += [csv_path, svg_path]
        manifest = job.out / "manifest.json"
        manifest.write_text(json.dumps(_manifest(job, frames), indent=2) + "\n")
    except OSError as exc:
        raise DomainError(f"cannot write frames to {job.out}: {exc}") from None
    written.append(manifest)
    return written


def read_frame_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
