"""CSV and SVG renderings of a velocity sweep (B1 against velocity)."""

from __future__ import annotations

from pathlib import Path

from .sweep import SweepResult

CSV_HEADER = "velocity_mps,b0,b1,active_pixels"


def sweep_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    lines += [f"{e.v:g},{e.b0},{e.b1},{e.active_pixels}" for e in result.entries]
    return "\n".join(lines) + "\n"


def emit_csv(result: SweepResult, path) -> None:
    if not result.entries:
        raise ValueError("empty sweep result")
    Path(path).write_text(sweep_csv(result), encoding="utf-8", newline="\n")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def curve_svg(result: SweepResult, width: int = 640, height: int = 400) -> str:
    """Single polyline of B1 against velocity with the minimum marked."""
    if not result.entries:
        raise ValueError("empty sweep result")
    left, right, top, bottom = 70, 20, 30, 55
    pw, ph = width - left - right, height - top - bottom
    vs = [e.v for e in result.entries]
    bs = [e.b1 for e in result.entries]
    v0, v1 = min(vs), max(vs)
    b_hi = max(max(bs), 1)

    def px(v):
        return left + (pw * (v - v0) / (v1 - v0) if v1 > v0 else pw / 2)

    def py(b):
        return top + ph * (1.0 - b / b_hi)

    pts = " ".join(f"{px(v):.2f},{py(b):.2f}" for v, b in zip(vs, bs))
    best = result.entry(result.argmin_v)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for v in _ticks(v0, v1):
        x = px(v)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle">{v:.0f}</text>')
    for b in _ticks(0, b_hi):
        y = py(b)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{b:.0f}</text>')
    out += [
        f'<text x="{left + pw / 2:.2f}" y="{height - 12}" text-anchor="middle">migration velocity (m/s)</text>',
        f'<text x="18" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + ph / 2:.2f})">Betti number B1</text>',
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>',
        f'<circle cx="{px(best.v):.2f}" cy="{py(best.b1):.2f}" r="5" fill="crimson"/>',
        f'<text x="{px(best.v):.2f}" y="{py(best.b1) - 10:.2f}" text-anchor="middle" '
        f'fill="crimson">min B1 = {best.b1} at {best.v:g} m/s</text>',
        f'<text x="{left + pw / 2:.2f}" y="18" text-anchor="middle">B1 vs migration velocity '
        f'(tau = {result.tau:g})</text>',
        "</svg>",
    ]
    return "\n".join(out) + "\n"


def emit_curve_svg(result: SweepResult, path) -> None:
    Path(path).write_text(curve_svg(result), encoding="utf-8", newline="\n")
