"""Hemisphere arrangements over a fundamental polygon, split by a height plane.

A determinant-one matrix with bottom-left entry mu != 0 and top-left
entry lambda acts through an isometric hemisphere centered at lambda/mu
with squared radius 1/norm(mu), and every unimodular pair (lambda, mu)
arises this way.  Enumerating the pairs up to a norm bound gives a
finite stage of the full arrangement; exact rational grid scans then
certify which hemispheres carry visible faces, and the visible faces
can be divided by a horizontal plane t = t0.  Every classification is a
rational comparison; floats appear only in the SVG emitter.

A hemisphere is only ever reported as covered "up to" the scan pitch.
Claiming more would need a completeness certificate for the truncated
arrangement, which is out of scope here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import OutOfScope
from .ford import FundPolygon, Point
from .moebius import Hemisphere, Mat
from .orders import (
    KElem,
    OInt,
    Order,
    kelem_from_planar,
    lattice_points_norm_at_most,
    lattice_points_within,
)


def _one_in_span(gens: Sequence[OInt], order: Order) -> tuple[OInt, OInt] | None:
    """Write 1 over the Z-span of (a, a*tau, b, b*tau), or None.

    Rows carry coordinates in the basis (1, tau) plus a tracked
    coefficient vector; a column-echelon reduction over Z decides
    whether (1, 0) lies in the row lattice and, if so, reads off an
    integer combination.  The tracked coefficients regroup into order
    elements x, y with x*a + y*b = 1.
    """
    rows = []
    for i, g in enumerate(gens):
        row = [g.a, g.b, 0, 0, 0, 0]
        row[2 + i] = 1
        rows.append(row)

    def clear_column(col: int, pool: list[list[int]]) -> tuple[list[int] | None, list[list[int]]]:
        live = [r for r in pool if r[col] != 0]
        rest = [r for r in pool if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(6):
                    r[j] -= q * pivot[j]
            rest.extend(r for r in live[1:] if r[col] == 0)
            live = [pivot] + [r for r in live[1:] if r[col] != 0]
        return (live[0] if live else None, rest)

    p0, rest = clear_column(0, rows)
    p1, _ = clear_column(1, rest)
    if p0 is None or abs(p0[0]) != 1:
        return None
    c0 = p0[0]  # c0 * p0 starts with 1
    y_rem = -c0 * p0[1]
    if p1 is None:
        if y_rem != 0:
            return None
        c1 = 0
        p1 = [0] * 6
    elif y_rem % p1[1] != 0:
        return None
    else:
        c1 = y_rem // p1[1]
    combo = [c0 * p0[j] + c1 * p1[j] for j in range(6)]
    x = OInt(order, combo[2], combo[3])
    y = OInt(order, combo[4], combo[5])
    return (x, y)


def is_unimodular(lam: OInt, mu: OInt) -> Mat | None:
    """Completion of (lam, mu) to a determinant-one first column, or None.

    The pair generates the unit ideal iff 1 lies in the integer lattice
    spanned by (lam, lam*tau, mu, mu*tau); the tracked reduction then
    yields x, y with x*lam + y*mu = 1 and the completion
    [[lam, -y], [mu, x]].  Completions are deterministic but only
    canonical up to a right shift.
    """
    if lam.is_zero() and mu.is_zero():
        raise ValueError("(0, 0) is not a pair")
    order = lam.order
    tau = order.tau
    combo = _one_in_span((lam, lam * tau, mu, mu * tau), order)
    if combo is None:
        return None
    x, y = combo
    return Mat(lam, -y, mu, x)


@dataclass(frozen=True)
class UnimodularPair:
    """Pair (lam, mu) generating the unit ideal, with mu != 0."""

    lam: OInt
    mu: OInt
    completion: Mat

    def __post_init__(self) -> None:
        if self.mu.is_zero():
            raise ValueError("mu must be nonzero")

    def ratio(self) -> KElem:
        return KElem.of(self.lam, self.mu)

    def hemisphere(self) -> Hemisphere:
        return Hemisphere(self.ratio(), Fraction(1, self.mu.norm()), owner=(self.lam, self.mu))


def make_pair(lam: OInt, mu: OInt) -> UnimodularPair | None:
    completion = is_unimodular(lam, mu)
    if completion is None:
        return None
    return UnimodularPair(lam, mu, completion)


@dataclass(frozen=True)
class HemiSet:
    """Hemispheres near a window, owners aligned index by index."""

    order: Order
    hemispheres: tuple[Hemisphere, ...]
    pairs: tuple[UnimodularPair, ...]
    norm_bound: int
    window: FundPolygon


def _segment_dist_sq(order: Order, a: Point, b: Point, p: Point) -> Fraction:
    n = order.abs_delta
    du, dv = p[0] - a[0], p[1] - a[1]
    eu, ev = b[0] - a[0], b[1] - a[1]
    t = (du * eu + n * dv * ev) / (eu * eu + n * ev * ev)
    if t < 0:
        t = Fraction(0)
    elif t > 1:
        t = Fraction(1)
    ru, rv = du - t * eu, dv - t * ev
    return ru * ru + n * rv * rv


def window_dist_sq(order: Order, window: FundPolygon, p: Point) -> Fraction:
    """Exact squared distance from p to the closed polygon; 0 inside."""
    if window.contains(p):
        return Fraction(0)
    return min(_segment_dist_sq(order, a, b, p) for a, b in window.edges())


def enumerate_hemispheres(order: Order, norm_bound: int, window: FundPolygon) -> HemiSet:
    """All hemispheres with owner norm(mu) <= norm_bound near the window.

    A hemisphere makes the cut when its center lies within one radius
    of the window, so faces clipped at the boundary stay present.  The
    output is deduplicated by (center, radius_sq) and sorted by
    descending radius, then center; (lam, mu) and (-lam, -mu) describe
    the same hemisphere, so mu is normalized to the canonical sign.
    """
    if order.abs_delta <= 12:
        raise OutOfScope("hemisphere arrangement needs |delta| > 12")
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    n = order.abs_delta
    wu, wv = window.center
    circum_sq = max((u - wu) ** 2 + n * (v - wv) ** 2 for u, v in window.vertices)
    wc = kelem_from_planar(order, wu, wv)
    seen: dict[tuple[KElem, Fraction], tuple[Hemisphere, UnimodularPair]] = {}
    for mu in lattice_points_norm_at_most(order, norm_bound):
        if not mu.is_canonical_positive():
            continue
        rsq = Fraction(1, mu.norm())
        # centers live within circumradius + radius of the window center;
        # overshoot via (a + b)^2 <= 2a^2 + 2b^2, then filter exactly
        reach = (2 * circum_sq + 2 * rsq) * mu.norm()
        for lam in lattice_points_within(wc * mu, reach, closed=True):
            completion = is_unimodular(lam, mu)
            if completion is None:
                continue
            center = KElem.of(lam, mu)
            if window_dist_sq(order, window, center.planar()) > rsq:
                continue
            key = (center, rsq)
            if key not in seen:
                pair = UnimodularPair(lam, mu, completion)
                seen[key] = (Hemisphere(center, rsq, owner=(lam, mu)), pair)
    ordered = sorted(seen.values(), key=lambda hp: hp[0].sort_key())
    return HemiSet(
        order=order,
        hemispheres=tuple(h for h, _ in ordered),
        pairs=tuple(p for _, p in ordered),
        norm_bound=norm_bound,
        window=window,
    )


@dataclass(frozen=True)
class Contributes:
    """Exact sample point where the owner is strictly the top hemisphere."""

    witness: KElem


@dataclass(frozen=True)
class CoveredUpTo:
    """No dominance witness found on the scan grid of this pitch."""

    resolution: Fraction


FaceStatus = Contributes | CoveredUpTo


def _grid_points(order: Order, h: Hemisphere, pitch: Fraction) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Exact grid over h's open disc as (u, v, owner height^2), apex first."""
    n = order.abs_delta
    rsq = h.radius_sq
    cu, cv = h.center.planar()
    offsets = []
    i = 0
    while (i * pitch) ** 2 < rsq:
        du_sq = (i * pitch) ** 2
        j = 0
        while du_sq + n * (j * pitch) ** 2 < rsq:
            q = du_sq + n * (j * pitch) ** 2
            for si in ((0,) if i == 0 else (i, -i)):
                for sj in ((0,) if j == 0 else (j, -j)):
                    offsets.append((q, si * pitch, sj * pitch))
            j += 1
        i += 1
    offsets.sort()
    return [(cu + du, cv + dv, rsq - q) for q, du, dv in offsets]


def _rivals(h: Hemisphere, pool: Sequence[Hemisphere]) -> list[tuple[Fraction, Fraction, Fraction]] | None:
    """Packed (radius_sq, cu, cv) for rivals whose disc meets h's disc.

    Returns None when the pool holds a duplicate of h: a tie at every
    point means no strict dominance anywhere.
    """
    n = h.center.order.abs_delta
    hu, hv = h.center.planar()
    packed = []
    for k in pool:
        if k.center == h.center and k.radius_sq == h.radius_sq:
            return None
        ku, kv = k.center.planar()
        d = (hu - ku) ** 2 + n * (hv - kv) ** 2
        gap = d - h.radius_sq - k.radius_sq
        if gap >= 0 and gap * gap >= 4 * h.radius_sq * k.radius_sq:
            continue  # open discs disjoint: k is below the floor on all of h
        packed.append((k.radius_sq, ku, kv))
    return packed


def face_status(
    h: Hemisphere,
    rest: HemiSet | Sequence[Hemisphere],
    grid_resolution: Fraction = Fraction(1, 64),
) -> FaceStatus:
    """Search h's disc for a point where h is strictly the top hemisphere.

    The grid is anchored at the center, so the apex is tested first,
    and every height comparison is exact.  When rest is a HemiSet, h
    itself is dropped from it; a sequence is taken literally, so a
    duplicate of h in it means CoveredUpTo.
    """
    order = h.center.order
    n = order.abs_delta
    if isinstance(rest, HemiSet):
        pool: Sequence[Hemisphere] = [
            k for k in rest.hemispheres if not (k.center == h.center and k.radius_sq == h.radius_sq)
        ]
    else:
        pool = rest
    packed = _rivals(h, pool)
    if packed is None:
        return CoveredUpTo(grid_resolution)
    for u, v, hh in _grid_points(order, h, grid_resolution):
        for krsq, ku, kv in packed:
            du = u - ku
            dv = v - kv
            if krsq - du * du - n * dv * dv >= hh:
                break
        else:
            return Contributes(kelem_from_planar(order, u, v))
    return CoveredUpTo(grid_resolution)


def face_statuses(hs: HemiSet, grid_resolution: Fraction = Fraction(1, 64)) -> tuple[FaceStatus, ...]:
    """Status of each hemisphere against all the others, in set order."""
    out = []
    for i, h in enumerate(hs.hemispheres):
        rest = hs.hemispheres[:i] + hs.hemispheres[i + 1 :]
        out.append(face_status(h, rest, grid_resolution))
    return tuple(out)


def plane_split(
    hs: HemiSet,
    statuses: Sequence[FaceStatus],
    t0: Fraction = Fraction(2, 3),
    grid_resolution: Fraction = Fraction(1, 64),
) -> tuple[list[Hemisphere], list[Hemisphere]]:
    """Divide the contributing faces by the horizontal plane t = t0.

    A face lands in `above` when some grid point it dominates lies
    strictly higher than t0 on the hemisphere, in `below` when some
    dominated point lies strictly lower; faces crossing the plane show
    up in both lists.
    """
    t0sq = Fraction(t0) ** 2
    above: list[Hemisphere] = []
    below: list[Hemisphere] = []
    for i, (h, status) in enumerate(zip(hs.hemispheres, statuses)):
        if not isinstance(status, Contributes):
            continue
        order = h.center.order
        n = order.abs_delta
        pool = hs.hemispheres[:i] + hs.hemispheres[i + 1 :]
        packed = _rivals(h, pool)
        if packed is None:  # cannot happen for a contributing face
            continue
        can_reach_above = h.radius_sq > t0sq
        is_above = is_below = False
        for u, v, hh in _grid_points(order, h, grid_resolution):
            if is_below and (is_above or not can_reach_above):
                break
            for krsq, ku, kv in packed:
                du = u - ku
                dv = v - kv
                if krsq - du * du - n * dv * dv >= hh:
                    break
            else:
                if hh > t0sq:
                    is_above = True
                elif hh < t0sq:
                    is_below = True
        if is_above:
            above.append(h)
        if is_below:
            below.append(h)
    return (above, below)


_FILL_CONTRIBUTES = "#ffffff"
_FILL_COVERED = "#d8d8d8"
_STROKE_BOTH = "#c0392b"
_STROKE_ABOVE = "#2471a3"
_STROKE_BELOW = "#1e8449"
_STROKE_NONE = "#7f8c8d"


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def svg_topview(
    hs: HemiSet,
    statuses: Sequence[FaceStatus],
    split: tuple[Sequence[Hemisphere], Sequence[Hemisphere]],
    path: str | Path | None = None,
    scale: int = 100,
) -> str:
    """Top-down view of the arrangement; the imaginary axis runs left to right.

    Deterministic: the same inputs yield byte-identical output.  Fill
    encodes face status, stroke encodes the side of the plane split,
    and the window outline is drawn on top.  Returns the SVG text and
    writes it to `path` when given.
    """
    sqrt_n = math.sqrt(hs.order.abs_delta)

    def to_xy(u: Fraction, v: Fraction) -> tuple[float, float]:
        return (float(v) * sqrt_n * scale, float(u) * scale)

    xs, ys = [], []
    for u, v in hs.window.vertices:
        x, y = to_xy(u, v)
        xs.append(x)
        ys.append(y)
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    width, height = maxx - minx, maxy - miny
    above, below = split
    above_set = set(above)
    below_set = set(below)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(minx)} {_fmt(miny)} '
        f'{_fmt(width)} {_fmt(height)}" width="{_fmt(width)}" height="{_fmt(height)}">',
    ]
    for h, status in zip(hs.hemispheres, statuses):
        u, v = h.center.planar()
        cx, cy = to_xy(u, v)
        r = math.sqrt(h.radius_sq) * scale
        fill = _FILL_CONTRIBUTES if isinstance(status, Contributes) else _FILL_COVERED
        in_above = h in above_set
        in_below = h in below_set
        if in_above and in_below:
            stroke = _STROKE_BOTH
        elif in_above:
            stroke = _STROKE_ABOVE
        elif in_below:
            stroke = _STROKE_BELOW
        else:
            stroke = _STROKE_NONE
        lines.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
            f'fill="{fill}" fill-opacity="0.65" stroke="{stroke}" stroke-width="1.5"/>'
        )
    outline = " ".join(_fmt(c) for u, v in hs.window.vertices for c in to_xy(u, v))
    lines.append(f'<polygon points="{outline}" fill="none" stroke="#000000" stroke-width="1"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="ascii")
    return text
