"""Coset and normalizer evidence for the elementary subgroup, and the plane split.

The shift-and-rotation subgroup has infinite index in the full group
once |delta| > 12: ratios lambda/mu of unimodular pairs that stay
strictly outside every closed unit disc centered on a lattice point
("gap points") pin down pairwise distinct right cosets, and shifting a
gap ratio by 1/(alpha*mu^2) leaves the gap, which makes the subgroup
its own normalizer.  Splitting the hemisphere arrangement over the
straddling rectangle by the plane t = t0 exhibits the full group as an
amalgam over the subgroup N = <r, s(1), s(tau) r s(tau)^-1>.

All gap and split certificates are exact rational comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .arrangement import (
    Contributes,
    HemiSet,
    UnimodularPair,
    enumerate_hemispheres,
    face_statuses,
    is_unimodular,
    plane_split,
)
from .errors import OutOfScope, SearchExhausted, WitnessNotFound
from .ford import amalgam_rectangle, presentation
from .moebius import Mat, gen_s
from .orders import (
    KElem,
    OInt,
    Order,
    dist_sq,
    kelem_from_planar,
    lattice_points_within,
    oints_by_norm,
)
from .words import NonMember, R, S, Word, membership, word_to_matrix


@dataclass(frozen=True)
class GapPoint:
    """Unimodular ratio exactly outside every closed unit lattice disc."""

    pair: UnimodularPair
    min_dist_sq: Fraction
    checked_lattice_points: tuple[OInt, ...]

    def ratio(self) -> KElem:
        return self.pair.ratio()


def gap_check(z: KElem, extra_reach: Fraction | int = 1) -> tuple[Fraction, tuple[OInt, ...]] | None:
    """Minimum squared lattice distance and the points checked, if a gap.

    The scanned neighborhood reaches covering_radius^2 + extra_reach,
    so it always holds the nearest lattice point; z is a gap point when
    the minimum over it exceeds 1.
    """
    reach = z.order.covering_radius_sq() + extra_reach
    pts = tuple(lattice_points_within(z, reach, closed=True))
    m = min(dist_sq(z, g) for g in pts)
    if m <= 1:
        return None
    return (m, pts)


def _gap_stream(order: Order) -> Iterator[GapPoint]:
    # mu by increasing norm; ratios confined to the half-open cell band
    # u in [0, 1), v in [0, 1/2), which meets every translation orbit once
    n = order.abs_delta
    band_center = kelem_from_planar(order, Fraction(1, 2), Fraction(1, 4))
    band_circum = Fraction(1, 4) + Fraction(n, 16)
    half = Fraction(1, 2)
    seen: set[KElem] = set()
    for group in oints_by_norm(order):
        for mu in group:
            if not mu.is_canonical_positive():
                continue
            for lam in lattice_points_within(band_center * mu, band_circum * mu.norm(), closed=True):
                ratio = KElem.of(lam, mu)
                u, v = ratio.planar()
                if not (0 <= u < 1 and 0 <= v < half) or ratio in seen:
                    continue
                found = gap_check(ratio)
                if found is None:
                    continue
                completion = is_unimodular(lam, mu)
                if completion is None:
                    continue
                seen.add(ratio)
                min_dist, checked = found
                yield GapPoint(UnimodularPair(lam, mu, completion), min_dist, checked)


def gap_points(order: Order, count: int) -> list[GapPoint]:
    """The first `count` gap points, mu-norm ascending, ratios distinct."""
    if order.abs_delta <= 12:
        raise OutOfScope("gap points need |delta| > 12")
    if count < 1:
        raise ValueError("count must be >= 1")
    out: list[GapPoint] = []
    for gp in _gap_stream(order):
        out.append(gp)
        if len(out) == count:
            return out
    raise SearchExhausted("gap point stream dried up")  # pragma: no cover


@dataclass
class CosetFamily:
    """Matrices in pairwise distinct right cosets of the elementary subgroup."""

    members: tuple[Mat, ...]
    points: tuple[GapPoint, ...]
    distinctness_matrix: dict[tuple[int, int], NonMember]
    replaced: tuple[KElem, ...]
    depth_cap: int


def coset_family(order: Order, count: int, depth_cap: int = 64) -> CosetFamily:
    """Completions of gap points representing distinct right cosets.

    Members i and j land in the same coset exactly when M_i * M_j^{-1}
    is in the subgroup, so each pair is certified NonMember.  A
    candidate whose product search does not certify (depth cap hit) is
    dropped and reported in `replaced` rather than silently kept.
    """
    if order.abs_delta <= 12:
        raise OutOfScope("coset families need |delta| > 12")
    if count < 1:
        raise ValueError("count must be >= 1")
    members: list[Mat] = []
    points: list[GapPoint] = []
    matrix: dict[tuple[int, int], NonMember] = {}
    replaced: list[KElem] = []
    budget = 10 * count + 50
    for gp in _gap_stream(order):
        budget -= 1
        if budget < 0:
            raise SearchExhausted(f"no family of {count} within the candidate budget")
        cand = gp.pair.completion
        results: dict[tuple[int, int], NonMember] = {}
        i = len(members)
        for j, other in enumerate(members):
            res = membership(cand * other.inv(), depth_cap)
            if not isinstance(res, NonMember):
                break
            results[(i, j)] = res
        else:
            members.append(cand)
            points.append(gp)
            matrix.update(results)
            if len(members) == count:
                return CosetFamily(tuple(members), tuple(points), matrix, tuple(replaced), depth_cap)
            continue
        replaced.append(gp.ratio())
    raise SearchExhausted("gap point stream dried up")  # pragma: no cover


def normalizer_witness(g: Mat, depth_cap: int = 64) -> OInt:
    """Smallest-norm shift coefficient whose conjugate re-certifies g.

    Requires (and verifies) that g is NonMember with a gap-point ratio.
    Conjugating the shift s(alpha) by g moves the ratio to
    lambda/mu - 1/(alpha*mu^2); candidates failing the exact gap test
    on that value are skipped before any membership search runs.  The
    search is capped at norm(alpha) = 10^4 and reports rather than
    widening.
    """
    order = g.order
    if order.abs_delta <= 12:
        raise OutOfScope("normalizer witnesses need |delta| > 12")
    if not isinstance(membership(g, depth_cap), NonMember):
        raise ValueError("g must certify NonMember")
    lam, mu = g.m11, g.m21
    if mu.is_zero():
        raise ValueError("g must move infinity")
    ratio = KElem.of(lam, mu)
    if gap_check(ratio) is None:
        raise ValueError("the ratio of g must be a gap point")
    for group in oints_by_norm(order):
        if group[0].norm() > 10_000:
            raise WitnessNotFound("no witness with norm(alpha) <= 10^4")
        for alpha in group:
            shifted = ratio - KElem.of(order.one, alpha * mu * mu)
            if gap_check(shifted) is None:
                continue
            conj = g * gen_s(alpha) * g.inv()
            if isinstance(membership(conj, depth_cap), NonMember):
                return alpha
    raise WitnessNotFound("alpha enumeration ended")  # pragma: no cover


def n_generators(order: Order) -> list[Word]:
    """The three words r, s(1), s(tau) r s(tau)^-1."""
    if order.abs_delta <= 12:
        raise OutOfScope("the subgroup N needs |delta| > 12")
    t = order.tau
    return [(R(),), (S(order.one),), (S(t), R(), S(-t))]


def collapse_word(word: Word, order: Order) -> Word:
    """Image of a word under r, s(1) -> identity and s(tau) -> s(tau).

    A shift s(a + b*tau) factors as s(a)s(b*tau), so only the tau part
    of each coefficient survives; r-letters vanish.
    """
    out = []
    for letter in word:
        if letter.kind == "s" and letter.coeff.b != 0:
            out.append(S(OInt(order, 0, letter.coeff.b)))
    return tuple(out)


def collapse_hom_check(order: Order) -> bool:
    """Collapsing onto the tau-shift subgroup kills N but not s(tau).

    True when every defining relation and every generator of N maps to
    the identity while s(tau) itself does not; the collapse is then a
    well-defined surjection whose kernel contains N strictly.
    """

    def dies(word: Word) -> bool:
        return word_to_matrix(collapse_word(word, order), order).is_identity()

    rels_ok = all(dies(rel) for rel in presentation(order).relations)
    n_ok = all(dies(w) for w in n_generators(order))
    return rels_ok and n_ok and not dies((S(order.tau),))


@dataclass(frozen=True)
class FaceRecord:
    """One face-pairing generator of the split report.

    Wall records stand for a parallel wall pair; hemisphere records
    carry the center and, when the pairing is a word over r and the
    shifts, that word.
    """

    kind: str  # "hemisphere" or "wall"
    label: str
    center: KElem | None
    pairing_word: Word | None
    pairing: Mat
    above: bool
    below: bool


@dataclass(frozen=True)
class AmalgamReport:
    plane: Fraction
    n_generators: tuple[Word, ...]
    faces: tuple[FaceRecord, ...]
    above_generators: tuple[FaceRecord, ...]
    below_generators: tuple[FaceRecord, ...]
    overlap: tuple[FaceRecord, ...]
    overlap_matches_n: bool
    hom_check: bool
    norm_bound: int
    grid_resolution: Fraction
    notes: tuple[str, ...]


def _wall_dips_below(hs: HemiSet, axis: str, fixed: Fraction, plane_sq: Fraction, pitch: Fraction) -> bool:
    """Exact scan of one rectangle wall for a point under the plane.

    A sample where the hemisphere envelope stays strictly below
    plane_sq certifies wall points with heights below the plane; walls
    are unbounded upward, so the above side never needs a witness.
    """
    order = hs.order
    n = order.abs_delta
    lo, hi = (Fraction(0), Fraction(1, 2)) if axis == "u" else (Fraction(-1, 2), Fraction(1, 2))
    packed = [(h.radius_sq, *h.center.planar()) for h in hs.hemispheres]
    steps = int((hi - lo) / pitch)
    for k in range(steps + 1):
        var = lo + k * pitch
        u, v = (fixed, var) if axis == "u" else (var, fixed)
        envelope = Fraction(0)
        for rsq, cu, cv in packed:
            hh = rsq - (u - cu) ** 2 - n * (v - cv) ** 2
            if hh > envelope:
                envelope = hh
        if envelope < plane_sq:
            return True
    return False


def _hemi_record(center: KElem, pair: UnimodularPair, above: bool, below: bool) -> FaceRecord:
    order = center.order
    if pair.mu.norm() == 1:
        gamma = center.num  # radius one, so the center is a lattice point
        word: Word = (R(),) if gamma.is_zero() else (S(gamma), R(), S(-gamma))
        pairing = word_to_matrix(word, order)
    else:
        word = None
        pairing = pair.completion.inv()
    return FaceRecord("hemisphere", f"hemisphere at {center}", center, word, pairing, above, below)


def _overlap_matches_n(overlap: tuple[FaceRecord, ...], order: Order) -> bool:
    # the pairings must be s(1) for the crossing walls, r for the unit
    # hemisphere at 0, and an integer-shift conjugate of s(tau)rs(tau)^-1
    # for the unit hemisphere(s) on the tau row
    saw = set()
    for rec in overlap:
        if rec.kind == "wall":
            if rec.pairing != gen_s(order.one):
                return False
            saw.add("wall")
        else:
            if rec.center is None or rec.center.den != 1:
                return False
            gamma = rec.center.num
            if gamma.is_zero():
                saw.add("zero")
            elif gamma.b == 1:
                saw.add("tau row")
            else:
                return False
    return saw == {"wall", "zero", "tau row"}


def amalgam_report(
    order: Order,
    norm_bound: int,
    plane: Fraction = Fraction(2, 3),
    grid_resolution: Fraction = Fraction(1, 64),
) -> AmalgamReport:
    """Split the arrangement over the straddling rectangle at t = plane.

    Contributing hemisphere faces are classified by the exact grid scan
    of the arrangement module; the four rectangle walls are classified
    by scanning their hemisphere envelope for a dip below the plane.
    Faces are reduced to window representatives with center coordinate
    u in [-1/2, 1/2), since translated copies share a pairing up to an
    integer shift.
    """
    window = amalgam_rectangle(order)
    hs = enumerate_hemispheres(order, norm_bound, window)
    statuses = face_statuses(hs, grid_resolution)
    above_hemis, below_hemis = plane_split(hs, statuses, plane, grid_resolution)
    above_set, below_set = set(above_hemis), set(below_hemis)

    half = Fraction(1, 2)
    records: list[FaceRecord] = []
    for h, pair, status in zip(hs.hemispheres, hs.pairs, statuses):
        if not isinstance(status, Contributes):
            continue
        u, v = h.center.planar()
        if not (-half <= u < half and 0 <= v <= half):
            continue
        records.append(_hemi_record(h.center, pair, h in above_set, h in below_set))

    plane_sq = Fraction(plane) ** 2
    u_dips = [_wall_dips_below(hs, "u", s * half, plane_sq, grid_resolution) for s in (-1, 1)]
    v_dips = [_wall_dips_below(hs, "v", v0, plane_sq, grid_resolution) for v0 in (Fraction(0), half)]
    records.append(
        FaceRecord("wall", "walls u = -1/2, 1/2", None, (S(order.one),), gen_s(order.one), True, all(u_dips))
    )
    records.append(
        FaceRecord("wall", "walls v = 0, 1/2", None, (S(order.tau),), gen_s(order.tau), True, all(v_dips))
    )

    faces = tuple(records)
    above = tuple(r for r in faces if r.above)
    below = tuple(r for r in faces if r.below)
    overlap = tuple(r for r in faces if r.above and r.below)
    notes = [
        "each wall record covers a parallel pair with one pairing, so paired "
        "walls land on the same side by construction",
        "a hemisphere face and its pairing partner share one radius, so both "
        "reach the same heights",
    ]
    if u_dips[0] != u_dips[1] or v_dips[0] != v_dips[1]:
        notes.append("wall pair sides disagreed; the window is not a period here")
    if not all(u_dips):
        notes.append(f"no shift-wall point under the plane at pitch {grid_resolution}")
    if not any(v_dips):
        notes.append(
            f"the v-walls never dip under the plane at pitch {grid_resolution}: "
            "their envelope stays above it on every sample"
        )
    return AmalgamReport(
        plane=Fraction(plane),
        n_generators=tuple(n_generators(order)),
        faces=faces,
        above_generators=above,
        below_generators=below,
        overlap=overlap,
        overlap_matches_n=_overlap_matches_n(overlap, order),
        hom_check=collapse_hom_check(order),
        norm_bound=norm_bound,
        grid_resolution=grid_resolution,
        notes=tuple(notes),
    )
