"""Words in the involution r and the shifts s(a), and their normal forms.

The elementary subgroup is generated by r = [[0,-1],[1,0]] and the
shifts s(a) = [[1,a],[0,1]].  Every word rewrites to the standard shape
s(a_n) r s(a_{n-1}) r ... r s(a_0) whose interior coefficients avoid
0 and the units; the rewriting uses only

    r*r = 1,   s(a)*s(b) = s(a+b),
    s(a) r s(0) r s(b)  = s(a+b),
    s(a) r s(e) r s(b)  = s(a-e) r s(b-e)   for e = +-1,

each of which drops at least one r, so the process terminates.

Membership of a general matrix is decided by a descent on the bottom
row: the ratio alpha/beta is examined for nearby lattice points, every
candidate move divides norm(beta) by at least 1, and a node whose ratio
clears all closed unit discs is a certified non-member.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateChain, OutOfScope, WordSyntaxError
from .moebius import Mat, gen_r, gen_s
from .orders import KElem, OInt, Order, dist_sq, lattice_points_within


@dataclass(frozen=True)
class Letter:
    kind: str  # "r" or "s"
    coeff: OInt | None = None

    def __str__(self) -> str:
        if self.kind == "r":
            return "r"
        return f"s({_coeff_str(self.coeff)})"


def R() -> Letter:
    return Letter("r")


def S(a: OInt) -> Letter:
    return Letter("s", a)


Word = tuple[Letter, ...]


def _coeff_str(a: OInt) -> str:
    if a.b == 0:
        return str(a.a)
    mag = "t" if abs(a.b) == 1 else f"{abs(a.b)}*t"
    if a.a == 0:
        return mag if a.b > 0 else "-" + mag
    return f"{a.a}{'+' if a.b > 0 else '-'}{mag}"


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return "*".join(str(letter) for letter in word)


def parse_word(text: str, order: Order) -> Word:
    """Parse word text like ``s(2-1*t)*r*s(3)``; ``1`` is the empty word."""
    letters: list[Letter] = []
    i = 0
    n = len(text)

    def skip_ws(j: int) -> int:
        while j < n and text[j].isspace():
            j += 1
        return j

    i = skip_ws(i)
    if i < n and text[i] == "1":
        j = skip_ws(i + 1)
        if j != n:
            raise WordSyntaxError("unexpected input after identity word", j)
        return ()
    expect_term = True
    while i < n:
        i = skip_ws(i)
        if i >= n:
            break
        ch = text[i]
        if expect_term:
            if ch == "r":
                letters.append(R())
                i += 1
            elif ch == "s":
                i = skip_ws(i + 1)
                if i >= n or text[i] != "(":
                    raise WordSyntaxError("expected '(' after 's'", i)
                close = text.find(")", i)
                if close < 0:
                    raise WordSyntaxError("missing ')'", i)
                letters.append(S(_parse_coeff(text, i + 1, close, order)))
                i = close + 1
            else:
                raise WordSyntaxError(f"expected 'r' or 's', got {ch!r}", i)
            expect_term = False
        else:
            if ch != "*":
                raise WordSyntaxError(f"expected '*', got {ch!r}", i)
            i += 1
            expect_term = True
    if expect_term:
        raise WordSyntaxError("dangling '*' at end of word", n)
    if not letters:
        raise WordSyntaxError("empty word text (use '1')", 0)
    return tuple(letters)


def _parse_coeff(text: str, start: int, end: int, order: Order) -> OInt:
    a = b = 0
    i = start
    sign = 1
    saw_part = False
    while i < end:
        while i < end and text[i].isspace():
            i += 1
        if i >= end:
            break
        if text[i] in "+-":
            if not saw_part and text[i] == "+":
                raise WordSyntaxError("leading '+' in coefficient", i)
            sign = -1 if text[i] == "-" else 1
            i += 1
            while i < end and text[i].isspace():
                i += 1
        elif saw_part:
            raise WordSyntaxError("expected '+' or '-' between parts", i)
        digits = ""
        while i < end and text[i].isdigit():
            digits += text[i]
            i += 1
        while i < end and text[i].isspace():
            i += 1
        if i < end and text[i] in "*t":
            if text[i] == "*":
                i += 1
                while i < end and text[i].isspace():
                    i += 1
                if i >= end or text[i] != "t":
                    raise WordSyntaxError("expected 't' after '*'", i)
            i += 1
            b += sign * (int(digits) if digits else 1)
        elif digits:
            a += sign * int(digits)
        else:
            raise WordSyntaxError("expected digits or 't' in coefficient", i)
        saw_part = True
        sign = 1
    if not saw_part:
        raise WordSyntaxError("empty coefficient", start)
    return OInt(order, a, b)


def word_inverse(word: Word) -> Word:
    out: list[Letter] = []
    for letter in reversed(word):
        if letter.kind == "r":
            out.append(letter)
        else:
            out.append(S(-letter.coeff))
    return tuple(out)


def word_to_matrix(word: Word, order: Order) -> Mat:
    """Leftmost letter is the leftmost factor."""
    g = Mat.identity(order)
    for letter in word:
        g = g * (gen_r(order) if letter.kind == "r" else gen_s(letter.coeff))
    return g


@dataclass(frozen=True)
class StandardForm:
    """Coefficients (a_0, ..., a_n) of s(a_n) r ... r s(a_0)."""

    alphas: tuple[OInt, ...]

    def __post_init__(self) -> None:
        if not self.alphas:
            raise ValueError("standard form needs at least one coefficient")
        for a in self.alphas[1:-1]:
            if a.is_small():
                raise ValueError(f"interior coefficient {a} is 0 or a unit")

    @property
    def n(self) -> int:
        return len(self.alphas) - 1

    def to_word(self) -> Word:
        letters: list[Letter] = []
        for i in range(self.n, -1, -1):
            letters.append(S(self.alphas[i]))
            if i > 0:
                letters.append(R())
        return tuple(letters)

    def __str__(self) -> str:
        return format_word(self.to_word())


def normal_form(word: Word, order: Order) -> StandardForm:
    """Rewrite an arbitrary word into standard form.

    Needs |delta| > 4 so the units are exactly +-1.
    """
    if order.abs_delta <= 4:
        raise OutOfScope("normal forms need |delta| > 4")
    # fold right-to-left into an alternating coefficient list
    alphas: list[OInt] = [order.zero]
    for letter in reversed(word):
        if letter.kind == "s":
            alphas[-1] = alphas[-1] + letter.coeff
        else:
            alphas.append(order.zero)
    changed = True
    while changed:
        changed = False
        i = len(alphas) - 2
        while i >= 1:
            a = alphas[i]
            if a.is_zero():
                alphas[i - 1 : i + 2] = [alphas[i - 1] + alphas[i + 1]]
                changed = True
                i = min(i, len(alphas) - 2)
                continue
            if a.is_small():  # a unit: shift both neighbours
                alphas[i - 1] = alphas[i - 1] - a
                alphas[i + 1] = alphas[i + 1] - a
                del alphas[i]
                changed = True
                i = min(i, len(alphas) - 2)
                continue
            i -= 1
    return StandardForm(tuple(alphas))


@dataclass(frozen=True)
class ZetaChain:
    values: tuple[KElem, ...]

    def product(self) -> KElem:
        if not self.values:
            raise ValueError("empty chain has no product")
        out = self.values[0]
        for z in self.values[1:]:
            out = out * z
        return out


def zeta_chain(sf: StandardForm, z: KElem) -> ZetaChain:
    """Pivot chain z_1 = z + a_0, z_{i+1} = a_i - 1/z_i (i < n)."""
    values: list[KElem] = []
    if sf.n == 0:
        return ZetaChain(())
    cur = z + sf.alphas[0]
    if cur.is_zero():
        raise DegenerateChain("chain pivot hit zero at step 1")
    values.append(cur)
    for i in range(1, sf.n):
        cur = KElem.of(sf.alphas[i], 1) - 1 / cur
        if cur.is_zero():
            raise DegenerateChain(f"chain pivot hit zero at step {i + 1}")
        values.append(cur)
    return ZetaChain(tuple(values))


def chain_bottom(alphas: tuple[OInt, ...], znum: OInt, zden: OInt) -> OInt:
    """Final chain numerator p_n for z = znum/zden, by the three-term recurrence.

    p_0 = zden, p_1 = znum + a_0*zden, p_{i+1} = a_i p_i - p_{i-1};
    the chain product is p_n/zden.  Raises DegenerateChain on a zero pivot.
    """
    n = len(alphas) - 1
    prev = zden
    cur = znum + alphas[0] * zden
    if n >= 1 and cur.is_zero():
        raise DegenerateChain("chain pivot hit zero at step 1")
    for i in range(1, n):
        prev, cur = cur, alphas[i] * cur - prev
        if cur.is_zero():
            raise DegenerateChain(f"chain pivot hit zero at step {i + 1}")
    return cur if n >= 1 else zden


def product_identity_check(sf: StandardForm, z: KElem, mat: Mat | None = None) -> bool:
    """Does alpha - beta*z equal the chain product, up to the PSL sign?"""
    order = z.order
    if mat is None:
        mat = word_to_matrix(sf.to_word(), order)
    zden = OInt(order, z.den, 0)
    lhs = mat.alpha * zden - mat.beta * z.num
    rhs = chain_bottom(sf.alphas, z.num, zden)
    return lhs == rhs or lhs == -rhs


@dataclass(frozen=True)
class SearchStats:
    nodes_explored: int
    plateau_edges: int


@dataclass(frozen=True)
class Member:
    certificate: StandardForm
    stats: SearchStats
    kind: str = field(default="member", init=False)


@dataclass(frozen=True)
class NonMember:
    node: Mat
    ratio: KElem
    nearby: tuple[tuple[OInt, Fraction], ...]
    path_word: Word
    stats: SearchStats
    kind: str = field(default="non_member", init=False)


@dataclass(frozen=True)
class Inconclusive:
    depth_reached: int
    stats: SearchStats
    kind: str = field(default="inconclusive", init=False)


MembershipResult = Member | NonMember | Inconclusive


def _suffix_word(path: tuple[OInt, ...]) -> list[Letter]:
    # g = node * r s(-c_k) * ... * r s(-c_1) for the recorded moves c_i
    out: list[Letter] = []
    for c in reversed(path):
        out.append(R())
        out.append(S(-c))
    return out


def membership(g: Mat, depth_cap: int = 64) -> MembershipResult:
    """Decide membership in the elementary subgroup by bottom-row descent.

    Member and NonMember answers are definitive; Inconclusive only
    reports an exhausted search budget.  Needs |delta| > 12: soundness
    of the empty-candidate criterion rests on the norm gap.
    """
    order = g.order
    if order.abs_delta <= 12:
        raise OutOfScope("membership certificates need |delta| > 12")
    visited: set[Mat] = set()
    stack: list[tuple[Mat, int, tuple[OInt, ...]]] = [(g, 0, ())]
    max_depth = 0
    nodes = 0
    plateau = 0
    while stack:
        h, depth, path = stack.pop()
        if h in visited:
            continue
        visited.add(h)
        nodes += 1
        max_depth = max(max_depth, depth)
        if h.fixes_infinity():
            # sign canonicalization leaves a plain shift s(x)
            word = tuple([S(h.m12)] + _suffix_word(path))
            cert = normal_form(word, order)
            return Member(cert, SearchStats(nodes, plateau))
        ratio = KElem.of(h.m22, -h.m21)
        cands = lattice_points_within(ratio, 1, closed=True)
        if not cands:
            bound = order.covering_radius_sq() + 1
            nearby = tuple(
                (p, dist_sq(ratio, p)) for p in lattice_points_within(ratio, bound, closed=True)
            )
            word = tuple(_suffix_word(path))
            return NonMember(h, ratio, nearby, word, SearchStats(nodes, plateau))
        if depth >= depth_cap:
            continue
        dec = sorted(
            ((dist_sq(ratio, c), c) for c in cands), key=lambda t: (t[0], t[1].key())
        )
        # push in reverse so the strongest norm drop is explored first
        for d2, c in reversed(dec):
            child = h * gen_s(c) * gen_r(order)
            if child not in visited:
                if d2 == 1:
                    plateau += 1
                stack.append((child, depth + 1, path + (c,)))
    # either the cap cut a branch, or the finite reachable component held
    # no shift node; stay conservative in both cases
    return Inconclusive(max_depth, SearchStats(nodes, plateau))


def random_pe2_word(
    order: Order, seed: int, length: int = 30, coeff_bound: int = 5
) -> Word:
    """Deterministic pseudo-random word over r and small shifts."""
    rng = random.Random(seed)
    letters: list[Letter] = []
    for _ in range(length):
        if rng.random() < 0.45:
            letters.append(R())
        else:
            a = rng.randint(-coeff_bound, coeff_bound)
            b = rng.randint(-coeff_bound, coeff_bound)
            letters.append(S(OInt(order, a, b)))
    return tuple(letters)
