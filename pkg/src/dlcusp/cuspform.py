"""The weight-2 cusp-form character and its Deligne-Lusztig decomposition.

Builds the character of the weight-2 cusp-form space plus its dual at prime
level from Weinstein's permutation-character formula, solves for the exact
rational coefficient of every Deligne-Lusztig character with central
character one, classifies each torus character into the five coefficient
sets, compares against the built-in coefficient table (rows by set and
torus, columns by the residue of p mod 12), and re-derives the same
coefficients through an independent symbolic pipeline that expands the
permutation characters by the Steinberg tensor identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .classfun import ClassFunction, dual, induce, inner_product, trivial_character
from .chartable import CharacterData, quadratic_character_index
from .group import conjugate_into_torus

TORI = ("split", "nonsplit")
SET_LABELS = ("A", "B", "C", "D", "E")
RESIDUES = (1, 5, 7, 11)
READINGS = ("primary", "alternative")

# Order-4 and order-6 cyclic subgroup placement by residue of p mod 12:
# each embeds in the torus whose order it divides.
_SUBGROUP_ORDERS = {"x": 4, "y": 6}


class VerificationError(Exception):
    """An exact identity claimed by the decomposition failed."""


def embedded_subgroups(p: int, torus_type: str) -> tuple[str, ...]:
    """Which of the order-4 ("x") and order-6 ("y") subgroups embed in T."""
    t_order = p - 1 if torus_type == "split" else p + 1
    return tuple(s for s, m in _SUBGROUP_ORDERS.items() if t_order % m == 0)


def embedding_pattern(p: int) -> dict[str, str]:
    """Torus containing each cyclic subgroup, keyed "x"/"y"."""
    out = {}
    for s, m in _SUBGROUP_ORDERS.items():
        out[s] = "split" if (p - 1) % m == 0 else "nonsplit"
        assert (p - 1 if out[s] == "split" else p + 1) % m == 0
    return out


def verify_torus_placement(data: CharacterData) -> dict[str, str]:
    """Replay-checked placement of both cyclic subgroups (witness verified).

    Returns the same mapping as embedding_pattern; raises if a witness is
    missing where divisibility promises one, or if a subgroup conjugates into
    both tori.
    """
    pattern = {}
    for key, name in (("x", "Gx_tilde"), ("y", "Gy_tilde")):
        sub = data.subgroups[name]
        placements = []
        for torus_type in TORI:
            h = conjugate_into_torus(sub, data.torus(torus_type))
            if h is not None:
                placements.append(torus_type)
        if len(placements) != 1:
            raise VerificationError(f"{name} embeds in {placements or 'no torus'} at p={data.p}")
        pattern[key] = placements[0]
    if pattern != embedding_pattern(data.p):
        raise VerificationError(f"placement disagrees with the mod-12 table at p={data.p}")
    return pattern


def weinstein_character(data: CharacterData) -> ClassFunction:
    """The degree-2(1 + (p^2-1)(p-6)/24) character from the permutation formula.

    Alternating sum of the four permutation characters induced from the
    distinguished subgroups, plus twice the trivial character; the degree is
    cross-checked against the index arithmetic and the genus count.
    """
    table, p = data.table, data.p
    s = induce(table, data.subgroups["Z"], [1, 1])
    for name in ("Gx_tilde", "Gy_tilde", "Gz_tilde"):
        sub = data.subgroups[name]
        s = s - induce(table, sub, [1] * sub.order)
    s = s + trivial_character(table).scale(2)
    deg = s.degree.as_rational()
    half = table.group_order // 2
    index_deg = Fraction(half) * (1 - Fraction(1, 2) - Fraction(1, 3) - Fraction(1, p)) + 2
    genus_deg = 2 * (1 + Fraction((p * p - 1) * (p - 6), 24))
    if not (deg == index_deg == genus_deg):
        raise VerificationError(f"degree {deg} != index formula {index_deg} / genus formula {genus_deg}")
    for v in s.values:
        r = v.as_rational()
        if r is None or r.denominator != 1:
            raise VerificationError("permutation character has a non-integral value")
    if dual(s) != s or s.values[0] != s.values[1]:
        raise VerificationError("cusp-form character must be self-dual and trivial on the center")
    return s


@dataclass(frozen=True)
class ThetaSetLabel:
    """Coefficient-set membership of one torus character."""

    label: str
    torus: str
    reading: str


def classify_theta(p: int, torus_type: str, k: int, reading: str = "primary") -> ThetaSetLabel:
    """Assign a torus character trivial on the center to one of the sets A-E.

    A subgroup condition is decidable only when the subgroup embeds in this
    torus; theta is trivial on the embedded order-m subgroup iff m | k.
    Primary reading: A = non-trivial on every embedded subgroup (or nothing
    embeds), B = trivial on both (requires both), then C (trivial on the
    embedded order-4 subgroup), then D (order-6), E = the trivial character.
    Alternative reading: B accepts a single embedded subgroup.
    """
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    t_order = p - 1 if torus_type == "split" else p + 1
    k %= t_order
    if k % 2 != 0:
        raise ValueError("set labels are defined only for characters trivial on the center")
    if k == 0:
        return ThetaSetLabel("E", torus_type, reading)
    emb = embedded_subgroups(p, torus_type)
    trivial_on = {s: k % _SUBGROUP_ORDERS[s] == 0 for s in emb}
    if not emb or not any(trivial_on.values()):
        return ThetaSetLabel("A", torus_type, reading)
    if all(trivial_on.values()) and (len(emb) == 2 or reading == "alternative"):
        return ThetaSetLabel("B", torus_type, reading)
    if trivial_on.get("x"):
        return ThetaSetLabel("C", torus_type, reading)
    if trivial_on.get("y"):
        return ThetaSetLabel("D", torus_type, reading)
    raise AssertionError("set classification is not a partition")


# -- the coefficient table ---------------------------------------------------
# c = (sign) (p - r)/12 + offset, one cell per (set, torus, residue r mod 12).
# The offsets track the subgroup placement: -1 exactly in the columns where
# the set's defining subgroup lies in this torus, -2 for B where both do, and
# 1 - (number of subgroups in this torus) for the trivial character.  Cells
# whose set is empty at that residue carry the A-row value.

_TABLE_OFFSETS = {
    ("A", "split"): {1: 0, 5: 0, 7: 0, 11: 0},
    ("B", "split"): {1: -2, 5: 0, 7: 0, 11: 0},
    ("C", "split"): {1: -1, 5: -1, 7: 0, 11: 0},
    ("D", "split"): {1: -1, 5: 0, 7: -1, 11: 0},
    ("E", "split"): {1: -1, 5: 0, 7: 0, 11: 1},
    ("A", "nonsplit"): {1: 0, 5: 0, 7: 0, 11: 0},
    ("B", "nonsplit"): {1: 0, 5: 0, 7: 0, 11: -2},
    ("C", "nonsplit"): {1: 0, 5: 0, 7: -1, 11: -1},
    ("D", "nonsplit"): {1: 0, 5: -1, 7: 0, 11: -1},
    ("E", "nonsplit"): {1: 1, 5: 0, 7: 0, 11: -1},
}


def table_offset(label: str, torus_type: str, residue: int) -> int:
    """Structural form of the offsets, generated from the embedding pattern."""
    p_proxy = {1: 13, 5: 17, 7: 19, 11: 23}[residue]
    emb = embedded_subgroups(p_proxy, torus_type)
    if label == "A":
        return 0
    if label == "B":
        return -2 if len(emb) == 2 else 0
    if label == "C":
        return -1 if "x" in emb else 0
    if label == "D":
        return -1 if "y" in emb else 0
    return 1 - len(emb)


def coefficient_line(label: str, torus_type: str, residue: int) -> tuple[Fraction, Fraction]:
    """(a, b) with c = a p + b for the given table cell."""
    sign = 1 if torus_type == "split" else -1
    offset = _TABLE_OFFSETS[(label, torus_type)][residue]
    a = Fraction(sign, 12)
    b = Fraction(-sign * residue, 12) + offset
    return a, b


def paper_coefficients(p: int) -> dict[tuple[str, str], Fraction]:
    """Exact value of every table cell at this prime."""
    r = p % 12
    out = {}
    for (label, torus_type), offsets in _TABLE_OFFSETS.items():
        a, b = coefficient_line(label, torus_type, r)
        out[(label, torus_type)] = a * p + b
    return out


def coefficient_table() -> dict[tuple[str, str], dict[int, tuple[Fraction, Fraction]]]:
    """The full table as (set, torus) -> residue -> (a, b) with c = a p + b."""
    return {
        cell: {r: coefficient_line(cell[0], cell[1], r) for r in RESIDUES}
        for cell in _TABLE_OFFSETS
    }


# -- decomposition ------------------------------------------------------------


@dataclass
class DecompositionResult:
    """Exact coefficients of the cusp-form character over the DL spanning set."""

    p: int
    reading: str
    coefficients: dict[tuple[str, int], Fraction]  # (torus, orbit representative) -> c
    labels: dict[tuple[str, int], ThetaSetLabel]
    exact: bool
    table_match: bool
    multiplicities: dict[tuple, Fraction]
    mismatches: list[dict] = field(default_factory=list)

    def orbit_weight(self, torus: str, k: int) -> int:
        n = self.p - 1 if torus == "split" else self.p + 1
        return 1 if k == 0 or 2 * k == n else 2


def _zc_orbit_reps(data: CharacterData, torus_type: str) -> list[int]:
    n = data.p - 1 if torus_type == "split" else data.p + 1
    return [k for k in range(0, n // 2 + 1) if k % 2 == 0]


def decompose_dl(data: CharacterData, s: ClassFunction | None = None, reading: str = "primary") -> DecompositionResult:
    """Solve the cusp-form character exactly over the DL characters with
    central character one, then replay the sum and compare with the table.

    Coefficients are stored per inversion-orbit representative; the full sum
    counts non-self-inverse orbits twice.  The linear system is triangular in
    the irreducible multiplicities: the trivial and Steinberg multiplicities
    give both k = 0 coefficients, each principal/discrete multiplicity gives
    one orbit, and the exceptional constituents give the order-2 character
    whenever it is trivial on the center.
    """
    p = data.p
    if s is None:
        s = weinstein_character(data)
    mults: dict[tuple, Fraction] = {}
    for irr in data.irreducibles:
        m = inner_product(s, irr.chi).as_rational()
        if m is None:
            raise VerificationError(f"non-rational multiplicity for {irr.name} at p={p}")
        mults[irr.label] = m

    coeff: dict[tuple[str, int], Fraction] = {}
    m_triv, m_st = mults[("trivial",)], mults[("steinberg",)]
    coeff[("split", 0)] = (m_triv + m_st) / 2
    coeff[("nonsplit", 0)] = (m_triv - m_st) / 2
    for k in _zc_orbit_reps(data, "split"):
        if k == 0:
            continue
        if k == quadratic_character_index(p - 1):
            if p % 4 == 1:
                m_plus = mults[("exceptional_split_plus",)]
                if m_plus != mults[("exceptional_split_minus",)]:
                    raise VerificationError(f"split exceptional multiplicities differ at p={p}")
                coeff[("split", k)] = m_plus
            continue
        coeff[("split", k)] = mults[("principal", k)] / 2
    for k in _zc_orbit_reps(data, "nonsplit"):
        if k == 0:
            continue
        if k == quadratic_character_index(p + 1):
            if p % 4 == 3:
                m_plus = mults[("exceptional_nonsplit_plus",)]
                if m_plus != mults[("exceptional_nonsplit_minus",)]:
                    raise VerificationError(f"nonsplit exceptional multiplicities differ at p={p}")
                coeff[("nonsplit", k)] = -m_plus
            continue
        coeff[("nonsplit", k)] = -mults[("discrete", k)] / 2

    rebuilt = ClassFunction(data.table, [0] * len(data.table))
    for (torus_type, k), c in coeff.items():
        if not c:
            continue
        n = p - 1 if torus_type == "split" else p + 1
        w = 1 if k == 0 or 2 * k == n else 2
        rebuilt = rebuilt + data.dl(torus_type, k).chi.scale(c * w)
    exact = rebuilt == s

    labels: dict[tuple[str, int], ThetaSetLabel] = {}
    mismatches: list[dict] = []
    expected = paper_coefficients(p)
    for torus_type in TORI:
        for k in _zc_orbit_reps(data, torus_type):
            if (torus_type, k) not in coeff:
                continue
            lab = classify_theta(p, torus_type, k, reading)
            labels[(torus_type, k)] = lab
            want = expected[(lab.label, torus_type)]
            got = coeff[(torus_type, k)]
            if got != want:
                mismatches.append(
                    {"torus": torus_type, "k_orbit": k, "set_label": lab.label, "computed": str(got), "table": str(want)}
                )
    result = DecompositionResult(
        p=p,
        reading=reading,
        coefficients=coeff,
        labels=labels,
        exact=exact,
        table_match=not mismatches,
        multiplicities=mults,
        mismatches=mismatches,
    )
    return result


# -- the independent symbolic pipeline ----------------------------------------


def _steinberg_tensor_coefficients(p: int, t1: str, k1: int, torus_type: str, zc_ks: list[int]) -> dict[int, Fraction]:
    """Per-character coefficient of each R with central character one in
    St (x) R_{T1}^{theta1}, for the seven tabulated cases."""
    out: dict[int, Fraction] = {}
    n1 = p - 1 if t1 == "split" else p + 1
    k1 %= n1
    same_torus = t1 == torus_type
    for k in zc_ks:
        if k == 0:
            if same_torus:
                out[k] = Fraction(1 + (k1 == 0)) if t1 == "split" else Fraction(1 - (k1 == 0))
            else:
                out[k] = Fraction(-1)
        elif torus_type == "split":
            out[k] = Fraction(1 + (k == k1)) if same_torus else Fraction(-1)
        else:
            out[k] = Fraction(1 - (k == k1)) if same_torus else Fraction(-1)
    return out


def remark_pipeline(data: CharacterData) -> dict[tuple[str, int], Fraction]:
    """Re-derive the decomposition symbolically, without class functions.

    Expands the permutation formula (the two split-torus sums, twice the
    trivial character written as R_split(1) + R_nonsplit(1), and the two
    subgroup sums with their torus-rank signs), replacing every Steinberg
    tensor by its tabulated coefficient list, then symmetrizes inversion
    orbits.  Output keys match decompose_dl's coefficients exactly.
    """
    p = data.p
    zc = {t: [k for k in range(0, (p - 1 if t == "split" else p + 1)) if k % 2 == 0] for t in TORI}
    acc: dict[tuple[str, int], Fraction] = {(t, k): Fraction(0) for t in TORI for k in zc[t]}

    def add_tensor_expansion(t1: str, k1: int, scale: Fraction):
        for torus_type in TORI:
            for k, c in _steinberg_tensor_coefficients(p, t1, k1, torus_type, zc[torus_type]).items():
                acc[(torus_type, k)] += scale * c

    # sum over split characters trivial on the center: St (x) R - R
    for k in zc["split"]:
        add_tensor_expansion("split", k, Fraction(1))
        acc[("split", k)] -= 1
    # 2 * trivial = R_split(1) + R_nonsplit(1)
    acc[("split", 0)] += 1
    acc[("nonsplit", 0)] += 1
    # the two cyclic-subgroup sums, with the tensor-identity sign of their torus
    pattern = embedding_pattern(p)
    for s in ("x", "y"):
        torus_type = pattern[s]
        n = p - 1 if torus_type == "split" else p + 1
        sign = Fraction(-1 if torus_type == "split" else 1)
        m = _SUBGROUP_ORDERS[s]
        for k in range(0, n, m):
            add_tensor_expansion(torus_type, k, sign)

    out: dict[tuple[str, int], Fraction] = {}
    for torus_type in TORI:
        n = p - 1 if torus_type == "split" else p + 1
        for k in _zc_orbit_reps(data, torus_type):
            if k == 0 or 2 * k == n:
                out[(torus_type, k)] = acc[(torus_type, k)]
            else:
                out[(torus_type, k)] = (acc[(torus_type, k)] + acc[(torus_type, n - k)]) / 2
    return out


# -- corollaries ---------------------------------------------------------------


@dataclass
class OddMultiplicityReport:
    p: int
    torus: str
    multiplicities: tuple[Fraction, Fraction]
    all_odd: bool
    virtual_character_real: bool
    pair_dual_closed: bool


def corollary_odd_multiplicity(data: CharacterData, result: DecompositionResult | None = None) -> OddMultiplicityReport:
    """Odd multiplicities of the order-2-character constituents at p = 23 mod 24.

    At such p the order-2 character is trivial on the center only for the
    anisotropic torus, so its two degree-(p-1)/2 constituents are the ones
    that can and do appear; both multiplicities must be odd integers.  The
    split-torus pair is checked to be absent (central character mismatch).
    """
    p = data.p
    if p % 24 != 23:
        raise ValueError("this check applies only to p = 23 mod 24")
    if result is None:
        result = decompose_dl(data)
    mult_plus = result.multiplicities[("exceptional_nonsplit_plus",)]
    mult_minus = result.multiplicities[("exceptional_nonsplit_minus",)]
    for name in ("exceptional_split_plus", "exceptional_split_minus"):
        if result.multiplicities[(name,)] != 0:
            raise VerificationError(f"{name} appears despite a non-trivial central character at p={p}")
    plus = data.irreducible("exceptional_nonsplit_plus").chi
    minus = data.irreducible("exceptional_nonsplit_minus").chi
    alpha = data.dl("nonsplit", quadratic_character_index(p + 1)).chi
    real = all(v.conj() == v for v in alpha.values)
    dual_closed = {dual(plus), dual(minus)} == {plus, minus}
    all_odd = all(m.denominator == 1 and m.numerator % 2 == 1 for m in (mult_plus, mult_minus))
    report = OddMultiplicityReport(p, "nonsplit", (mult_plus, mult_minus), all_odd, real, dual_closed)
    if not (all_odd and real and dual_closed):
        raise VerificationError(f"odd-multiplicity mechanism fails at p={p}: {report}")
    return report


@dataclass
class AppearanceReport:
    p: int
    missing: list[str]  # non-trivial center-trivial irreducibles with multiplicity 0
    trivial_absent: bool

    @property
    def complete(self) -> bool:
        return not self.missing and self.trivial_absent


def corollary_all_appear(data: CharacterData, result: DecompositionResult | None = None) -> AppearanceReport:
    """Which irreducibles of the center quotient appear in the cusp character.

    For p >= 23 every non-trivial one must appear and the trivial one must
    not; below 23 the missing list is informational (the bound is sharp).
    """
    p = data.p
    if result is None:
        result = decompose_dl(data)
    missing = []
    trivial_absent = False
    for irr in data.irreducibles:
        if irr.chi.values[0] != irr.chi.values[1]:
            continue  # center acts non-trivially: not a character of the quotient
        m = result.multiplicities[irr.label]
        if m < 0:
            raise VerificationError(f"negative multiplicity {m} for {irr.name} at p={p}")
        if irr.label == ("trivial",):
            trivial_absent = m == 0
        elif m == 0:
            missing.append(irr.name)
    report = AppearanceReport(p, sorted(missing), trivial_absent)
    if p >= 23 and not report.complete:
        raise VerificationError(f"appearance criterion fails at p={p}: {report}")
    return report


# -- linearity of the coefficients in p ----------------------------------------


@dataclass
class LinearityReport:
    fits: dict[tuple[str, str, int], tuple[Fraction, Fraction]]  # (label, torus, residue) -> (a, b)
    checked: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures


def linearity_fit(results: list[DecompositionResult]) -> LinearityReport:
    """Fit c = a p + b per (set, torus, residue) from the two smallest primes
    with data and demand exactness at every further prime, with 12a, 12b in Z."""
    cells: dict[tuple[str, str, int], list[tuple[int, Fraction]]] = {}
    for res in sorted(results, key=lambda r: r.p):
        seen: dict[tuple[str, str], Fraction] = {}
        for key, lab in res.labels.items():
            c = res.coefficients[key]
            cell = (lab.label, key[0])
            if cell in seen and seen[cell] != c:
                raise VerificationError(
                    f"set {lab.label} on {key[0]} torus has non-constant coefficients at p={res.p}"
                )
            seen[cell] = c
        for (label, torus), c in seen.items():
            cells.setdefault((label, torus, res.p % 12), []).append((res.p, c))
    fits: dict[tuple[str, str, int], tuple[Fraction, Fraction]] = {}
    failures: list[dict] = []
    checked = 0
    for cell, points in cells.items():
        if len(points) < 2:
            continue
        (p1, c1), (p2, c2) = points[0], points[1]
        a = (c2 - c1) / (p2 - p1)
        b = c1 - a * p1
        if 12 % a.denominator or 12 % b.denominator:
            failures.append({"cell": cell, "reason": f"fit ({a}, {b}) is not in (1/12)Z"})
            continue
        fits[cell] = (a, b)
        for q, c in points[2:]:
            checked += 1
            if a * q + b != c:
                failures.append({"cell": cell, "p": q, "expected": str(a * q + b), "computed": str(c)})
    return LinearityReport(fits, checked, failures)
