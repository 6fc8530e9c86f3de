"""The complete character theory of SL2(F_p) in exact arithmetic.

Builds, for one prime, the p + 4 irreducible characters (trivial, Steinberg,
principal series, discrete series, and the four Gauss-sum exceptional
constituents) together with every Deligne-Lusztig virtual character of both
maximal tori.  The split virtual characters are computed twice, by induction
from the Borel subgroup and by the closed form, and the two must agree
exactly; the exceptional constituents are pinned by a constraint battery
(sum, degree, norm one, mutual orthogonality) rather than a transcribed
table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classfun import ClassFunction, dual, induce, inner_product, tensor, trivial_character
from .cyclotomic import ZERO, CycNumber, gauss_sum, root_of_unity
from .group import (
    GroupElement,
    SubgroupData,
    TorusData,
    build_conjugacy_table,
    build_subgroup,
    build_torus,
)
from .numtheory import legendre

SCHEMA = "dlcusp-chartable/1"


class TableValidationError(Exception):
    """A character-table consistency check failed; carries the offender."""


@dataclass(frozen=True)
class TorusCharacter:
    """theta = (generator |-> zeta_|T|^k) on a fixed maximal torus."""

    torus_type: str
    order: int
    k: int

    def value_at_dlog(self, d: int) -> CycNumber:
        return root_of_unity(self.order, self.k * d)

    @property
    def is_trivial_on_center(self) -> bool:
        # -I is the unique order-2 element, the half-order power of the generator
        return self.k % 2 == 0

    @property
    def character_order(self) -> int:
        from math import gcd

        return self.order // gcd(self.k, self.order) if self.k else 1


def torus_characters(torus: TorusData) -> list[TorusCharacter]:
    return [TorusCharacter(torus.torus_type, torus.order, k) for k in range(torus.order)]


def quadratic_character_index(torus_order: int) -> int:
    """k of the unique order-2 character (the quadratic residue symbol)."""
    return torus_order // 2


@dataclass(frozen=True)
class DLCharacter:
    """A Deligne-Lusztig virtual character R_T^theta, stored per torus and k."""

    torus_type: str
    k: int
    chi: ClassFunction


@dataclass(frozen=True)
class Irreducible:
    """A labelled irreducible character; label is a stable report key."""

    label: tuple
    chi: ClassFunction
    degree: int

    @property
    def name(self) -> str:
        return self.label[0] if len(self.label) == 1 else f"{self.label[0]}({self.label[1]})"


class CharacterData:
    """Everything character-theoretic attached to one prime p >= 7."""

    def __init__(self, p: int, _cached: dict | None = None):
        self.p = p
        self.table = build_conjugacy_table(p)
        self.subgroups = {name: build_subgroup(self.table, name) for name in ("Z", "Gx_tilde", "Gy_tilde", "Gz_tilde")}
        self.split_torus = build_torus(self.table, "split")
        self.nonsplit_torus = build_torus(self.table, "nonsplit")
        self._torus_fusion = {
            "split": tuple(self.table.class_of(g) for g in self.split_torus.elements),
            "nonsplit": tuple(self.table.class_of(g) for g in self.nonsplit_torus.elements),
        }
        self.from_cache = _cached is not None
        if _cached is None:
            self._build_characters()
        else:
            self._load_characters(_cached)
        self._by_label = {irr.label: irr for irr in self.irreducibles}

    # -- construction --------------------------------------------------------

    def _build_characters(self):
        p = self.p
        self._borel_buckets = self._build_borel_buckets()
        self.dl_split = {k: self._dl_split(k) for k in range(p - 1)}
        self.dl_nonsplit = {k: self._dl_nonsplit(k) for k in range(p + 1)}
        self.irreducibles = self._assemble_irreducibles()

    def _build_borel_buckets(self) -> list[dict[int, int]]:
        """Per ambient class, how many Borel elements fuse there, by dlog of
        the diagonal part (the only datum a Borel linear character sees)."""
        p, table = self.p, self.table
        adlog = {}
        for g, d in self.split_torus.dlog.items():
            adlog[g.a] = d
        buckets: list[dict[int, int]] = [dict() for _ in range(len(table))]
        for a in range(1, p):
            d = adlog[a]
            ainv = pow(a, -1, p)
            for b in range(p):
                i = table.class_of(GroupElement(p, a, b, 0, ainv))
                buckets[i][d] = buckets[i].get(d, 0) + 1
        return buckets

    def theta_split(self, k: int) -> TorusCharacter:
        return TorusCharacter("split", self.p - 1, k % (self.p - 1))

    def theta_nonsplit(self, k: int) -> TorusCharacter:
        return TorusCharacter("nonsplit", self.p + 1, k % (self.p + 1))

    def _dl_split(self, k: int) -> DLCharacter:
        """R for the split torus: Borel induction and closed form, compared."""
        p, table = self.p, self.table
        theta = self.theta_split(k)
        m = p - 1
        half = m // 2  # dlog of -1
        sign_center = theta.value_at_dlog(half)
        closed = []
        for rec in table.classes:
            if rec.kind == "central":
                v = theta.value_at_dlog(0) if rec.key[0] == 1 else sign_center
                closed.append(v.scale(p + 1))
            elif rec.kind == "unipotent":
                closed.append(theta.value_at_dlog(0) if rec.key[0] == 1 else sign_center)
            elif rec.kind == "split_semisimple":
                a = rec.key[0]
                da = self.split_torus.dlog[_diag(p, a)]
                dainv = self.split_torus.dlog[_diag(p, pow(a, -1, p))]
                closed.append(theta.value_at_dlog(da) + theta.value_at_dlog(dainv))
            else:
                closed.append(ZERO)
        closed_fn = ClassFunction(table, closed)
        induced = []
        borel_order = p * (p - 1)
        for rec, bucket in zip(table.classes, self._borel_buckets):
            acc = ZERO
            for d, count in bucket.items():
                acc = acc + theta.value_at_dlog(d).scale(count)
            induced.append(acc.scale(Fraction(rec.centralizer_order, borel_order)))
        if induced != list(closed_fn.values):
            raise TableValidationError(f"split torus character k={k}: induction and closed form disagree at p={p}")
        return DLCharacter("split", k, closed_fn)

    def _dl_nonsplit(self, k: int) -> DLCharacter:
        """R for the anisotropic torus, from the closed form values."""
        p, table = self.p, self.table
        theta = self.theta_nonsplit(k)
        torus = self.nonsplit_torus
        half = torus.order // 2
        sign_center = theta.value_at_dlog(half)
        trace_dlogs: dict[int, list[int]] = {}
        for g, d in torus.dlog.items():
            trace_dlogs.setdefault(g.trace, []).append(d)
        values = []
        for rec in table.classes:
            if rec.kind == "central":
                v = theta.value_at_dlog(0) if rec.key[0] == 1 else sign_center
                values.append(v.scale(1 - p))
            elif rec.kind == "unipotent":
                values.append(theta.value_at_dlog(0) if rec.key[0] == 1 else sign_center)
            elif rec.kind == "split_semisimple":
                values.append(ZERO)
            else:
                ds = trace_dlogs[rec.key[0]]
                assert len(ds) == 2
                values.append(theta.value_at_dlog(ds[0]) + theta.value_at_dlog(ds[1]))
        return DLCharacter("nonsplit", k, ClassFunction(table, values))

    def steinberg(self) -> Irreducible:
        st = self.dl_split[0].chi - trivial_character(self.table)
        if inner_product(st, st).as_rational() != 1:
            raise TableValidationError(f"Steinberg norm is not 1 at p={self.p}")
        return Irreducible(("steinberg",), st, self.p)

    def exceptional_constituents(self, torus_type: str) -> tuple[Irreducible, Irreducible]:
        """The two halves of the order-2-character virtual character.

        base is R(alpha) for the split torus and -R(alpha) for the anisotropic
        one; the difference is supported on the four unipotent-type classes,
        where it is the central sign times the residue symbol of the class
        parameter times the Gauss sum.  The constraint battery (sum, degree,
        norm one, orthogonality) pins the values; the overall sign of the
        difference only swaps the pair, and "plus" is fixed as the constituent
        adding +tau at the parameter-1 unipotent class.
        """
        p, table = self.p, self.table
        tau = gauss_sum(p)
        if torus_type == "split":
            alpha = quadratic_character_index(p - 1)
            base = self.dl_split[alpha].chi
            deg = (p + 1) // 2
            center_sign = legendre(-1, p)
            names = ("exceptional_split_plus", "exceptional_split_minus")
        else:
            alpha = quadratic_character_index(p + 1)
            base = -self.dl_nonsplit[alpha].chi
            deg = (p - 1) // 2
            center_sign = -legendre(-1, p)  # alpha(-I) on the larger torus
            names = ("exceptional_nonsplit_plus", "exceptional_nonsplit_minus")
        delta_vals = [ZERO] * len(table)
        for i, rec in enumerate(table.classes):
            if rec.kind == "unipotent":
                sign, residue = rec.key
                s = residue * (1 if sign == 1 else center_sign)
                delta_vals[i] = tau.scale(s)
        delta = ClassFunction(table, delta_vals)
        plus = (base + delta).scale(Fraction(1, 2))
        minus = (base - delta).scale(Fraction(1, 2))
        if plus + minus != base:
            raise TableValidationError("exceptional pair does not sum to its virtual character")
        neg_of = {i: table.class_of(-rec.rep) for i, rec in enumerate(table.classes)}
        for chi in (plus, minus):
            if chi.degree.as_rational() != deg:
                raise TableValidationError(f"exceptional degree is not {deg} at p={p}")
            if inner_product(chi, chi).as_rational() != 1:
                raise TableValidationError(f"exceptional constituent has norm != 1 at p={p}")
            # the center must act by the scalar chi(-I)/chi(I) everywhere; this
            # pins the sign pattern the norm checks alone cannot see (the
            # residue-symbol sum hides a flipped central sign from them)
            for i, v in enumerate(chi.values):
                if chi.values[neg_of[i]] != v.scale(center_sign):
                    raise TableValidationError(f"exceptional central character broken at p={p}")
        if not inner_product(plus, minus).is_zero():
            raise TableValidationError(f"exceptional constituents are not orthogonal at p={p}")
        return (Irreducible((names[0],), plus, deg), Irreducible((names[1],), minus, deg))

    def _assemble_irreducibles(self) -> tuple[Irreducible, ...]:
        p = self.p
        out = [Irreducible(("trivial",), trivial_character(self.table), 1), self.steinberg()]
        for k in range(1, (p - 1) // 2):
            out.append(Irreducible(("principal", k), self.dl_split[k].chi, p + 1))
        for k in range(1, (p + 1) // 2):
            out.append(Irreducible(("discrete", k), -self.dl_nonsplit[k].chi, p - 1))
        out.extend(self.exceptional_constituents("split"))
        out.extend(self.exceptional_constituents("nonsplit"))
        assert len(out) == p + 4
        return tuple(out)

    # -- lookups --------------------------------------------------------------

    def irreducible(self, *label) -> Irreducible:
        return self._by_label[tuple(label)]

    def dl(self, torus_type: str, k: int) -> DLCharacter:
        if torus_type == "split":
            return self.dl_split[k % (self.p - 1)]
        return self.dl_nonsplit[k % (self.p + 1)]

    def torus(self, torus_type: str) -> TorusData:
        return self.split_torus if torus_type == "split" else self.nonsplit_torus

    def torus_subgroup(self, torus_type: str) -> SubgroupData:
        torus = self.torus(torus_type)
        name = "Ts" if torus_type == "split" else "Ta"
        return SubgroupData(name, self.p, torus.elements, torus.order, self._torus_fusion[torus_type])

    def split_orbit_reps(self) -> list[int]:
        return list(range(0, (self.p - 1) // 2 + 1))

    def nonsplit_orbit_reps(self) -> list[int]:
        return list(range(0, (self.p + 1) // 2 + 1))

    def orbit_rep(self, torus_type: str, k: int) -> int:
        n = self.p - 1 if torus_type == "split" else self.p + 1
        k %= n
        return min(k, n - k)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        def chi_text(chi: ClassFunction) -> list[str]:
            return [v.to_text() for v in chi.values]

        return {
            "schema": SCHEMA,
            "p": self.p,
            "classes": [
                {
                    "rep": list(r.rep.entries()),
                    "size": r.size,
                    "centralizer_order": r.centralizer_order,
                    "trace": r.trace,
                    "kind": r.kind,
                    "inverse_class": r.inverse_class,
                    "key": list(r.key),
                }
                for r in self.table.classes
            ],
            "irreducibles": [
                {"label": list(irr.label), "degree": irr.degree, "values": chi_text(irr.chi)}
                for irr in self.irreducibles
            ],
            "dl_split": [{"k": k, "values": chi_text(d.chi)} for k, d in sorted(self.dl_split.items())],
            "dl_nonsplit": [{"k": k, "values": chi_text(d.chi)} for k, d in sorted(self.dl_nonsplit.items())],
        }

    def _load_characters(self, doc: dict):
        if doc.get("schema") != SCHEMA or doc.get("p") != self.p:
            raise ValueError("character-table document does not match this prime/schema")
        own = [
            {
                "rep": list(r.rep.entries()),
                "size": r.size,
                "centralizer_order": r.centralizer_order,
                "trace": r.trace,
                "kind": r.kind,
                "inverse_class": r.inverse_class,
                "key": list(r.key),
            }
            for r in self.table.classes
        ]
        if doc["classes"] != own:
            raise ValueError("cached class data disagrees with a fresh build")

        def parse_chi(texts: list[str]) -> ClassFunction:
            return ClassFunction(self.table, [CycNumber.from_text(t) for t in texts])

        self.irreducibles = tuple(
            Irreducible(tuple(d["label"]), parse_chi(d["values"]), d["degree"]) for d in doc["irreducibles"]
        )
        self.dl_split = {d["k"]: DLCharacter("split", d["k"], parse_chi(d["values"])) for d in doc["dl_split"]}
        self.dl_nonsplit = {d["k"]: DLCharacter("nonsplit", d["k"], parse_chi(d["values"])) for d in doc["dl_nonsplit"]}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CharacterData":
        return cls(int(doc["p"]), _cached=doc)


def _diag(p: int, a: int) -> GroupElement:
    return GroupElement(p, a, 0, 0, pow(a, -1, p))


def _integer_rows(data: CharacterData) -> tuple[int, int, list[list[dict[int, int] | None]], list[list[dict[int, int] | None]]]:
    """Character values lifted to a common order with denominators cleared.

    Returns (common order, denominator, rows, conjugated rows); each value is
    a raw integer exponent map (None when zero).  Raw means not canonical:
    sums of products of these maps are reduced once per pairing, which is the
    whole point of the fast path.
    """
    from math import lcm

    n = 1
    dens = 1
    for irr in data.irreducibles:
        for v in irr.chi.values:
            n = lcm(n, v.order)
            for c in v.terms.values():
                dens = lcm(dens, c.denominator)
    rows: list[list[dict[int, int] | None]] = []
    conj: list[list[dict[int, int] | None]] = []
    for irr in data.irreducibles:
        row, crow = [], []
        for v in irr.chi.values:
            if v.is_zero():
                row.append(None)
                crow.append(None)
                continue
            m = n // v.order
            lifted = {e * m: int(c * dens) for e, c in v.terms.items()}
            row.append(lifted)
            crow.append({(n - e) % n: c for e, c in lifted.items()})
        rows.append(row)
        conj.append(crow)
    return n, dens, rows, conj


def _raw_dot(n: int, pairs) -> dict[int, int]:
    """sum of weight * a * b over (weight, a, b) triples of raw exponent maps."""
    acc: dict[int, int] = {}
    get = acc.get
    for w, a, b in pairs:
        for e1, c1 in a.items():
            wc = w * c1
            for e2, c2 in b.items():
                e = e1 + e2
                if e >= n:
                    e -= n
                acc[e] = get(e, 0) + wc * c2
        get = acc.get
    return acc


def validate_table(data: CharacterData) -> dict:
    """Full orthogonality audit of the irreducible table.

    Checks pairwise orthonormality, the degree-square sum, the second
    (column) orthogonality relations, and closure under duality.  Raises
    TableValidationError naming the first offending pair.
    """
    table, irrs = data.table, data.irreducibles
    n = len(irrs)
    if sum(irr.degree**2 for irr in irrs) != table.group_order:
        raise TableValidationError(f"degree squares do not sum to |G| at p={data.p}")
    order, dens, rows, conj_rows = _integer_rows(data)
    sizes = [r.size for r in table.classes]
    scale = Fraction(1, dens * dens * table.group_order)
    for i in range(n):
        vi = rows[i]
        for j in range(i, n):
            cj = conj_rows[j]
            raw = _raw_dot(
                order,
                ((sizes[c], vi[c], cj[c]) for c in range(len(sizes)) if vi[c] is not None and cj[c] is not None),
            )
            got = CycNumber(order, {e: v * scale for e, v in raw.items() if v})
            want = 1 if i == j else 0
            if got != want:
                raise TableValidationError(
                    f"<{irrs[i].name}, {irrs[j].name}> = {got.to_text()} at p={data.p}"
                )
    ncls = len(table)
    col_scale = Fraction(1, dens * dens)
    for ci in range(ncls):
        for cj in range(ci, ncls):
            raw = _raw_dot(
                order,
                ((1, rows[r][ci], conj_rows[r][cj]) for r in range(n) if rows[r][ci] is not None and conj_rows[r][cj] is not None),
            )
            got = CycNumber(order, {e: v * col_scale for e, v in raw.items() if v})
            want = table.classes[ci].centralizer_order if ci == cj else 0
            if got != want:
                raise TableValidationError(f"second orthogonality fails at classes ({ci},{cj}), p={data.p}")
    chis = {irr.chi for irr in irrs}
    for irr in irrs:
        if dual(irr.chi) not in chis:
            raise TableValidationError(f"dual of {irr.name} is not in the table at p={data.p}")
    return {"p": data.p, "irreducibles": n, "orthonormal": True, "second_orthogonality": True, "dual_closed": True}


def steinberg(data: CharacterData) -> Irreducible:
    return data.irreducible("steinberg")


def lemma_tensor_sign(torus_type: str) -> int:
    """Sign making St (x) R equal the induced torus character: +1 split, -1 not."""
    return 1 if torus_type == "split" else -1


def induced_torus_character(data: CharacterData, torus_type: str, k: int) -> ClassFunction:
    """Ind from the torus subgroup of theta_k, via fusion."""
    torus = data.torus(torus_type)
    sub = data.torus_subgroup(torus_type)
    theta = TorusCharacter(torus_type, torus.order, k % torus.order)
    values = [theta.value_at_dlog(torus.dlog[g]) for g in sub.elements]
    return induce(data.table, sub, values)


def steinberg_tensor_identity_holds(data: CharacterData, torus_type: str, k: int) -> bool:
    """(+-1) St (x) R_T^theta == Ind_T theta, exactly."""
    st = data.irreducible("steinberg").chi
    lhs = tensor(st, data.dl(torus_type, k).chi).scale(lemma_tensor_sign(torus_type))
    return lhs == induced_torus_character(data, torus_type, k)
