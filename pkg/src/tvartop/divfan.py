"""p-divisors and divisorial fans on a marked rational curve.

Marked points are opaque labels; only the multiset of points ever matters.
A coefficient may be a polyhedron with the common tail cone, the trivial
coefficient (the tail cone itself, the default for unlisted labels), or
the empty polyhedron (the point is removed from the locus).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import PolyhedralComplex
from .errors import (
    EmptyCoefficient,
    FanInvalid,
    GenusNotZero,
    NotComplete,
    NotInDualCone,
    PointNotCovered,
)
from .polyhedron import (
    Cone,
    Polyhedron,
    cone_meets_polyhedron,
    dot,
    intersect,
    is_face_of,
    minkowski_sum,
    qvec,
    rays_of_hcone,
    trivial_polyhedron,
)


class _Generic:
    def __repr__(self):
        return "GENERIC"


GENERIC = _Generic()


@dataclass(frozen=True)
class CurveData:
    genus: int
    marked_points: tuple

    def __post_init__(self):
        if len(set(self.marked_points)) != len(self.marked_points):
            raise ValueError("marked point labels must be distinct")


class PDivisor:
    """A polyhedral divisor: tail cone plus coefficients over marked points."""

    __slots__ = ("tail", "coefficients", "key")

    def __init__(self, tail: Cone, coefficients):
        if not tail.is_pointed:
            raise ValueError("tail cone must be pointed")
        self.tail = tail
        coeffs = {}
        for label, poly in coefficients.items():
            if not poly.is_empty and poly.tail != tail:
                raise ValueError(f"coefficient at {label!r} has a different tail cone")
            coeffs[label] = poly
        self.coefficients = coeffs
        trivial = trivial_polyhedron(tail)
        nontrivial = tuple(sorted(
            (label, poly.key) for label, poly in coeffs.items() if poly != trivial
        ))
        self.key = (tail.key, nontrivial)

    @property
    def ambient_rank(self):
        return self.tail.ambient_rank

    def coefficient(self, label) -> Polyhedron:
        """Coefficient at a label; unlisted labels default to the tail cone."""
        got = self.coefficients.get(label)
        return trivial_polyhedron(self.tail) if got is None else got

    def has_complete_locus(self) -> bool:
        return not any(p.is_empty for p in self.coefficients.values())

    def empty_labels(self):
        return sorted(l for l, p in self.coefficients.items() if p.is_empty)

    def nontrivial_labels(self):
        trivial = trivial_polyhedron(self.tail)
        return sorted(l for l, p in self.coefficients.items()
                      if not p.is_empty and p != trivial)

    def __eq__(self, other):
        return isinstance(other, PDivisor) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"PDivisor(tail={self.tail!r}, coeffs={self.coefficients})"


class DivisorialFan:
    """Finite intersection-closed set of p-divisors over a marked curve."""

    def __init__(self, curve: CurveData, pdivisors):
        self.curve = curve
        seen = {}
        for d in pdivisors:
            seen[d.key] = d
        self.pdivisors = tuple(seen.values())
        if not self.pdivisors:
            raise ValueError("a divisorial fan needs at least one p-divisor")
        ranks = {d.ambient_rank for d in self.pdivisors}
        if len(ranks) != 1:
            raise ValueError("mixed ambient ranks")
        self.ambient_rank = ranks.pop()
        if self.ambient_rank < 1:
            raise ValueError("ambient rank must be at least 1")
        self._slices = {}
        self._validation = None

    def members_with(self, label) -> list:
        return [d for d in self.pdivisors if not d.coefficient(label).is_empty]

    def __repr__(self):
        return (f"DivisorialFan(genus={self.curve.genus}, "
                f"points={list(self.curve.marked_points)}, members={len(self.pdivisors)})")


def evaluate(d: PDivisor, u, points=None, on_locus=True):
    """Per-label minimum of <u, .> over the coefficients (the divisor D(u)).

    ``u`` must lie in the dual of the tail cone.  ``points`` defaults to the
    labels explicitly carried by the p-divisor; labels with empty coefficient
    are skipped when ``on_locus`` and raise EmptyCoefficient otherwise.
    """
    u = qvec(u)
    if any(dot(u, r) < 0 for r in d.tail.rays):
        raise NotInDualCone(f"{u} is not in the dual of the tail cone")
    if points is None:
        points = sorted(d.coefficients)
    out = {}
    for label in points:
        poly = d.coefficient(label)
        if poly.is_empty:
            if on_locus:
                continue
            raise EmptyCoefficient(f"coefficient at {label!r} is empty")
        out[label] = min(dot(u, v) for v in poly.vertices)
    return out


def degree(d: PDivisor) -> Polyhedron:
    """Minkowski sum of the coefficients; empty absorbs, no support gives
    the trivial polyhedron on the tail cone."""
    if not d.has_complete_locus():
        return Polyhedron.empty(d.ambient_rank)
    total = None
    trivial = trivial_polyhedron(d.tail)
    for label in sorted(d.coefficients):
        poly = d.coefficients[label]
        if poly == trivial:
            continue
        total = poly if total is None else minkowski_sum(total, poly)
    return trivial if total is None else total


@dataclass
class CheckReport:
    ok: bool
    reasons: list

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "; ".join(self.reasons)


def is_pdivisor(d: PDivisor, curve: CurveData) -> CheckReport:
    """Properness test.  Affine locus always passes; complete locus on a
    rational curve needs deg inside the tail cone and away from the origin.
    """
    if not d.has_complete_locus():
        return CheckReport(True, [])
    if curve.genus != 0:
        raise GenusNotZero("complete-locus properness is only decided on genus 0")
    deg = degree(d)
    reasons = []
    if not all(d.tail.contains(v) for v in deg.vertices):
        reasons.append("degree polyhedron is not contained in the tail cone")
    zero = tuple(Fraction(0) for _ in range(d.ambient_rank))
    if deg.contains(zero):
        reasons.append("origin lies in the degree polyhedron (bigness fails)")
    return CheckReport(not reasons, reasons)


@dataclass
class LociReport:
    excluded: tuple   # labels outside the locus
    supp: tuple       # labels in the locus with nontrivial coefficient
    loc: str
    triv: str


def loci(obj, curve: CurveData) -> LociReport:
    """loc/supp/triv for a p-divisor or a divisorial fan.

    For fans: union of loci, union of supports, intersection of trivial loci.
    """
    if isinstance(obj, PDivisor):
        excluded = set(obj.empty_labels())
        supp = set(obj.nontrivial_labels())
    else:
        excluded = None
        supp = set()
        for d in obj.pdivisors:
            ex = set(d.empty_labels())
            excluded = ex if excluded is None else (excluded & ex)
            supp |= set(d.nontrivial_labels()) - ex
        excluded = excluded or set()
    supp -= excluded
    exc = tuple(sorted(excluded))
    loc = "P1" if not exc else "P1 minus {%s}" % ", ".join(exc)
    nontriv = tuple(sorted(set(exc) | supp))
    triv = "P1" if not nontriv else "P1 minus {%s}" % ", ".join(nontriv)
    return LociReport(exc, tuple(sorted(supp)), loc, triv)


def excluded_points(s: DivisorialFan):
    """Marked points outside loc(S), i.e. empty in every member."""
    return tuple(p for p in s.curve.marked_points if not s.members_with(p))


def tail_fan(s: DivisorialFan) -> PolyhedralComplex:
    """Fan of tail cones (FanInvalid if they do not meet in faces)."""
    if "tail" not in s._slices:
        cells = [trivial_polyhedron(d.tail) for d in s.pdivisors]
        s._slices["tail"] = PolyhedralComplex(s.ambient_rank, cells)
    return s._slices["tail"]


def slice_at(s: DivisorialFan, p) -> PolyhedralComplex:
    """The polyhedral complex of coefficients over the point p.

    ``p`` is a marked point label or GENERIC (the tail fan).  A marked point
    excluded from every locus raises PointNotCovered.
    """
    if p is GENERIC:
        return tail_fan(s)
    if p not in s.curve.marked_points:
        raise KeyError(f"unknown marked point {p!r}")
    if p not in s._slices:
        members = s.members_with(p)
        if not members:
            raise PointNotCovered(f"point {p!r} is excluded from every locus")
        cells = [d.coefficient(p) for d in members]
        s._slices[p] = PolyhedralComplex(s.ambient_rank, cells)
    return s._slices[p]


def slice_support(s: DivisorialFan):
    """Marked points whose slice differs from the tail fan.

    This is the r that enters the class and Betti formulas.
    """
    tf = tail_fan(s)
    out = []
    for p in s.curve.marked_points:
        if not s.members_with(p):
            continue
        if slice_at(s, p) != tf:
            out.append(p)
    return tuple(out)


@dataclass
class SlicePartition:
    contracted: list
    noncontracted: list


def _contracted_tail_keys(s: DivisorialFan):
    """Keys of tail-fan cones collapsed by the contraction map."""
    complete = [(d.tail, degree(d)) for d in s.pdivisors if d.has_complete_locus()]
    contracted = {}
    for face in tail_fan(s).faces():
        cone = face.polyhedron.tail
        hit = any(
            tail.contains_cone(cone) and cone_meets_polyhedron(cone, deg)
            for tail, deg in complete
        )
        contracted[cone.key] = hit
    return contracted


def contracted_partition(s: DivisorialFan):
    """Split the tail fan and every slice into contracted / non-contracted.

    A face is contracted iff some complete-locus member's degree meets its
    tail cone inside that member's tail.
    """
    ckeys = _contracted_tail_keys(s)
    tf = tail_fan(s)

    def split(complex_):
        con, non = [], []
        for face in complex_.faces():
            (con if ckeys[face.polyhedron.tail.key] else non).append(face)
        return SlicePartition(con, non)

    per_slice = {}
    for p in s.curve.marked_points:
        if s.members_with(p):
            per_slice[p] = split(slice_at(s, p))
    return split(tf), per_slice


def pdiv_intersect(a: PDivisor, b: PDivisor) -> PDivisor:
    """Coefficient-wise intersection."""
    tail_poly = intersect(trivial_polyhedron(a.tail), trivial_polyhedron(b.tail))
    tail = tail_poly.tail
    coeffs = {}
    for label in sorted(set(a.coefficients) | set(b.coefficients)):
        coeffs[label] = intersect(a.coefficient(label), b.coefficient(label))
    return PDivisor(tail, coeffs)


def closure_under_intersection(members, max_rounds=12):
    """Close a member list under pairwise intersection (fixture builder)."""
    pool = {d.key: d for d in members}
    for _ in range(max_rounds):
        fresh = {}
        items = list(pool.values())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                got = pdiv_intersect(items[i], items[j])
                if got.key not in pool:
                    fresh[got.key] = got
        if not fresh:
            return list(pool.values())
        pool.update(fresh)
    raise FanInvalid("intersection closure did not stabilize")


@dataclass
class ValidationReport:
    ok: bool
    issues: list

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "valid" if self.ok else "; ".join(self.issues)


def validate(s: DivisorialFan) -> ValidationReport:
    """Full fan check: properness, intersection closure, the coefficient-wise
    face condition, and slice well-formedness.

    The face condition checked here is the necessary combinatorial one; the
    open-embedding condition itself has no coefficient-level criterion.
    """
    if s._validation is not None:
        return s._validation
    issues = []
    for i, d in enumerate(s.pdivisors):
        rep = is_pdivisor(d, s.curve)
        if not rep.ok:
            issues.append(f"member {i} is not a p-divisor: {rep}")
    keys = {d.key for d in s.pdivisors}
    labels = set()
    for d in s.pdivisors:
        labels |= set(d.coefficients)
    labels = sorted(labels)
    for i in range(len(s.pdivisors)):
        for j in range(i + 1, len(s.pdivisors)):
            a, b = s.pdivisors[i], s.pdivisors[j]
            common = pdiv_intersect(a, b)
            if common.key not in keys:
                issues.append(f"intersection of members {i} and {j} is missing (closure)")
            at = trivial_polyhedron(a.tail)
            bt = trivial_polyhedron(b.tail)
            ct = trivial_polyhedron(common.tail)
            if not (is_face_of(ct, at) and is_face_of(ct, bt)):
                issues.append(f"tails of members {i} and {j} do not meet in a common face")
            for label in labels:
                ca = a.coefficient(label)
                cb = b.coefficient(label)
                cc = common.coefficient(label)
                if not (is_face_of(cc, ca) and is_face_of(cc, cb)):
                    issues.append(
                        f"coefficients of members {i} and {j} at {label!r} "
                        "do not meet in a common face"
                    )
    try:
        tail_fan(s)
        for p in s.curve.marked_points:
            if s.members_with(p):
                slice_at(s, p)
    except FanInvalid as exc:
        issues.append(f"slice is not a polyhedral complex: {exc}")
    report = ValidationReport(not issues, issues)
    s._validation = report
    return report


def toric_downgrade(f: PolyhedralComplex) -> DivisorialFan:
    """Divisorial fan of a complete fan under the last-coordinate projection.

    Every cone of the fan yields a member: its height 0 section is the tail,
    the sections at heights +1 and -1 are the coefficients at "0" and "inf".
    The result is closed under intersections because the input fan is.
    """
    from .complexes import is_complete

    if not is_complete(f):
        raise NotComplete("toric downgrade needs a complete fan")
    n1 = f.ambient_rank
    n = n1 - 1
    members = {}
    for face in f.faces():
        cone = face.polyhedron.tail
        eqs, ineqs = cone.hrep()
        tail_lin, tail_rays = rays_of_hcone(
            [a[:n] for a in ineqs], [e[:n] for e in eqs], n
        )
        if tail_lin:
            raise FanInvalid("downgraded tail cone is not pointed")
        tail = Cone(n, tail_rays, ())
        coeffs = {}
        for label, h in (("0", 1), ("inf", -1)):
            heqs = [(Fraction(h) * e[n],) + tuple(Fraction(x) for x in e[:n]) for e in eqs]
            hineqs = [(Fraction(h) * a[n],) + tuple(Fraction(x) for x in a[:n]) for a in ineqs]
            coeffs[label] = Polyhedron._from_hrep_data(n, heqs, hineqs)
        d = PDivisor(tail, coeffs)
        members[d.key] = d
    return DivisorialFan(CurveData(0, ("0", "inf")), members.values())


def product_with_line(t: PolyhedralComplex) -> PolyhedralComplex:
    """Complete fan in one extra rank: cones of t times the fan of the line."""
    cells = []
    for cell in t.maximal_cells:
        rays = [tuple(r) + (0,) for r in cell.tail.rays]
        for e in (1, -1):
            cells.append(
                Cone.from_generators(t.ambient_rank + 1, rays + [(0,) * t.ambient_rank + (e,)])
                .as_polyhedron()
            )
    return PolyhedralComplex(t.ambient_rank + 1, cells)


def r0_fan(t: PolyhedralComplex) -> DivisorialFan:
    """Empty-support divisorial fan whose tail fan is the given complete fan."""
    return toric_downgrade(product_with_line(t))
