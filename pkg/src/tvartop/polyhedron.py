"""Exact rational cones and polyhedra in N_Q, in V-representation.

A polyhedron is conv(vertices) + cone(rays); the empty polyhedron is a
distinguished per-rank value.  Construction canonicalizes through one
V -> H -> V round trip (dual ray enumeration both ways), so equality of
point sets is equality of the stored data.  All arithmetic is exact.

Scale expectations: ambient rank <= 4-ish, a handful of generators per
object.  Ray enumeration is the textbook subset-kernel method, quadratic
pivoting and all; nothing here is meant for large instances.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm

from .errors import EmptyInput, RankMismatch
from .exactla import rank_and_kernel, rref

Vec = tuple


def qvec(xs) -> Vec:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in xs)


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vsub(u, v) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vneg(u) -> Vec:
    return tuple(-a for a in u)


def is_zero(u) -> bool:
    return all(a == 0 for a in u)


def mu(v) -> int:
    """Least positive integer m with m*v integral (lcm of denominators)."""
    return reduce(lcm, (Fraction(x).denominator for x in v), 1)


def primitive(v) -> Vec:
    """Scale a nonzero rational vector to a primitive integer vector."""
    w = [Fraction(x) for x in v]
    m = reduce(lcm, (x.denominator for x in w), 1)
    ints = [int(x * m) for x in w]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


def _kernel_basis(rows, dim):
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    _, basis = rank_and_kernel(rows)
    return basis


def _rank(rows) -> int:
    if not rows:
        return 0
    r, _ = rank_and_kernel(rows)
    return r


def _canonical_subspace_basis(vectors, dim):
    """Primitive integer RREF basis of span(vectors); canonical per subspace."""
    if not vectors:
        return ()
    red, pivots = rref(vectors)
    return tuple(primitive(red[i]) for i in range(len(pivots)))


def _project_off(v, basis):
    """v minus its orthogonal projection onto span(basis)."""
    out = list(v)
    ortho = []
    for b in basis:
        w = list(b)
        for o in ortho:
            c = dot(w, o) / dot(o, o)
            w = [x - c * y for x, y in zip(w, o)]
        if not is_zero(w):
            ortho.append(w)
    for o in ortho:
        c = dot(out, o) / dot(o, o)
        out = [x - c * y for x, y in zip(out, o)]
    return tuple(out)


def _pointed_rays(mat, d):
    """Extreme rays of the pointed cone {x in Q^d : mat @ x >= 0}."""
    if d == 0:
        return []
    if d == 1:
        if all(row[0] >= 0 for row in mat):
            return [(Fraction(1),)]
        if all(row[0] <= 0 for row in mat):
            return [(Fraction(-1),)]
        return []
    found = {}
    m = len(mat)
    for sub in combinations(range(m), d - 1):
        rows = [mat[i] for i in sub]
        r, ker = rank_and_kernel(rows)
        if r != d - 1:
            continue
        u = ker[0]
        vals = [dot(row, u) for row in mat]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            u = vneg(u)
            vals = [-x for x in vals]
        else:
            continue
        tight = [mat[i] for i, x in enumerate(vals) if x == 0]
        if _rank(tight) != d - 1:
            continue
        found[primitive(u)] = None
    return [qvec(r) for r in found]


def rays_of_hcone(ineqs, eqs, dim):
    """Generators of {x : <a,x> >= 0 for a in ineqs, <e,x> = 0 for e in eqs}.

    Returns (lineality basis, rays), both canonical primitive integer tuples;
    rays are the extreme rays of the cone projected orthogonally off the
    lineality space.
    """
    w_basis = _kernel_basis(list(eqs), dim)
    if not w_basis:
        return (), ()
    w = len(w_basis)
    mat = [[dot(a, wj) for wj in w_basis] for a in ineqs]
    lin_y = _kernel_basis([r for r in mat if not is_zero(r)], w) if mat else \
        [tuple(Fraction(int(i == j)) for j in range(w)) for i in range(w)]
    # complement of the lineality inside the y-space
    if lin_y:
        _, piv = rref(lin_y)
        comp_idx = [j for j in range(w) if j not in piv]
    else:
        comp_idx = list(range(w))
    comp = [tuple(Fraction(int(j == c)) for j in range(w)) for c in comp_idx]
    proj_rows = [[row[c] for c in comp_idx] for row in mat]
    rays_c = _pointed_rays(proj_rows, len(comp_idx))

    def to_ambient(y):
        out = [Fraction(0)] * dim
        for coef, wv in zip(y, w_basis):
            out = [o + coef * x for o, x in zip(out, wv)]
        return tuple(out)

    lin_amb = _canonical_subspace_basis([to_ambient(y) for y in lin_y], dim)
    rays_amb = []
    for rc in rays_c:
        y = [Fraction(0)] * w
        for coef, c in zip(rc, comp_idx):
            y[c] = coef
        r = to_ambient(y)
        if lin_amb:
            r = _project_off(r, lin_amb)
        rays_amb.append(primitive(r))
    return lin_amb, tuple(sorted(set(rays_amb)))


class Cone:
    """Polyhedral cone given by primitive generators.

    ``rays`` lists the canonical generators: extreme rays of the pointed
    part plus a +/- pair for each lineality basis vector.  Pointedness is
    the derived ``is_pointed`` flag.
    """

    __slots__ = ("ambient_rank", "_pointed_rays", "_lineality", "_dual", "key")

    def __init__(self, ambient_rank, pointed_rays, lineality, _dual=None):
        self.ambient_rank = ambient_rank
        self._pointed_rays = tuple(sorted(pointed_rays))
        self._lineality = tuple(sorted(lineality))
        self._dual = _dual
        self.key = (ambient_rank, self._pointed_rays, self._lineality)

    @classmethod
    def from_generators(cls, ambient_rank, generators) -> "Cone":
        gens = [qvec(g) for g in generators]
        dlin, drays = rays_of_hcone(gens, [], ambient_rank)
        plin, prays = rays_of_hcone(drays, dlin, ambient_rank)
        cone = cls(ambient_rank, prays, plin)
        cone._dual = (dlin, drays)
        return cone

    @property
    def rays(self):
        out = list(self._pointed_rays)
        for l in self._lineality:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(out)

    @property
    def lineality(self):
        return self._lineality

    @property
    def is_pointed(self) -> bool:
        return not self._lineality

    @property
    def dim(self) -> int:
        return _rank(list(self._pointed_rays) + list(self._lineality))

    def hrep(self):
        """(equalities, inequalities): x in cone iff <e,x>=0 and <a,x>>=0."""
        if self._dual is None:
            self._dual = rays_of_hcone([qvec(g) for g in self.rays], [], self.ambient_rank)
        return self._dual

    def dual(self) -> "Cone":
        dlin, drays = self.hrep()
        return Cone.from_generators(
            self.ambient_rank,
            list(drays) + [l for v in dlin for l in (v, tuple(-x for x in v))],
        )

    def contains(self, v) -> bool:
        eqs, ineqs = self.hrep()
        v = qvec(v)
        return all(dot(e, v) == 0 for e in eqs) and all(dot(a, v) >= 0 for a in ineqs)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays)

    def as_polyhedron(self) -> "Polyhedron":
        return Polyhedron._from_canonical(
            self.ambient_rank, (tuple(Fraction(0) for _ in range(self.ambient_rank)),), self
        )

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Cone({self.ambient_rank}, rays={[tuple(map(int, r)) for r in self.rays]})"


def cone_from_rays(ambient_rank, rays) -> "Cone":
    return Cone.from_generators(ambient_rank, rays)


class FaceDescriptor:
    """A face of a polyhedron, by the vertex/ray indices it contains."""

    __slots__ = ("vertex_subset", "ray_subset", "dim")

    def __init__(self, vertex_subset, ray_subset, dim):
        self.vertex_subset = tuple(sorted(vertex_subset))
        self.ray_subset = tuple(sorted(ray_subset))
        self.dim = dim

    def __eq__(self, other):
        return (self.vertex_subset, self.ray_subset) == (other.vertex_subset, other.ray_subset)

    def __hash__(self):
        return hash((self.vertex_subset, self.ray_subset))

    def __repr__(self):
        return f"Face(v={self.vertex_subset}, r={self.ray_subset}, dim={self.dim})"


class Polyhedron:
    """conv(vertices) + tail cone, canonical after construction.

    For polyhedra whose recession cone has lineality, ``vertices`` holds the
    canonical representative points (minimal faces) in the orthogonal
    complement of the lineality space.
    """

    __slots__ = ("ambient_rank", "vertices", "tail", "is_empty", "_hrep", "_faces", "key")

    def __init__(self, ambient_rank, vertices, tail, is_empty=False, _hrep=None):
        self.ambient_rank = ambient_rank
        self.vertices = tuple(sorted(vertices))
        self.tail = tail
        self.is_empty = is_empty
        self._hrep = _hrep
        self._faces = None
        self.key = (ambient_rank, self.vertices, tail.key if tail is not None else None, is_empty)

    @classmethod
    def empty(cls, ambient_rank) -> "Polyhedron":
        return cls(ambient_rank, (), Cone(ambient_rank, (), ()), is_empty=True)

    @classmethod
    def _from_canonical(cls, ambient_rank, vertices, tail) -> "Polyhedron":
        return cls(ambient_rank, vertices, tail)

    @classmethod
    def from_points_rays(cls, ambient_rank, points, rays) -> "Polyhedron":
        pts = [qvec(p) for p in points]
        if not pts:
            raise ValueError("a nonempty polyhedron needs at least one point; use Polyhedron.empty")
        if any(len(p) != ambient_rank for p in pts) or any(len(r) != ambient_rank for r in rays):
            raise RankMismatch("generator length does not match ambient rank")
        gens = [(Fraction(1),) + p for p in pts] + [(Fraction(0),) + qvec(r) for r in rays]
        heqs, hineqs = rays_of_hcone(gens, [], ambient_rank + 1)
        return cls._from_hrep_data(ambient_rank, heqs, hineqs)

    @classmethod
    def _from_hrep_data(cls, ambient_rank, heqs, hineqs):
        # t >= 0 is implicit in dual-derived H-reps but not in synthesized ones
        t_row = (Fraction(1),) + tuple(Fraction(0) for _ in range(ambient_rank))
        hineqs = list(hineqs) + [t_row]
        lin, gens = rays_of_hcone(hineqs, heqs, ambient_rank + 1)
        verts = []
        ray_gens = []
        for g in gens:
            t = g[0]
            if t > 0:
                verts.append(tuple(Fraction(x, t) for x in g[1:]))
            elif t == 0:
                ray_gens.append(g[1:])
            else:
                # homogenization cones never contain t < 0 rays unless empty input
                return cls.empty(ambient_rank)
        lin_gens = []
        for l in lin:
            if l[0] != 0:
                return cls.empty(ambient_rank)
            lin_gens.append(l[1:])
        if not verts:
            return cls.empty(ambient_rank)
        tail = Cone(ambient_rank, tuple(sorted(ray_gens)),
                    _canonical_subspace_basis([qvec(l) for l in lin_gens], ambient_rank))
        p = cls(ambient_rank, verts, tail)
        p._hrep = (heqs, hineqs)
        return p

    def hrep(self):
        """Homogeneous H-rep: rows (a, u) with a + <u, x> >= 0 (or = 0)."""
        if self._hrep is None:
            gens = [(Fraction(1),) + v for v in self.vertices]
            gens += [(Fraction(0),) + qvec(r) for r in self.tail.rays]
            self._hrep = rays_of_hcone(gens, [], self.ambient_rank + 1)
        return self._hrep

    @property
    def rays(self):
        return self.tail.rays

    def dim(self) -> int:
        if self.is_empty:
            return -1
        v0 = self.vertices[0]
        vecs = [vsub(v, v0) for v in self.vertices[1:]] + [qvec(r) for r in self.tail.rays]
        return _rank([v for v in vecs if not is_zero(v)])

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        eqs, ineqs = self.hrep()
        hx = (Fraction(1),) + qvec(x)
        return all(dot(e, hx) == 0 for e in eqs) and all(dot(a, hx) >= 0 for a in ineqs)

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        eqs, ineqs = self.hrep()
        for v in other.vertices:
            hv = (Fraction(1),) + v
            if any(dot(e, hv) != 0 for e in eqs) or any(dot(a, hv) < 0 for a in ineqs):
                return False
        for r in other.tail.rays:
            hr = (Fraction(0),) + qvec(r)
            if any(dot(e, hr) != 0 for e in eqs) or any(dot(a, hr) < 0 for a in ineqs):
                return False
        return True

    def is_cone_at_origin(self) -> bool:
        zero = tuple(Fraction(0) for _ in range(self.ambient_rank))
        return self.vertices == (zero,)

    def faces(self):
        """All faces (self included), as FaceDescriptors into vertices/rays."""
        if self.is_empty:
            raise EmptyInput("the empty polyhedron has no face lattice here")
        if not self.tail.is_pointed:
            raise ValueError("face enumeration requires a pointed recession cone")
        if self._faces is not None:
            return self._faces
        eqs, ineqs = self.hrep()
        nv, nr = len(self.vertices), len(self.tail.rays)
        tightv = []
        tightr = []
        for a in ineqs:
            tightv.append(frozenset(
                i for i, v in enumerate(self.vertices) if dot(a, (Fraction(1),) + v) == 0))
            tightr.append(frozenset(
                j for j, r in enumerate(self.tail.rays) if dot(a, (Fraction(0),) + qvec(r)) == 0))
        full = (frozenset(range(nv)), frozenset(range(nr)))
        seen = {full}
        queue = [full]
        while queue:
            vs, rs = queue.pop()
            for tv, tr in zip(tightv, tightr):
                nvs, nrs = vs & tv, rs & tr
                if not nvs:
                    continue
                if (nvs, nrs) not in seen:
                    seen.add((nvs, nrs))
                    queue.append((nvs, nrs))
        out = []
        for vs, rs in seen:
            pts = [self.vertices[i] for i in vs]
            vecs = [vsub(p, pts[0]) for p in pts[1:]]
            vecs += [qvec(self.tail.rays[j]) for j in rs]
            d = _rank([v for v in vecs if not is_zero(v)])
            out.append(FaceDescriptor(vs, rs, d))
        out.sort(key=lambda f: (f.dim, f.vertex_subset, f.ray_subset))
        self._faces = out
        return out

    def face_polyhedron(self, desc: FaceDescriptor) -> "Polyhedron":
        verts = tuple(self.vertices[i] for i in desc.vertex_subset)
        rays = tuple(self.tail.rays[j] for j in desc.ray_subset)
        return Polyhedron._from_canonical(
            self.ambient_rank, verts, Cone(self.ambient_rank, rays, ())
        )

    def face_polyhedra(self):
        return [self.face_polyhedron(f) for f in self.faces()]

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron.empty({self.ambient_rank})"
        vs = [tuple(str(x) for x in v) for v in self.vertices]
        rs = [tuple(map(int, r)) for r in self.tail.rays]
        return f"Polyhedron(verts={vs}, rays={rs})"


def tail_cone(p: Polyhedron) -> Cone:
    """Recession cone of a nonempty polyhedron."""
    if p.is_empty:
        raise EmptyInput("tail cone of the empty polyhedron")
    return p.tail


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def minkowski_sum(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.ambient_rank != q.ambient_rank:
        raise RankMismatch("minkowski_sum over different ambient ranks")
    if p.is_empty or q.is_empty:
        return Polyhedron.empty(p.ambient_rank)
    points = [vadd(a, b) for a in p.vertices for b in q.vertices]
    rays = list(p.tail.rays) + list(q.tail.rays)
    return Polyhedron.from_points_rays(p.ambient_rank, points, rays)


_intersect_cache = {}


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    """Exact intersection; the empty polyhedron when infeasible."""
    if p.ambient_rank != q.ambient_rank:
        raise RankMismatch("intersect over different ambient ranks")
    if p.is_empty or q.is_empty:
        return Polyhedron.empty(p.ambient_rank)
    ck = (p.key, q.key) if p.key <= q.key else (q.key, p.key)
    hit = _intersect_cache.get(ck)
    if hit is not None:
        return hit
    peq, pin = p.hrep()
    qeq, qin = q.hrep()
    gens = [(Fraction(1),) + v for v in p.vertices] + \
           [(Fraction(0),) + qvec(r) for r in p.tail.rays]
    inside = all(dot(e, g) == 0 for e in qeq for g in gens) and \
        all(dot(a, g) >= 0 for a in qin for g in gens)
    if inside:
        out = p
    else:
        lin, rays = rays_of_hcone(list(pin) + list(qin), list(peq) + list(qeq),
                                  p.ambient_rank + 1)
        pts, rgs = [], []
        ok = True
        for g in rays:
            if g[0] > 0:
                pts.append(tuple(Fraction(x, g[0]) for x in g[1:]))
            else:
                rgs.append(g[1:])
        for l in lin:
            if l[0] != 0:
                ok = False
            rgs.append(l[1:])
            rgs.append(tuple(-x for x in l[1:]))
        if not pts or not ok:
            out = Polyhedron.empty(p.ambient_rank)
        else:
            out = Polyhedron.from_points_rays(p.ambient_rank, pts, rgs)
    _intersect_cache[ck] = out
    return out


def is_face_of(f: Polyhedron, p: Polyhedron) -> bool:
    """True iff f is the minimizer set of some linear functional over p."""
    if f.ambient_rank != p.ambient_rank:
        raise RankMismatch("is_face_of over different ambient ranks")
    if f.is_empty:
        return True
    if p.is_empty:
        return False
    if not p.contains_polyhedron(f):
        return False
    eqs, ineqs = p.hrep()
    fgens_v = [(Fraction(1),) + v for v in f.vertices]
    fgens_r = [(Fraction(0),) + qvec(r) for r in f.tail.rays]
    tight = [a for a in ineqs
             if all(dot(a, g) == 0 for g in fgens_v) and all(dot(a, g) == 0 for g in fgens_r)]
    verts = tuple(v for v in p.vertices
                  if all(dot(a, (Fraction(1),) + v) == 0 for a in tight))
    rays = tuple(r for r in p.tail.rays
                 if all(dot(a, (Fraction(0),) + qvec(r)) == 0 for a in tight))
    return sorted(verts) == list(f.vertices) and sorted(rays) == list(f.tail.rays)


def normal_fan(p: Polyhedron):
    """Cones of linearity of u -> min_{v in p} <u, v>, one per face of p.

    Returned in the same order as p.faces(); together they cover the dual
    of the tail cone.
    """
    if p.is_empty:
        raise EmptyInput("normal fan of the empty polyhedron")
    n = p.ambient_rank
    cones = []
    for desc in p.faces():
        v0 = p.vertices[desc.vertex_subset[0]]
        eqs, ineqs = [], []
        for i, v in enumerate(p.vertices):
            d = vsub(v, v0)
            if is_zero(d):
                continue
            (eqs if i in desc.vertex_subset else ineqs).append(d)
        for j, r in enumerate(p.tail.rays):
            (eqs if j in desc.ray_subset else ineqs).append(qvec(r))
        lin, rays = rays_of_hcone(ineqs, eqs, n)
        cones.append(Cone(n, rays, lin))
    return cones


_meets_cache = {}


def cone_meets_polyhedron(c: Cone, p: Polyhedron) -> bool:
    """Exact feasibility of c ∩ p (false for the empty polyhedron)."""
    if c.ambient_rank != p.ambient_rank:
        raise RankMismatch("cone and polyhedron in different ambient ranks")
    if p.is_empty:
        return False
    ck = (c.key, p.key)
    hit = _meets_cache.get(ck)
    if hit is None:
        hit = not intersect(c.as_polyhedron(), p).is_empty
        _meets_cache[ck] = hit
    return hit


def trivial_polyhedron(c: Cone) -> Polyhedron:
    """The polyhedron 0 + c (the trivial coefficient for tail cone c)."""
    return c.as_polyhedron()
