"""Projection of polyhedral cones given by inequalities.

Two routes: the convex hull method (CHM), which grows the projected cone
from points found by LP and keeps its inequality/ray pair up to date with
an incremental double description, and Fourier-Motzkin elimination, used as
an independent oracle on small instances.

The matrix-level functions work on integer row vectors over coordinates
0..d-1; the cone-level wrappers translate entropy coordinates (mask - 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from .entropy_space import GE, EQ, EntVector, LinForm, canonicalize, mask_vars, map_mask, subset_mask
from .lp import Certificate, ConeLP, MatrixLP, cone_point_in_projection, primitive
from .shannon import Cone

log = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _prim(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def _int_row(row: Sequence) -> Vector:
    return tuple(primitive([Fraction(x) for x in row])) if any(row) else tuple(0 for _ in row)


class DoubleDescription:
    """Incremental double description of ``{x : a . x >= 0 for added a}``.

    The cone is kept as a lineality basis plus extreme rays modulo that
    basis, all primitive integer vectors.  Each ray carries the bitset of
    added constraints it makes tight; adjacency of two rays is decided
    combinatorially from these sets.
    """

    def __init__(self, d: int):
        self.d = d
        self.lin: list[Vector] = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        self.rays: list[Vector] = []
        self.zeros: list[int] = []
        self.constraints: list[Vector] = []

    def add(self, a: Sequence[int], equality: bool = False) -> None:
        a = tuple(a)
        if len(a) != self.d:
            raise ValueError("constraint has wrong dimension")
        idx = len(self.constraints)
        self.constraints.append(a)
        bit = 1 << idx
        vals = [_dot(a, l) for l in self.lin]
        piv = next((i for i, v in enumerate(vals) if v), None)
        if piv is not None:
            l0 = self.lin[piv]
            s0 = vals[piv]
            if s0 < 0:
                l0, s0 = tuple(-x for x in l0), -s0
            new_lin = []
            for i, (l, v) in enumerate(zip(self.lin, vals)):
                if i == piv:
                    continue
                if v:
                    l = _prim([s0 * x - v * y for x, y in zip(l, l0)])
                new_lin.append(l)
            rays = []
            for r in self.rays:
                v = _dot(a, r)
                if v:
                    r = _prim([s0 * x - v * y for x, y in zip(r, l0)])
                rays.append(r)
            self.lin = new_lin
            self.rays = rays
            self.zeros = [z | bit for z in self.zeros]
            if not equality:
                self.rays.append(l0)
                self.zeros.append(bit - 1)
            return
        vals = [_dot(a, r) for r in self.rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        if not neg and not (equality and pos):
            self.zeros = [z | bit if vals[i] == 0 else z for i, z in enumerate(self.zeros)]
            return
        need = self.d - len(self.lin) - 2
        zeros = self.zeros
        new_rays: list[Vector] = []
        new_zeros: list[int] = []
        for p in pos:
            zp = zeros[p]
            if zp.bit_count() < need:
                continue
            for q in neg:
                z = zp & zeros[q]
                if z.bit_count() < need:
                    continue
                if any(k != p and k != q and z & zeros[k] == z for k in range(len(zeros))):
                    continue
                sp, sq = vals[p], -vals[q]
                new_rays.append(_prim([sp * x + sq * y for x, y in zip(self.rays[q], self.rays[p])]))
                new_zeros.append(z | bit)
        keep = zer if equality else pos + zer
        keep.sort()
        self.rays = [self.rays[i] for i in keep] + new_rays
        self.zeros = [zeros[i] | bit if vals[i] == 0 else zeros[i] for i in keep] + new_zeros

    def equalities(self) -> list[Vector]:
        """Linear equations satisfied by every point of the cone's dual object.

        For a DD run on points (the dual use in CHM), the lineality basis of
        the functional cone is the set of implicit equalities of the hull.
        """
        return list(self.lin)


def _reduce_mod(vectors: Sequence[Vector], basis: Sequence[Vector]) -> list[Vector]:
    """Reduce vectors modulo span(basis) so each is zero on basis pivot coordinates."""
    if not basis:
        return [tuple(v) for v in vectors]
    rows: list[tuple[int, list[Fraction]]] = []
    for b in basis:
        r = [Fraction(x) for x in b]
        for p, pr in rows:
            if r[p]:
                c = r[p]
                r = [x - c * y for x, y in zip(r, pr)]
        nz = [i for i, x in enumerate(r) if x]
        if not nz:
            continue
        p = nz[-1]
        inv = 1 / r[p]
        r = [x * inv for x in r]
        rows = [(q, [x - qr[p] * y for x, y in zip(qr, r)]) for q, qr in rows]
        rows.append((p, r))
    out = []
    for v in vectors:
        r = [Fraction(x) for x in v]
        for p, pr in rows:
            if r[p]:
                c = r[p]
                r = [x - c * y for x, y in zip(r, pr)]
        out.append(_int_row(r))
    return out


# ---------------------------------------------------------------------------
# matrix level


def remove_redundant_rows(d: int, ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]] = ()) -> list[Vector]:
    """Drop inequalities implied by the remaining ones plus the equalities.

    Rows are deduplicated by primitive form first and then examined in
    order; each survivor is irredundant with respect to the final set.
    """
    seen: dict[Vector, None] = {}
    for r in ineqs:
        r = _int_row(r)
        if any(r):
            seen.setdefault(r)
    rows = list(seen)
    eq_rows = [dict(enumerate(e)) for e in eqs]
    alive = [True] * len(rows)
    for i, r in enumerate(rows):
        others = [dict(enumerate(rows[j])) for j in range(len(rows)) if j != i and alive[j]]
        ok, *_ = MatrixLP(d, others, eq_rows).implied(dict(enumerate(r)))
        if ok:
            alive[i] = False
    return [r for r, a in zip(rows, alive) if a]


def fm_matrix(d: int, ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], drop: Iterable[int],
              prune: bool = True) -> tuple[list[Vector], list[Vector]]:
    """Fourier-Motzkin elimination of coordinates ``drop``.

    Returns ``(ineqs, eqs)`` still indexed over all d coordinates, with the
    dropped ones zero.  An equality involving the coordinate is used to
    substitute it out; otherwise positive/negative pairs are combined.
    Redundant rows are pruned by LP after each step when ``prune`` is set.
    """
    A = [_int_row(r) for r in ineqs]
    E = [_int_row(r) for r in eqs]
    todo = sorted(set(drop))

    def cost(c):
        p = sum(1 for r in A if r[c] > 0)
        n = sum(1 for r in A if r[c] < 0)
        return (0 if any(e[c] for e in E) else 1, p * n - p - n, c)

    while todo:
        c = min(todo, key=cost)
        todo.remove(c)
        e0 = next((e for e in E if e[c]), None)
        if e0 is not None:
            ec = e0[c]
            sg = 1 if ec > 0 else -1
            # |ec| r - sign(ec) r_c e0 keeps the direction of each inequality
            A = [_prim([abs(ec) * x - sg * r[c] * y for x, y in zip(r, e0)]) if r[c] else r for r in A]
            E = [_prim([ec * x - r[c] * y for x, y in zip(r, e0)]) if r[c] else r for r in E if r is not e0]
        else:
            Z = [r for r in A if r[c] == 0]
            P = [r for r in A if r[c] > 0]
            N = [r for r in A if r[c] < 0]
            A = Z + [_prim([-n[c] * x + p[c] * y for x, y in zip(p, n)]) for p in P for n in N]
        A = [r for r in A if any(r)]
        E = [r for r in E if any(r)]
        if prune:
            A = remove_redundant_rows(d, A, E)
        else:
            A = list(dict.fromkeys(A))
    return A, E


@dataclass
class CHMResult:
    facets: list[Vector]
    equalities: list[Vector]
    rays: list[Vector]
    certificates: dict[Vector, tuple] = field(default_factory=dict)
    lp_calls: int = 0


class StepBudgetExceeded(RuntimeError):
    pass


def chm(d: int, oracle: Callable[[Vector], tuple[bool, object]], warm_start: Iterable[Sequence[int]] = (),
        max_steps: int | None = None, on_step: Callable[[str, int, int], None] | None = None) -> CHMResult:
    """Convex hull method on an abstract projection.

    ``oracle(f)`` decides whether ``f . y >= 0`` holds on the projected cone
    and returns ``(True, proof)`` or ``(False, point)`` with a projected
    point violating f.  The hull of the points found so far is maintained as
    a double description of its functional cone: extreme rays of that cone
    are the hull's facets and its lineality space holds the hull's equations.
    Every facet is only accepted once the oracle has proven it.
    """
    dd = DoubleDescription(d)
    points: list[Vector] = []
    point_set: set[Vector] = set()
    proofs: dict[Vector, object] = {}
    equations: set[Vector] = set()
    calls = 0

    def add_point(p):
        p = _prim(tuple(p))
        if not any(p) or p in point_set:
            return
        point_set.add(p)
        points.append(p)
        dd.add(p)

    for p in warm_start:
        add_point(p)

    while True:
        if max_steps is not None and calls > max_steps:
            raise StepBudgetExceeded(f"CHM exceeded {max_steps} LP calls")
        progress = False
        for l in list(dd.lin):
            if l in equations:
                continue
            for f in (l, tuple(-x for x in l)):
                ok, res = oracle(f)
                calls += 1
                if not ok:
                    add_point(res)
                    progress = True
                    break
            else:
                equations.add(l)
                continue
            break
        if progress:
            continue
        pending = [r for r in dd.rays if r not in proofs]
        if not pending:
            break
        # smallest support first keeps runs deterministic and tends to find points early
        f = min(pending, key=lambda r: (sum(1 for x in r if x), r))
        ok, res = oracle(f)
        calls += 1
        if ok:
            proofs[f] = res
        else:
            add_point(res)
        if on_step:
            on_step("chm", len(dd.rays), len(points))
        if calls % 25 == 0:
            log.info("chm: %d oracle calls, %d points, %d hull facets (%d proven)",
                     calls, len(points), len(dd.rays), len(proofs))
    lin = dd.equalities()
    facets = sorted(set(_reduce_mod(dd.rays, lin)))
    if lin:
        # facets were proven in raw form; reduced representatives need their own proofs
        certs = {}
        for f in facets:
            ok, res = oracle(f)
            calls += 1
            if not ok:
                raise AssertionError("reduced facet is not valid on the projection")
            certs[f] = res
    else:
        certs = {r: proofs[r] for r in dd.rays}
    eq_basis = _echelon_int(lin)
    rank_needed = d - len(eq_basis) - 1
    rays = []
    for p in points:
        tight = [f for f in facets if _dot(f, p) == 0]
        if _rank(tight + eq_basis) == len(eq_basis) + rank_needed:
            rays.append(p)
    rays = sorted(set(rays))
    return CHMResult(facets, eq_basis, rays, certs, calls)


def _echelon_int(vectors: Sequence[Vector]) -> list[Vector]:
    """Canonical integer basis of span(vectors): reduced echelon, pivots at largest index."""
    rows: list[tuple[int, list[Fraction]]] = []
    for b in vectors:
        r = [Fraction(x) for x in b]
        for p, pr in rows:
            if r[p]:
                c = r[p]
                r = [x - c * y for x, y in zip(r, pr)]
        nz = [i for i, x in enumerate(r) if x]
        if not nz:
            continue
        p = nz[-1]
        inv = 1 / r[p]
        r = [x * inv for x in r]
        rows = [(q, [x - qr[p] * y for x, y in zip(qr, r)]) for q, qr in rows]
        rows.append((p, r))
    rows.sort()
    return [_int_row(r) for _, r in rows]


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    return len(_echelon_int([tuple(v) for v in vectors]))


def matrix_oracle(d_full: int, ineqs, eqs, keep: Sequence[int]):
    """CHM oracle for the projection of ``{ineqs >= 0, eqs = 0}`` onto ``keep`` coordinates."""
    lp = MatrixLP(d_full, [dict(enumerate(r)) for r in ineqs], [dict(enumerate(e)) for e in eqs])

    def oracle(f):
        ok, a, b, _ = lp.implied({keep[i]: v for i, v in enumerate(f) if v})
        if ok:
            return True, (a, b)
        return False, tuple(a[k] for k in keep)

    return oracle


def chm_matrix(d_full: int, ineqs, eqs, keep: Sequence[int], **kw) -> CHMResult:
    return chm(len(keep), matrix_oracle(d_full, ineqs, eqs, list(keep)), **kw)


# ---------------------------------------------------------------------------
# cone level


def _rows(forms: Iterable[LinForm], d: int) -> list[Vector]:
    out = []
    for f in forms:
        v = [0] * d
        for m, c in canonicalize(f).terms:
            v[m - 1] = int(c)
        out.append(tuple(v))
    return out


def _form(n: int, row: Sequence[int], coords: Sequence[int], relation=GE) -> LinForm:
    return canonicalize(LinForm.from_coeffs(n, {coords[i]: v for i, v in enumerate(row) if v}, relation))


def dd_rays(cone: Cone) -> list[EntVector]:
    """Extreme rays of a pointed cone by incremental double description.

    Equalities are inserted first, then inequalities by increasing support
    size, ties in bitmask order.
    """
    d = cone.dim
    dd = DoubleDescription(d)
    for r in _rows(cone.eqs, d):
        dd.add(r, equality=True)
    order = sorted(cone.ineqs, key=lambda f: (len(f.terms), [m for m, _ in f.terms]))
    for r in _rows(order, d):
        dd.add(r)
    if dd.lin:
        raise ValueError(f"cone is not pointed (lineality dimension {len(dd.lin)})")
    return [EntVector.from_dense(cone.n, r) for r in sorted(dd.rays)]


def remove_redundant(ineqs: Sequence[LinForm], eqs: Sequence[LinForm] = ()) -> list[LinForm]:
    """Irredundant subset with the same solution set (first occurrences kept)."""
    forms = list(ineqs) + list(eqs)
    if not forms:
        return []
    n = max(f.n for f in forms)
    d = (1 << n) - 1
    rows = remove_redundant_rows(d, _rows([f.lift(n) for f in ineqs], d), _rows([f.lift(n) for f in eqs], d))
    return [_form(n, r, list(range(1, d + 1))) for r in rows]


def fm_eliminate(cone: Cone, drop: Iterable[int]) -> Cone:
    """Project out the coordinates (masks) in ``drop`` by Fourier-Motzkin.

    If every dropped mask meets variables outside some prefix {1..m} and
    all coordinates of P({1..m}) are kept, the result is a cone over m
    variables; otherwise it stays over cone.n variables with the dropped
    coordinates absent.
    """
    drop = set(drop)
    if any(not 0 < m < (1 << cone.n) for m in drop):
        raise ValueError("drop set contains an invalid coordinate")
    if len(drop) >= cone.dim:
        raise ValueError("nothing would remain after elimination")
    d = cone.dim
    A, E = fm_matrix(d, _rows(cone.ineqs, d), _rows(cone.eqs, d), [m - 1 for m in drop])
    kept = [m for m in range(1, d + 1) if m not in drop]
    n_out = cone.n
    for m in range(1, cone.n):
        if set(kept) == set(range(1, 1 << m)):
            n_out = m
    coords = list(range(1, d + 1))
    ineqs = sorted({_form(n_out, r[: (1 << n_out) - 1], coords) for r in A}, key=lambda f: f.dense())
    eqs = sorted({_form(n_out, r[: (1 << n_out) - 1], coords, EQ) for r in E}, key=lambda f: f.dense())
    return Cone(n_out, tuple(f for f in ineqs if not f.is_zero()), tuple(f for f in eqs if not f.is_zero()))


@dataclass
class Projection:
    cone: Cone  # facets, equations and extreme rays of the projected cone
    keep_vars: tuple[int, ...]
    certificates: dict[LinForm, Certificate]
    lp_calls: int


def chm_project(cone: Cone, keep_vars: Iterable[int] | int, warm_start: Iterable[EntVector] = (),
                max_steps: int | None = None, certify_rays: bool = False, on_step=None) -> Projection:
    """Project ``cone`` onto P(M) for a variable set M by the convex hull method.

    ``keep_vars`` is M (or an int m meaning {1..m}); the result is a cone
    over |M| variables, with M's variables renumbered 1..|M| in order.
    Every facet comes with the certificate proving it from ``cone``.
    """
    if isinstance(keep_vars, int):
        keep_vars = range(1, keep_vars + 1)
    M = tuple(sorted(set(keep_vars)))
    if not M or any(not 1 <= v <= cone.n for v in M):
        raise ValueError(f"keep set {M} is not a nonempty subset of 1..{cone.n}")
    m = len(M)
    rename = {v: i + 1 for i, v in enumerate(M)}
    back = {i + 1: v for i, v in enumerate(M)}
    keep_masks = [map_mask(s, back) for s in range(1, 1 << m)]
    lp = ConeLP(cone)

    def oracle(f):
        target = LinForm.from_coeffs(cone.n, {keep_masks[i]: v for i, v in enumerate(f) if v})
        inf = lp.infer(target)
        if inf.implied:
            return True, inf.cert
        w = dict(inf.witness.values)
        return False, tuple(int(w.get(k, 0)) for k in keep_masks)

    warm = []
    for v in warm_start:
        if v.n != m:
            raise ValueError("warm-start ray has the wrong number of variables")
        if M == tuple(range(1, m + 1)) and not cone_point_in_projection(cone, m, v):
            raise ValueError(f"warm-start ray {v.to_record()} is outside the projection")
        warm.append(tuple(int(x) for x in primitive(v.dense())))
    res = chm(len(keep_masks), oracle, warm, max_steps=max_steps, on_step=on_step)
    coords = list(range(1, 1 << m))
    facets = [_form(m, r, coords) for r in res.facets]
    eqs = [_form(m, r, coords, EQ) for r in res.equalities]
    rays = [EntVector.from_dense(m, r) for r in res.rays]
    if certify_rays:
        if M != tuple(range(1, m + 1)):
            raise ValueError("ray certification needs M = {1..m}")
        for r in rays:
            if not cone_point_in_projection(cone, m, r):
                raise AssertionError(f"CHM ray {r.to_record()} is not in the projection")
    certs = {}
    for r, f in zip(res.facets, facets):
        certs[f] = res.certificates[r]
    out = Cone(m, tuple(facets), tuple(eqs), tuple(rays))
    return Projection(out, M, certs, res.lp_calls)
