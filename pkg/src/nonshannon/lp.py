"""Exact rational linear programming over homogeneous cones.

Everything reduces to one primitive, :func:`nonneg_solution`: decide whether
``M w = b`` has a solution ``w >= 0`` by a phase-one simplex with Bland's
rule on exact rationals.  A feasible outcome yields the solution, an
infeasible one yields a Farkas vector ``p`` with ``p.M <= 0`` and
``p.b > 0``.  Both are checked exactly before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from gmpy2 import mpq

from .entropy_space import EQ, GE, EntVector, LinForm, evaluate, format_fraction, to_fraction

_ZERO = mpq(0)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass
class _Result:
    feasible: bool
    solution: dict[int, Fraction] | None = None
    farkas: list[Fraction] | None = None
    pivots: int = 0


class Simplex:
    """Phase-one tableau over sparse rows.

    ``columns[j]`` is a sparse column ``{row: value}``; ``rhs`` is dense.
    One instance solves one problem; it owns its mutable tableau.
    """

    STALL = 30

    def __init__(self, columns: Sequence[Mapping[int, object]], rhs: Sequence, max_pivots: int | None = None):
        self.ncols = len(columns)
        self.nrows = len(rhs)
        self.max_pivots = max_pivots
        self.sign = [1 if to_fraction(b) >= 0 else -1 for b in rhs]
        rows: list[dict[int, mpq]] = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    if not 0 <= i < self.nrows:
                        raise ValueError(f"row index {i} out of range")
                    rows[i][j] = mpq(v) if self.sign[i] > 0 else -mpq(v)
        for i in range(self.nrows):
            rows[i][self.ncols + i] = mpq(1)
        self.rows = rows
        self.rhs = [abs(mpq(to_fraction(b))) for b in rhs]
        self.basis = [self.ncols + i for i in range(self.nrows)]
        cost: dict[int, mpq] = {}
        for row in rows:
            for j, v in row.items():
                if j < self.ncols:
                    cost[j] = cost.get(j, _ZERO) - v
        self.cost = {j: v for j, v in cost.items() if v}
        self.value = sum(self.rhs, _ZERO)
        # column -> rows holding a nonzero, kept in sync by _pivot
        self.weights: dict[int, float] = {}
        self.colrows: dict[int, set[int]] = {}
        for i, row in enumerate(rows):
            for j in row:
                self.colrows.setdefault(j, set()).add(i)

    def _entering(self, bland: bool) -> int | None:
        best = None
        if bland:
            for j, v in self.cost.items():
                if v < 0 and (best is None or j < best):
                    best = j
            return best
        # Devex pricing: floats only steer the choice, arithmetic stays exact
        w = self.weights
        score = 0.0
        for j, v in self.cost.items():
            if v < 0:
                fv = float(v)
                sc = fv * fv / w.get(j, 1.0)
                if best is None or sc > score or (sc == score and j < best):
                    best, score = j, sc
        return best

    def _leaving(self, q: int) -> int | None:
        best_row = None
        best_ratio = None
        for i in self.colrows.get(q, ()):
            a = self.rows[i][q]
            if a > 0:
                ratio = self.rhs[i] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best_row])
                ):
                    best_row, best_ratio = i, ratio
        return best_row

    def _pivot(self, r: int, q: int) -> None:
        rows, colrows = self.rows, self.colrows
        prow = rows[r]
        piv = prow[q]
        if piv != 1:
            inv = 1 / piv
            for k in prow:
                prow[k] *= inv
            self.rhs[r] *= inv
        prhs = self.rhs[r]
        pitems = list(prow.items())
        for i in list(colrows[q]):
            if i == r:
                continue
            row = rows[i]
            f = row[q]
            for k, v in pitems:
                if k in row:
                    nv = row[k] - f * v
                    if nv:
                        row[k] = nv
                    else:
                        del row[k]
                        colrows[k].discard(i)
                else:
                    row[k] = -f * v
                    colrows.setdefault(k, set()).add(i)
            if prhs:
                self.rhs[i] -= f * prhs
        f = self.cost.get(q)
        if f:
            cost = self.cost
            for k, v in pitems:
                nv = cost.get(k, _ZERO) - f * v
                if nv:
                    cost[k] = nv
                else:
                    cost.pop(k, None)
            self.value += f * prhs
        w = self.weights
        wq = w.get(q, 1.0)
        fp = float(piv)
        for k, v in pitems:
            if k != q:
                fv = float(v)
                nw = fv * fv * wq
                if nw > w.get(k, 1.0):
                    w[k] = nw
        w[self.basis[r]] = max(wq / (fp * fp), 1.0)
        if wq > 1e30:  # restart the reference framework before floats overflow
            w.clear()
        self.basis[r] = q

    def run(self) -> _Result:
        pivots = 0
        stall = 0
        while self.value > 0:
            # Devex pricing; Bland's rule takes over on a degenerate stall
            # and stays until the objective moves, which rules out cycling.
            q = self._entering(bland=stall >= self.STALL)
            if q is None:
                break
            r = self._leaving(q)
            if r is None:  # phase one is bounded below by 0
                raise AssertionError("unbounded phase-one problem")
            stall = stall + 1 if self.rhs[r] == 0 else 0
            self._pivot(r, q)
            pivots += 1
            if self.max_pivots is not None and pivots > self.max_pivots:
                raise TimeoutError(f"pivot budget {self.max_pivots} exceeded")
        if self.value == 0:
            sol = {}
            for i, j in enumerate(self.basis):
                if j < self.ncols and self.rhs[i]:
                    sol[j] = _frac(self.rhs[i])
            return _Result(True, solution=sol, pivots=pivots)
        # duals of the phase-one problem: y_i = 1 - reduced cost of artificial i
        farkas = []
        for i in range(self.nrows):
            y = 1 - self.cost.get(self.ncols + i, _ZERO)
            farkas.append(_frac(y) * self.sign[i])
        return _Result(False, farkas=farkas, pivots=pivots)


def nonneg_solution(columns, rhs, max_pivots: int | None = None) -> _Result:
    """Solve ``sum_j w_j columns[j] = rhs`` with ``w >= 0`` exactly.

    Returns a result with ``solution`` (sparse nonnegative w) when feasible,
    otherwise ``farkas`` with ``p.columns[j] <= 0`` for all j and ``p.rhs > 0``.
    """
    res = Simplex(columns, rhs, max_pivots).run()
    if res.feasible:
        acc = [Fraction(0)] * len(rhs)
        for j, w in res.solution.items():
            if w < 0:
                raise AssertionError("negative component in simplex solution")
            for i, v in columns[j].items():
                acc[i] += w * to_fraction(v)
        if acc != [to_fraction(b) for b in rhs]:
            raise AssertionError("simplex solution does not reproduce the right-hand side")
    else:
        p = res.farkas
        for col in columns:
            if sum((p[i] * to_fraction(v) for i, v in col.items()), Fraction(0)) > 0:
                raise AssertionError("Farkas vector violates a column")
        if sum((pi * to_fraction(b) for pi, b in zip(p, rhs)), Fraction(0)) <= 0:
            raise AssertionError("Farkas vector does not separate the right-hand side")
    return res


def primitive(values: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers with the same direction."""
    den = lcm(*(Fraction(v).denominator for v in values)) if values else 1
    ints = [int(Fraction(v) * den) for v in values]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


# ---------------------------------------------------------------------------
# cone-level API


@dataclass(frozen=True)
class Certificate:
    """Multipliers proving ``target`` from a cone's constraints.

    ``sum ineq_multipliers[i] * ineqs[i] + sum eq_multipliers[j] * eqs[j] == target``
    with every inequality multiplier nonnegative.
    """

    ineq_multipliers: Mapping[int, Fraction]
    eq_multipliers: Mapping[int, Fraction]
    target: LinForm

    def to_record(self) -> dict:
        return {
            "ineq_multipliers": {str(k): format_fraction(v) for k, v in sorted(self.ineq_multipliers.items())},
            "eq_multipliers": {str(k): format_fraction(v) for k, v in sorted(self.eq_multipliers.items())},
            "target": self.target.to_record(),
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "Certificate":
        return cls(
            {int(k): to_fraction(v) for k, v in rec.get("ineq_multipliers", {}).items()},
            {int(k): to_fraction(v) for k, v in rec.get("eq_multipliers", {}).items()},
            LinForm.from_record(rec["target"]),
        )


@dataclass(frozen=True)
class Inference:
    implied: bool
    cert: Certificate | None = None
    witness: EntVector | None = None
    pivots: int = field(default=0, compare=False)


class _EqualityReduction:
    """Reduced row echelon form of a cone's equalities.

    Each equality solves for one pivot coordinate (its largest mask); vectors
    reduced by :meth:`reduce` vanish on pivot coordinates.  ``trans[p]``
    records which combination of the original equalities produced pivot row p,
    so eliminated multiples map back to free equality multipliers.
    """

    def __init__(self, dim: int, eqs: Sequence[Mapping[int, Fraction]]):
        self.dim = dim
        rows: dict[int, dict[int, Fraction]] = {}
        trans: dict[int, dict[int, Fraction]] = {}
        for idx, eq in enumerate(eqs):
            row = {k: Fraction(v) for k, v in eq.items() if v}
            tr = {idx: Fraction(1)}
            for p in list(rows):
                c = row.get(p)
                if c:
                    _axpy(row, -c, rows[p])
                    _axpy(tr, -c, trans[p])
            if not row:
                continue
            p = max(row)
            inv = 1 / row[p]
            row = {k: v * inv for k, v in row.items()}
            tr = {k: v * inv for k, v in tr.items()}
            for q in rows:
                c = rows[q].get(p)
                if c:
                    _axpy(rows[q], -c, row)
                    _axpy(trans[q], -c, tr)
            rows[p] = row
            trans[p] = tr
        self.rows = rows
        self.trans = trans
        self.free = [k for k in range(dim) if k not in rows]
        self.position = {k: i for i, k in enumerate(self.free)}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out = {k: Fraction(v) for k, v in vec.items() if v}
        for p, row in self.rows.items():
            c = out.get(p)
            if c:
                _axpy(out, -c, row)
        return out

    def lift_point(self, free_values: Sequence[Fraction]) -> list[Fraction]:
        """Complete a point given on free coordinates so every equality holds."""
        x = [Fraction(0)] * self.dim
        for k, v in zip(self.free, free_values):
            x[k] = v
        for p, row in self.rows.items():
            x[p] = -sum((c * x[k] for k, c in row.items() if k != p), Fraction(0))
        return x

    def multipliers(self, residual: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Equality multipliers z with sum z_j eq_j == residual (residual in their span)."""
        z: dict[int, Fraction] = {}
        for p, tr in self.trans.items():
            c = residual.get(p)
            if c:
                _axpy(z, c, tr)
        return z


def _axpy(y: dict, a, x: Mapping) -> None:
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class MatrixLP:
    """Implication checks against ``ineqs . x >= 0, eqs . x = 0`` in R^dim.

    Rows are sparse ``{coordinate: value}`` maps.  Equalities are eliminated
    once up front; their multipliers are recovered exactly per query.
    """

    def __init__(self, dim: int, ineqs: Sequence[Mapping[int, object]], eqs: Sequence[Mapping[int, object]] = ()):
        self.dim = dim
        self.ineqs = [{k: to_fraction(v) for k, v in r.items() if v} for r in ineqs]
        self.eqs = [{k: to_fraction(v) for k, v in r.items() if v} for r in eqs]
        for r in self.ineqs + self.eqs:
            if any(not 0 <= k < dim for k in r):
                raise ValueError("constraint references a coordinate outside the space")
        self.red = _EqualityReduction(dim, self.eqs)
        pos = self.red.position
        self.columns = [{pos[k]: v for k, v in self.red.reduce(r).items()} for r in self.ineqs]

    def implied(self, target: Mapping[int, object], max_pivots: int | None = None):
        """``(True, ineq_mult, eq_mult, pivots)`` or ``(False, witness, None, pivots)``.

        The witness is a primitive integer point satisfying every constraint
        with ``target . x < 0``.
        """
        t = {k: to_fraction(v) for k, v in target.items() if v}
        tr = self.red.reduce(t)
        rhs = [Fraction(0)] * len(self.red.free)
        for k, v in tr.items():
            rhs[self.red.position[k]] = v
        res = nonneg_solution(self.columns, rhs, max_pivots)
        if res.feasible:
            ineq_m = dict(sorted(res.solution.items()))
            resid = dict(t)
            for k, y in ineq_m.items():
                _axpy(resid, -y, self.ineqs[k])
            eq_m = dict(sorted(self.red.multipliers(resid).items()))
            return True, ineq_m, eq_m, res.pivots
        x = primitive(self.red.lift_point([-p for p in res.farkas]))
        return False, x, None, res.pivots


class ConeLP:
    """Reusable LP front end for one cone.

    Instances are not shared between threads; each query builds a private
    tableau.
    """

    def __init__(self, cone):
        self.cone = cone
        self.dim = (1 << cone.n) - 1
        self.lp = MatrixLP(
            self.dim,
            [{m - 1: c for m, c in f.terms} for f in cone.ineqs],
            [{m - 1: c for m, c in f.terms} for f in cone.eqs],
        )

    def infer(self, target: LinForm, max_pivots: int | None = None) -> "Inference":
        cone = self.cone
        if target.n != cone.n:
            raise ValueError(f"dimension mismatch: target over {target.n} variables, cone over {cone.n}")
        if target.relation != GE:
            raise ValueError("infer takes a >= target; split equalities into two inequalities")
        ok, a, b, pivots = self.lp.implied({m - 1: c for m, c in target.terms}, max_pivots)
        if ok:
            cert = Certificate(a, b, target)
            if not check_certificate(cone, cert):
                raise AssertionError("assembled certificate does not reproduce the target")
            return Inference(True, cert=cert, pivots=pivots)
        witness = EntVector.from_values(cone.n, {i + 1: a[i] for i in range(self.dim)})
        if not check_witness(cone, target, witness):
            raise AssertionError("Farkas witness is not a violating point of the cone")
        return Inference(False, witness=witness, pivots=pivots)


def infer(cone, target: LinForm, max_pivots: int | None = None) -> Inference:
    """Decide whether ``target >= 0`` follows from the cone's constraints.

    Returns the Farkas multipliers when it does, otherwise a primitive
    integer point of the cone on which ``target`` is negative.  Use
    :class:`ConeLP` directly to amortize setup over many targets.
    """
    return ConeLP(cone).infer(target, max_pivots)


def check_certificate(cone, cert: Certificate) -> bool:
    """Exact re-multiplication; no LP involved."""
    ni, ne = len(cone.ineqs), len(cone.eqs)
    for k in cert.ineq_multipliers:
        if not 0 <= k < ni:
            raise IndexError(f"inequality index {k} out of range")
    for k in cert.eq_multipliers:
        if not 0 <= k < ne:
            raise IndexError(f"equality index {k} out of range")
    if cert.target.n != cone.n:
        return False
    if any(v < 0 for v in cert.ineq_multipliers.values()):
        return False
    acc: dict[int, Fraction] = {}
    for k, y in cert.ineq_multipliers.items():
        for m, c in cone.ineqs[k].terms:
            acc[m] = acc.get(m, Fraction(0)) + y * c
    for k, z in cert.eq_multipliers.items():
        for m, c in cone.eqs[k].terms:
            acc[m] = acc.get(m, Fraction(0)) + z * c
    acc = {m: v for m, v in acc.items() if v}
    return acc == cert.target.coeffs


def check_witness(cone, target: LinForm, witness: EntVector) -> bool:
    return cone.contains(witness) and evaluate(target, witness) < 0


@dataclass(frozen=True)
class LPResult:
    status: str  # "bounded-at-zero" | "unbounded"
    cert: Certificate | None = None
    ray: EntVector | None = None


def solve(objective: LinForm, cone, sense: str = "min", max_pivots: int | None = None) -> LPResult:
    """Optimize a linear objective over a cone.

    A homogeneous LP either attains 0 or is unbounded.  ``min`` is bounded
    iff the objective is implied by the cone; ``max`` iff its negation is.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    obj = objective.with_relation(GE)
    if sense == "max":
        obj = obj.negate()
    inf = infer(cone, obj, max_pivots)
    if inf.implied:
        return LPResult("bounded-at-zero", cert=inf.cert)
    return LPResult("unbounded", ray=inf.witness)


def point_in_projection(A1, A2, B, x1, E1=(), E2=(), F=None) -> bool:
    """Is ``x1`` the first block of some point with ``A1 x1 + A2 x2 >= B``?

    Optional equality rows ``E1 x1 + E2 x2 = F`` get free multipliers.
    Decided by the LP ``max (B - A1 x1).y  s.t.  A2^T y = 0, y >= 0``, which
    is homogeneous, so its value is 0 or unbounded; x1 is in the projection
    iff no y with positive objective exists.
    """
    A1 = [[to_fraction(v) for v in row] for row in A1]
    A2 = [[to_fraction(v) for v in row] for row in A2]
    E1 = [[to_fraction(v) for v in row] for row in E1]
    E2 = [[to_fraction(v) for v in row] for row in E2]
    B = [to_fraction(v) for v in B] if B is not None else [Fraction(0)] * len(A1)
    F = [to_fraction(v) for v in F] if F is not None else [Fraction(0)] * len(E1)
    x1 = [to_fraction(v) for v in x1]
    if len(A1) != len(A2) or len(B) != len(A1) or len(E1) != len(E2) or len(F) != len(E1):
        raise ValueError("constraint blocks are not conformable")
    rows = A1 + E1
    n1 = len(x1)
    if any(len(r) != n1 for r in rows):
        raise ValueError("x1 does not match the width of A1")
    n2 = len(A2[0]) if A2 else (len(E2[0]) if E2 else 0)
    if any(len(r) != n2 for r in A2 + E2):
        raise ValueError("A2 rows have inconsistent width")
    slack = [b - sum((a * x for a, x in zip(row, x1)), Fraction(0)) for row, b in zip(A1, B)]
    slack += [f - sum((a * x for a, x in zip(row, x1)), Fraction(0)) for row, f in zip(E1, F)]
    cols = []
    blocks = [(r, 1) for r in range(len(A2))] + [(len(A2) + r, 1) for r in range(len(E2))]
    blocks += [(len(A2) + r, -1) for r in range(len(E2))]
    for k, sgn in blocks:
        row2 = (A2 + E2)[k]
        col = {c: sgn * v for c, v in enumerate(row2) if v}
        if slack[k]:
            col[n2] = sgn * slack[k]
        cols.append(col)
    rhs = [Fraction(0)] * n2 + [Fraction(1)]
    res = nonneg_solution(cols, rhs)
    return not res.feasible


def cone_point_in_projection(cone, m: int, x1: EntVector) -> bool:
    """Membership of an m-variable point in the projection of ``cone`` onto P({1..m})."""
    if x1.n != m or m > cone.n:
        raise ValueError("dimension mismatch")
    keep = [c for c in range(1, 1 << cone.n) if c < (1 << m)]
    drop = [c for c in range(1, 1 << cone.n) if c >= (1 << m)]

    def split(forms):
        a1, a2 = [], []
        for f in forms:
            c = f.coeffs
            a1.append([c.get(k, 0) for k in keep])
            a2.append([c.get(k, 0) for k in drop])
        return a1, a2

    A1, A2 = split(cone.ineqs)
    E1, E2 = split(cone.eqs)
    return point_in_projection(A1, A2, None, x1.dense(), E1, E2, None)
