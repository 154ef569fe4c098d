"""Constructive core: primitive derivations, inverse covariant powers,
the universal derivations E^(p,q), the four basis families, the B-matrix
recursion, primitive decompositions and the equivariant-odd closure.

Inverse covariant derivatives are found by exact linear solves on a finite
candidate space: invariant numerator vectors are spanned by invariant
multiples of the gradient fields (the invariant derivation module is free
over the invariant ring on the gradients), over an even power of the first
orbit product as denominator.  Uniqueness in the invariant module makes the
solution exact and canonical; pole bounds escalate on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .coxeter import (ArrangementData, InvariantSystem, Multiplicity,
                      basic_invariants, cached_arrangement)
from .derivations import (Derivation, coordinate_field, covariant_derivative, euler,
                          group_action, partial_derivation)
from .linalg import Matrix, solve_affine, solve_over_fractions
from .poly import LinearForm, LogRational, Poly, form_product
from .scalars import Scalar
from . import verify as _verify


class SolverError(Exception):
    """Inverse covariant solve failed within the configured pole bounds."""


class EngineError(Exception):
    """Internal consistency failure (a constructed basis did not verify)."""


@dataclass
class PolePolicy:
    """Escalation policy for candidate denominators Q1^{N1} Q2^{N2}."""

    max_extra: int = 4

    def start(self, p: int, q: Optional[int]) -> Tuple[int, int]:
        n1 = max(0, -2 * p)
        n2 = 0 if q is None else max(0, -2 * q)
        return n1, n2


CASE_FRAMES = {1: "W", 2: "W1", 3: "W2", 4: "X"}


def case_multiplicity_pair(p: int, q: int, case: int) -> Tuple[int, int]:
    if case == 1:
        return 2 * p - 1, 2 * q - 1
    if case == 2:
        return 2 * p - 1, 2 * q
    if case == 3:
        return 2 * p, 2 * q - 1
    if case == 4:
        return 2 * p, 2 * q
    raise ValueError("case must be 1..4")


def pq_for_multiplicity(m1: int, m2: int) -> Tuple[int, int, int]:
    """(p, q, case) with (m1, m2) the case multiplicity at (p, q)."""
    if m1 % 2 != 0 and m2 % 2 != 0:
        return (m1 + 1) // 2, (m2 + 1) // 2, 1
    if m1 % 2 != 0:
        return (m1 + 1) // 2, m2 // 2, 2
    if m2 % 2 != 0:
        return m1 // 2, (m2 + 1) // 2, 3
    return m1 // 2, m2 // 2, 4


class EpqContext:
    """Arrangement with invariant systems, primitive derivations and caches."""

    def __init__(self, arr: ArrangementData, policy: Optional[PolePolicy] = None,
                 seeds: Optional[Sequence[Tuple[int, ...]]] = None):
        self.arr = arr
        self.policy = policy or PolePolicy()
        self.sys_w = basic_invariants(arr, "W", seeds=list(seeds) if seeds else None)
        self.sys_w1 = basic_invariants(arr, "W1")
        self.sys_w2 = basic_invariants(arr, "W2")
        self.h = self.sys_w.coxeter_number
        self.h1 = self.sys_w1.coxeter_number
        self.h2 = self.sys_w2.coxeter_number
        self._coord_fields: Dict[Tuple[str, int], Derivation] = {}
        self._epq: Dict[Tuple[int, int], Derivation] = {}
        self._grad_nabla: Dict[Tuple[str, int], Derivation] = {}
        self._inv_monomial_cache: Dict[Tuple[str, Tuple[int, ...]], Poly] = {}
        self.D = primitive_derivation(self, "W")
        self.D1 = primitive_derivation(self, "W1")
        self.D2 = primitive_derivation(self, "W2")
        if self.first_case:
            for w in arr.gens_W:
                if group_action(w, self.D1) != self.D1:
                    raise EngineError("orbit-1 primitive derivation is not W-invariant")

    @property
    def first_case(self) -> bool:
        """Families whose orbit-1 primitive derivation is W-invariant."""
        return self.arr.family in ("B", "F4")

    def system(self, tag: str) -> InvariantSystem:
        return {"W": self.sys_w, "W1": self.sys_w1, "W2": self.sys_w2}[tag]

    def coordinate_frame(self, tag: str, i: int) -> Derivation:
        key = (tag, i)
        d = self._coord_fields.get(key)
        if d is None:
            if tag == "X":
                d = partial_derivation(self.arr.rank, i)
            else:
                d = coordinate_field(self.system(tag), i)
            self._coord_fields[key] = d
        return d

    def invariant_monomial(self, tag: str, exps: Tuple[int, ...]) -> Poly:
        key = (tag, exps)
        p = self._inv_monomial_cache.get(key)
        if p is None:
            system = self.system(tag)
            p = Poly.const(self.arr.rank, 1)
            for inv, e in zip(system.invariants, exps):
                if e:
                    p = p * inv ** e
            self._inv_monomial_cache[key] = p
        return p

    def __repr__(self):
        return f"EpqContext({self.arr.family}, rank {self.arr.rank})"


_CONTEXT_CACHE: Dict[Tuple, EpqContext] = {}


def make_context(family: str, rank: Optional[int] = None, n: Optional[int] = None,
                 policy: Optional[PolePolicy] = None,
                 seeds: Optional[Sequence[Tuple[int, ...]]] = None) -> EpqContext:
    """Contexts are cached per configuration; they are immutable apart from
    monotone caches, so sharing across callers is safe."""
    arr = cached_arrangement(family, rank=rank, n=n)
    key = (id(arr), tuple(seeds) if seeds else None,
           policy.max_extra if policy else None)
    ctx = _CONTEXT_CACHE.get(key)
    if ctx is None:
        ctx = EpqContext(arr, policy=policy, seeds=seeds)
        _CONTEXT_CACHE[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# Primitive derivations
# ---------------------------------------------------------------------------

def primitive_derivation(ctx: EpqContext, which: str) -> Derivation:
    """Lowest-degree derivation of the chosen invariant ring.

    W: d/dP_l by the Jacobian solve.  W1 for B: sum (1/x_i) d/dx_i; for F4
    the top coordinate field of the W1 system.  Rank-2 families take
    D1 = Q2 D and D2 = Q1 D.
    """
    arr = ctx.arr
    rank = arr.rank
    if which == "W":
        return ctx.coordinate_frame("W", rank - 1)
    if arr.family == "B":
        if which == "W1":
            coeffs = []
            for i in range(rank):
                form = LinearForm([1 if k == i else 0 for k in range(rank)])
                coeffs.append(LogRational(Poly.const(rank, 1), {form: 1}))
            return Derivation(coeffs)
        return ctx.coordinate_frame("W2", rank - 1)
    if arr.family == "F4":
        return ctx.coordinate_frame("W1" if which == "W1" else "W2", rank - 1)
    # rank-2 families: multiply the primitive derivation by the other orbit
    D = ctx.coordinate_frame("W", rank - 1)
    other = ctx.arr.Q2 if which == "W1" else ctx.arr.Q1
    return D * other


# ---------------------------------------------------------------------------
# Forward and inverse covariant powers
# ---------------------------------------------------------------------------

def forward_power(ctx: EpqContext, delta: Derivation, k: int, theta: Derivation) -> Derivation:
    if k < 0:
        raise ValueError("forward power needs k >= 0")
    out = theta
    for _ in range(k):
        out = covariant_derivative(delta, out)
    return out


def _divisibility_rows(polys: List[Poly], form: LinearForm, k: int,
                       subst_cache: Dict) -> List[List[Scalar]]:
    """Rows asserting form^k divides every linear combination of the polys."""
    ncand = len(polys)
    rows: Dict[Tuple, List[Scalar]] = {}
    if form.is_coordinate():
        piv = form.pivot_index()
        for t, p in enumerate(polys):
            for e, cf in p.terms.items():
                if e[piv] < k:
                    row = rows.get(e)
                    if row is None:
                        row = [Fraction(0)] * ncand
                        rows[e] = row
                    row[t] = row[t] + cf
    else:
        from .verify import _adapted_matrix

        key = ("adapted", form)
        mat = subst_cache.get(key)
        if mat is None:
            mat = _adapted_matrix(form)
            subst_cache[key] = mat
        for t, p in enumerate(polys):
            img = p.substitute_matrix(mat)
            for e, cf in img.terms.items():
                if e[0] < k:
                    row = rows.get(e)
                    if row is None:
                        row = [Fraction(0)] * ncand
                        rows[e] = row
                    row[t] = row[t] + cf
    return [rows[key] for key in sorted(rows)]


def _equate_combination(cand_derivs: List[List[LogRational]],
                        target: Derivation) -> Tuple[List[List[Scalar]], List[Scalar]]:
    """Linear system: sum_t lambda_t cand[t] = target, componentwise."""
    ncand = len(cand_derivs)
    nvars = target.nvars
    rows: Dict[Tuple, List[Scalar]] = {}
    rhs: Dict[Tuple, Scalar] = {}
    for j in range(nvars):
        entries = [c[j] for c in cand_derivs] + [target.coeffs[j]]
        common: Dict[LinearForm, int] = {}
        for e in entries:
            for f, kk in e.den.items():
                common[f] = max(common.get(f, 0), kk)
        for t, e in enumerate(entries):
            extra = {f: kk - e.den.get(f, 0) for f, kk in common.items()}
            cleared = e.num * form_product(nvars, extra)
            for mono, cf in cleared.terms.items():
                key = (j, mono)
                if t == ncand:
                    rhs[key] = cf
                else:
                    row = rows.get(key)
                    if row is None:
                        row = [Fraction(0)] * ncand
                        rows[key] = row
                    row[t] = row[t] + cf
    keys = sorted(set(rows) | set(rhs))
    a = [rows.get(k, [Fraction(0)] * ncand) for k in keys]
    b = [rhs.get(k, Fraction(0)) for k in keys]
    return a, b


def _invariant_exponents(degrees: Sequence[int], total: int) -> List[Tuple[int, ...]]:
    if total < 0:
        return []
    if not degrees:
        return [()] if total == 0 else []
    out = []
    d0 = degrees[0]
    for e in range(total // d0 + 1):
        for rest in _invariant_exponents(degrees[1:], total - e * d0):
            out.append((e,) + rest)
    return out


def invert_covariant(ctx: EpqContext, delta_tag: str, zeta: Derivation,
                     target_pq: Tuple[int, Optional[int]],
                     pole_bounds: Optional[Tuple[int, int]] = None) -> Derivation:
    """The unique eta in the invariant module with nabla_delta eta = zeta.

    delta_tag "D" solves in D(A,-infinity)^W over denominators
    Q1^{N1} Q2^{N2}; "D1" solves in D(A_1,-infinity)^{W1} over Q1^{N1}.
    target_pq carries the universality bidegree of eta and seeds the pole
    bounds; escalation adds to them until the system is solvable.
    """
    if zeta.is_zero():
        return Derivation.zero(ctx.arr.rank)
    arr = ctx.arr
    rank = arr.rank
    if delta_tag == "D":
        system, delta, hh = ctx.sys_w, ctx.D, ctx.h
        membership_forms = arr.forms()
    elif delta_tag == "D1":
        system, delta, hh = ctx.sys_w1, ctx.D1, ctx.h1
        membership_forms = arr.orbit_forms(1)
    else:
        raise ValueError("delta_tag must be 'D' or 'D1'")
    zdeg = zeta.degree()
    if zdeg is None:
        raise ValueError("zeta must be homogeneous")
    target_deg = zdeg + hh
    n1, n2 = pole_bounds if pole_bounds is not None else ctx.policy.start(*target_pq)
    if delta_tag == "D1":
        n2 = 0
    subst_cache: Dict = {}
    last_error = None
    for extra in range(ctx.policy.max_extra + 1):
        m1 = -((n1 + 2 * extra) // -2)  # ceil to even denominators
        m2 = 0 if delta_tag == "D1" else -((n2 + 2 * extra) // -2)
        den: Dict[LinearForm, int] = {}
        for f in arr.orbit_forms(1):
            if m1:
                den[f] = 2 * m1
        if delta_tag == "D":
            for f in arr.orbit_forms(2):
                if m2:
                    den[f] = 2 * m2
        den_deg = sum(den.values())
        candidates: List[List[Poly]] = []
        for i in range(rank):
            d_i = system.degrees[i]
            fdeg = target_deg + den_deg - (d_i - 1)
            col = system.jacobian.column(i)
            for exps in _invariant_exponents(system.degrees, fdeg):
                f = ctx.invariant_monomial(system.group, exps)
                candidates.append([f * col[j] for j in range(rank)])
        if not candidates:
            last_error = "empty candidate space"
            continue
        rows: List[List[Scalar]] = []
        rhs: List[Scalar] = []
        for form in membership_forms:
            k_h = den.get(form, 0)
            if not k_h:
                continue
            norm = form.norm_sq()
            avec = form.coeffs
            normal_vals = []
            for cand in candidates:
                s = Poly.zero(rank)
                for i in range(rank):
                    if avec[i]:
                        s = s + cand[i] * avec[i]
                normal_vals.append(s)
            for j in range(rank):
                polys = [cand[j] * norm - normal_vals[t] * avec[j]
                         for t, cand in enumerate(candidates)]
                for row in _divisibility_rows(polys, form, k_h, subst_cache):
                    rows.append(row)
                    rhs.append(Fraction(0))
        cand_derivs = []
        for cand in candidates:
            lr = [LogRational(cand[j], den) for j in range(rank)]
            cand_derivs.append([delta.apply(c) for c in lr])
        a_rows, b_vals = _equate_combination(cand_derivs, zeta)
        rows.extend(a_rows)
        rhs.extend(b_vals)
        solved = solve_affine(rows, rhs)
        if solved is None:
            last_error = f"no solution at pole bounds ({2*m1}, {2*m2})"
            continue
        particular, null = solved
        if null:
            raise EngineError("inverse covariant solution is not unique")
        coeffs = []
        for j in range(rank):
            acc = Poly.zero(rank)
            for lam, cand in zip(particular, candidates):
                if lam:
                    acc = acc + cand[j] * lam
            coeffs.append(LogRational(acc, den))
        eta = Derivation(coeffs)
        if covariant_derivative(delta, eta) != zeta:
            raise EngineError("inverse covariant residual is nonzero")
        return eta
    raise SolverError(f"invert_covariant failed for {delta_tag}: {last_error}")


# ---------------------------------------------------------------------------
# The universal derivations E^(p,q)
# ---------------------------------------------------------------------------

def e_pq(ctx: EpqContext, p: int, q: int) -> Derivation:
    """E^(p,q) = nabla_D^{-q} nabla_{D1}^{q-p} E, cached over (p, q)."""
    if not ctx.first_case:
        raise ValueError("E^(p,q) requires a family with W-invariant D1")
    key = (p, q)
    cached = ctx._epq.get(key)
    if cached is not None:
        return cached
    if p == 0 and q == 0:
        val = euler(ctx.arr.rank)
    elif q > 0:
        val = invert_covariant(ctx, "D", e_pq(ctx, p - 1, q - 1), (p, q))
    elif q < 0:
        val = covariant_derivative(ctx.D, e_pq(ctx, p + 1, q + 1))
    elif p > 0:
        val = invert_covariant(ctx, "D1", e_pq(ctx, p - 1, 0), (p, None))
    else:
        val = covariant_derivative(ctx.D1, e_pq(ctx, p + 1, 0))
    expected = p * ctx.h1 + q * ctx.h2 + 1
    if val.degree() != expected:
        raise EngineError(f"deg E^({p},{q}) = {val.degree()}, expected {expected}")
    ctx._epq[key] = val
    return val


def nabla_frame(ctx: EpqContext, tag: str, zeta: Derivation) -> List[Derivation]:
    """The tuple nabla_{frame_i} zeta for the chosen coordinate frame."""
    rank = ctx.arr.rank
    partials = [Derivation([c.partial(k) for c in zeta.coeffs]) for k in range(rank)]
    if tag == "X":
        return partials
    out = []
    for i in range(rank):
        frame = ctx.coordinate_frame(tag, i)
        acc = Derivation.zero(rank)
        for k in range(rank):
            v = frame.coeffs[k]
            if v.is_zero():
                continue
            acc = acc + partials[k] * v
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Certificates and the four basis families
# ---------------------------------------------------------------------------

@dataclass
class BasisCertificate:
    family: str
    params: Dict
    multiplicity: Multiplicity
    case: str  # "1".."4", or "rank2"
    basis: List[Derivation]
    exponents: List[int]
    saito_c: Scalar
    invariance: List[List[str]]
    route: str
    seeds: Optional[List] = None

    def summary(self) -> str:
        return (f"{self.family}{self.params or ''} m={self.multiplicity} case {self.case}: "
                f"exponents {self.exponents}, c = {self.saito_c}")


def _certify(ctx: EpqContext, mult: Multiplicity, basis: List[Derivation],
             case: str, route: str) -> BasisCertificate:
    exps = []
    for theta in basis:
        d = theta.degree()
        if d is None:
            raise EngineError("basis element is not homogeneous")
        exps.append(d)
    order = sorted(range(len(basis)), key=lambda i: exps[i])
    basis = [basis[i] for i in order]
    exps = [exps[i] for i in order]
    c = _verify.saito_check(ctx.arr, mult, basis)
    if sum(exps) != mult.total():
        raise EngineError("exponent sum does not match the multiplicity total")
    flags = _verify.invariance_check(basis, ctx.arr.gens_W)
    return BasisCertificate(ctx.arr.family, dict(ctx.arr.params), mult, case, basis,
                            exps, c, flags, route, seeds=ctx.sys_w.seeds)


def theta_basis(ctx: EpqContext, p: int, q: int, case: int) -> BasisCertificate:
    """Free basis of D(A, m(case; p, q)) via covariant derivatives of E^(p,q)."""
    zeta = e_pq(ctx, p, q)
    tag = CASE_FRAMES[case]
    basis = nabla_frame(ctx, tag, zeta)
    m1, m2 = case_multiplicity_pair(p, q, case)
    mult = Multiplicity.from_pair(ctx.arr, m1, m2)
    cert = _certify(ctx, mult, basis, str(case), route="covariant")
    frame_degrees = {
        1: ctx.sys_w.degrees, 2: ctx.sys_w1.degrees, 3: ctx.sys_w2.degrees,
        4: [1] * ctx.arr.rank,
    }[case]
    predicted = sorted(p * ctx.h1 + q * ctx.h2 - d + 1 for d in frame_degrees)
    if cert.exponents != predicted:
        raise EngineError(f"exponents {cert.exponents} != predicted {predicted}")
    if case == 1:
        if any(f != "fixed" for flags in cert.invariance for f in flags):
            raise EngineError("odd-odd basis is not W-invariant")
    return cert


def equivariant_basis(ctx: EpqContext, m1: int, m2: int) -> BasisCertificate:
    """Basis for an equivariant multiplicity: four-case engine for B/F4,
    degree-by-degree oracle construction for the rank-2 families."""
    if ctx.first_case:
        p, q, case = pq_for_multiplicity(m1, m2)
        return theta_basis(ctx, p, q, case)
    return rank2_basis(ctx, Multiplicity.from_pair(ctx.arr, m1, m2))


# ---------------------------------------------------------------------------
# Rank-2 oracle construction
# ---------------------------------------------------------------------------

def rank2_basis(ctx: EpqContext, mult: Multiplicity,
                invariant: Optional[bool] = None) -> BasisCertificate:
    """Degree-ascending greedy basis for a rank-2 multiarrangement.

    Every rank-2 multiarrangement is free, so collecting elements that are
    independent over the polynomial ring until the Saito determinant matches
    always terminates.  For odd equivariant multiplicities the search is
    restricted to the W-fixed part, which then produces an invariant basis.
    """
    arr = ctx.arr
    if arr.rank != 2:
        raise ValueError("rank2_basis needs a rank-2 arrangement")
    if invariant is None:
        invariant = mult.is_equivariant() and mult.is_odd()
    total = mult.total()
    a, b = _verify._pole_exponents(arr, mult)
    d_min = -(a + b) * len(arr.orbit(1))
    selected: List[Derivation] = []
    sel_degrees: List[int] = []
    d = d_min
    cap = total - d_min + 2 * len(arr.hyperplanes) + 4
    while len(selected) < 2 and d <= cap:
        space = _verify.oracle_solution_space(arr, mult, d)
        if space.dim:
            vectors = space.vectors
            if invariant:
                vectors = _fixed_subspace(arr, space)
            if vectors:
                stack = []
                for theta, e in zip(selected, sel_degrees):
                    for mono in _verify._monomials_of_degree(2, d - e):
                        shifted = theta * Poly.monomial(2, mono)
                        stack.append(_space_coordinates(space, shifted))
                got = _independent_extension(stack, vectors)
                for vec in got:
                    if len(selected) < 2:
                        selected.append(space.derivation(vec))
                        sel_degrees.append(d)
        if len(selected) == 2 and sum(sel_degrees) != total:
            raise EngineError("rank-2 selection degrees do not match the total")
        d += 1
    if len(selected) != 2:
        raise SolverError(f"rank-2 search exhausted up to degree {cap}")
    return _certify(ctx, mult, selected, "rank2", route="oracle")


def _space_coordinates(space, theta: Derivation) -> List[Scalar]:
    nm = len(space.monomials)
    index = {m: t for t, m in enumerate(space.monomials)}
    out = [Fraction(0)] * (2 * nm)
    for j, c in enumerate(theta.coeffs):
        extra = {f: k - c.den.get(f, 0) for f, k in space.den.items()}
        if any(v < 0 for v in extra.values()):
            raise EngineError("shifted derivation leaves the oracle denominator")
        num = c.num * form_product(2, extra)
        for mono, cf in num.terms.items():
            out[j * nm + index[mono]] = cf
    return out


def _independent_extension(stack: List[List[Scalar]], vectors: List[List[Scalar]]):
    """Vectors extending the span of the stack, greedily and deterministically."""
    from .linalg import rref

    got = []
    cur = list(stack)
    rank0 = len(rref(cur)[1]) if cur else 0
    for v in vectors:
        trial = cur + [v]
        rank1 = len(rref(trial)[1])
        if rank1 > rank0:
            cur, rank0 = trial, rank1
            got.append(v)
    return got


def _fixed_subspace(arr: ArrangementData, space) -> List[List[Scalar]]:
    rows = []
    for gen_idx in range(len(arr.gens_W)):
        images = [_verify._action_on_numerators(arr, gen_idx, space, v)
                  for v in space.vectors]
        slots = len(space.vectors[0])
        for s in range(slots):
            row = [images[t][s] - space.vectors[t][s] for t in range(space.dim)]
            if any(row):
                rows.append(row)
    if not rows:
        return list(space.vectors)
    coords = _verify.rational_nullspace(rows, ncols=space.dim)
    out = []
    for lam in coords:
        vec = [Fraction(0)] * len(space.vectors[0])
        for l, v in zip(lam, space.vectors):
            if l:
                vec = [x + l * y for x, y in zip(vec, v)]
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# Recursion along the primitive direction
# ---------------------------------------------------------------------------

@dataclass
class RecursionStep:
    b_matrix: Matrix
    next_tuple: List[Derivation]


def recursion_step(ctx: EpqContext, theta_tuple: Sequence[Derivation]) -> RecursionStep:
    """One step of the primitive recursion.

    With Theta the current tuple, solves nabla_D(Theta G) = Theta B for B,
    checks that every entry of B is a polynomial annihilated by D, that the
    antidiagonal is constant with zero upper-left triangle and constant
    nonzero determinant, and returns Theta' = Theta G B^{-1}.
    """
    arr = ctx.arr
    rank = arr.rank
    G = ctx.sys_w.gram
    tg = []
    for i in range(rank):
        acc = Derivation.zero(rank)
        for j in range(rank):
            acc = acc + theta_tuple[j] * G[j, i]
        tg.append(acc)
    z = [covariant_derivative(ctx.D, t) for t in tg]
    theta_mat = Matrix([[theta_tuple[i].coeffs[k] for i in range(rank)] for k in range(rank)])
    z_mat = Matrix([[z[i].coeffs[k] for i in range(rank)] for k in range(rank)])
    b = solve_over_fractions(theta_mat, z_mat, forms=arr.forms())
    if b is None:
        raise EngineError("recursion tuple is dependent")
    b_polys = []
    for i in range(rank):
        row = []
        for j in range(rank):
            entry = b[i, j]
            if not entry.is_poly():
                raise EngineError("B-matrix entry is not polynomial")
            p = entry.as_poly()
            if not ctx.D.apply(p).is_zero():
                raise EngineError("B-matrix entry is not annihilated by D")
            if i + j + 2 < rank + 1 and not p.is_zero():
                raise EngineError("B-matrix zero pattern violated")
            if i + j + 2 == rank + 1 and not p.is_constant():
                raise EngineError("B-matrix antidiagonal is not constant")
            row.append(p)
        b_polys.append(row)
    b_poly_mat = Matrix(b_polys)
    from .linalg import bareiss_determinant

    detb = bareiss_determinant(b_polys)
    if not detb.is_constant() or not detb.constant_value():
        raise EngineError("det B is not a nonzero constant")
    # Theta' = Theta G B^{-1}: solve X B = Theta G, i.e. B^T X^T = (Theta G)^T
    tg_mat = Matrix([[tg[i].coeffs[k] for i in range(rank)] for k in range(rank)])
    xt = solve_over_fractions(b_poly_mat.transpose(), tg_mat.transpose(), forms=arr.forms())
    if xt is None:
        raise EngineError("B-matrix is singular")
    x = xt.transpose()
    next_tuple = [Derivation(x.column(i)) for i in range(rank)]
    return RecursionStep(Matrix(b_polys), next_tuple)


def recover_zeta(theta_tuple: Sequence[Derivation], system: InvariantSystem,
                 m: int) -> Derivation:
    """zeta with nabla_{dP_i} zeta = Theta_i, for homogeneous zeta of degree m.

    Uses E = sum d_i P_i dP_i and function-linearity of the connection:
    zeta = (1/m) sum d_i P_i Theta_i.
    """
    if m == 0:
        raise ValueError("cannot recover a degree-0 derivation")
    rank = system.arr.rank
    acc = Derivation.zero(rank)
    for d_i, p_i, t_i in zip(system.degrees, system.invariants, theta_tuple):
        acc = acc + t_i * (p_i * Fraction(d_i))
    return acc * Fraction(1, m)


# ---------------------------------------------------------------------------
# Primitive decomposition and the odd-equivariant closure
# ---------------------------------------------------------------------------

def primitive_decomposition(ctx: EpqContext, p: int, q: int, k_max: int
                            ) -> List[List[Derivation]]:
    """Blocks G^(p+k, q+k) for 0 <= k <= k_max, linked by nabla_D."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    blocks = []
    for k in range(k_max + 1):
        zeta = e_pq(ctx, p + k, q + k)
        blocks.append(nabla_frame(ctx, "W", zeta))
    for k in range(k_max):
        lower, upper = blocks[k], blocks[k + 1]
        for i in range(ctx.arr.rank):
            if covariant_derivative(ctx.D, upper[i]) != lower[i]:
                raise EngineError("nabla_D does not link adjacent blocks")
    return blocks


def m_star(arr: ArrangementData, mult: Multiplicity) -> Multiplicity:
    """Equivariant odd closure max_w(2 floor(m(wH)/2) + 1)."""
    return mult.star_closure()
