"""Independent verification: Saito checks, brute-force module dimensions,
Poincare series and invariance reports.

The graded-dimension oracle parametrizes candidate derivations over a fixed
denominator and solves the membership conditions as an exact linear system;
it never touches the connection machinery, so it cross-checks the
constructive engine from the outside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .coxeter import ArrangementData, InvariantSystem, Multiplicity
from .derivations import Derivation, group_action, membership_witness
from .linalg import Matrix, determinant, rational_nullspace, scalar_inverse
from .poly import LinearForm, LogRational, Poly, match_product_of_forms
from .scalars import Scalar

ORACLE_DEGREE_CAP = 60


class VerificationError(Exception):
    pass


# ---------------------------------------------------------------------------
# Saito criterion
# ---------------------------------------------------------------------------

def coefficient_matrix(basis: Sequence[Derivation]) -> Matrix:
    n = basis[0].nvars
    return Matrix([[theta.coeffs[j] for theta in basis] for j in range(n)])


def saito_check(arr: ArrangementData, mult: Multiplicity,
                basis: Sequence[Derivation]):
    """Saito scalar c with det(basis) = c * prod alpha_H^{m(H)}.

    Raises VerificationError when a basis element fails membership or the
    determinant does not match the prescribed form product.
    """
    if len(basis) != arr.rank:
        raise VerificationError(f"expected {arr.rank} derivations, got {len(basis)}")
    for k, theta in enumerate(basis):
        witness = membership_witness(theta, arr, mult)
        if witness is not None:
            reason, form = witness
            raise VerificationError(
                f"basis element {k} is not in D(A, m): {reason} along {form}")
    det = determinant(coefficient_matrix(basis))
    spec = {h.form: mult.of(h) for h in arr.hyperplanes}
    c = match_product_of_forms(det, spec)
    if c is None:
        raise VerificationError("Saito determinant does not match the form product")
    return c


# ---------------------------------------------------------------------------
# Brute-force graded oracle
# ---------------------------------------------------------------------------

@dataclass
class OracleSpace:
    """Degree slice of D(A, m): numerators over the fixed denominator."""

    arr: ArrangementData
    mult: Multiplicity
    degree: int
    den: Dict[LinearForm, int]
    monomials: List[Tuple[int, ...]]
    vectors: List[List[Scalar]]  # flat coordinates: component-major

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def derivation(self, vec: List[Scalar]) -> Derivation:
        n = self.arr.rank
        nm = len(self.monomials)
        coeffs = []
        for j in range(n):
            terms = {}
            for t, mono in enumerate(self.monomials):
                c = vec[j * nm + t]
                if c:
                    terms[mono] = c
            coeffs.append(LogRational(Poly(n, terms), self.den))
        return Derivation(coeffs)

    def basis_derivations(self) -> List[Derivation]:
        return [self.derivation(v) for v in self.vectors]


def _monomials_of_degree(nvars: int, d: int) -> List[Tuple[int, ...]]:
    if d < 0:
        return []
    if nvars == 1:
        return [(d,)]
    out = []
    for k in range(d + 1):
        for rest in _monomials_of_degree(nvars - 1, d - k):
            out.append((k,) + rest)
    return out


def _adapted_matrix(form: LinearForm):
    """Columns: a vector with alpha = 1, then a basis of ker(alpha)."""
    n = form.nvars
    piv = form.pivot_index()
    a = form.coeffs
    cols = []
    e = [Fraction(0)] * n
    e[piv] = 1 / a[piv]
    cols.append(e)
    for i in range(n):
        if i == piv:
            continue
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        v[piv] = -a[i] / a[piv]
        cols.append(v)
    return tuple(zip(*cols))  # rows of the matrix C with x = C y


def _monomial_image(arr: ArrangementData, cache_key, matrix, mono) -> Poly:
    cache = getattr(arr, "_subst_cache", None)
    if cache is None:
        cache = {}
        arr._subst_cache = cache
    key = (cache_key, mono)
    img = cache.get(key)
    if img is None:
        img = Poly.monomial(arr.rank, mono).substitute_matrix(matrix)
        cache[key] = img
    return img


def _pole_exponents(arr: ArrangementData, mult: Multiplicity) -> Tuple[int, int]:
    a = max(0, -min(mult.of(h) for h in arr.orbit(1)))
    b = max(0, -min(mult.of(h) for h in arr.orbit(2)))
    return a, b


def oracle_solution_space(arr: ArrangementData, mult: Multiplicity, d: int) -> OracleSpace:
    """All degree-d members of D(A, m), by exact linear algebra only."""
    if abs(d) > ORACLE_DEGREE_CAP:
        raise ValueError("degree outside the configured oracle window")
    n = arr.rank
    a, b = _pole_exponents(arr, mult)
    den = {}
    for h in arr.orbit(1):
        if a:
            den[h.form] = a
    for h in arr.orbit(2):
        if b:
            den[h.form] = b
    num_deg = d + a * len(arr.orbit(1)) + b * len(arr.orbit(2))
    if num_deg < 0:
        return OracleSpace(arr, mult, d, den, [], [])
    monomials = _monomials_of_degree(n, num_deg)
    nm = len(monomials)
    ncols = n * nm
    rows: Dict[Tuple, List[Scalar]] = {}

    def add_entry(key, col, value):
        row = rows.get(key)
        if row is None:
            row = [Fraction(0)] * ncols
            rows[key] = row
        row[col] = row[col] + value

    for h in arr.hyperplanes:
        form = h.form
        avec = form.coeffs
        k_h = den.get(form, 0)
        t_order = mult.of(h) + k_h
        if t_order <= 0 and k_h == 0:
            continue
        norm = form.norm_sq()
        coordinate = form.is_coordinate()
        piv = form.pivot_index()
        adapted = None if coordinate else _adapted_matrix(form)
        for t, mono in enumerate(monomials):
            if coordinate:
                img_terms = {mono: Fraction(1)}
            else:
                img_terms = _monomial_image(arr, form, adapted, mono).terms
            for e, cf in img_terms.items():
                low = e[piv] if coordinate else e[0]
                for i in range(n):
                    a_i = avec[i]
                    col = i * nm + t
                    if t_order > 0 and a_i and low < t_order:
                        add_entry((form, "ord", e), col, a_i * cf)
                    if k_h > 0 and low < k_h:
                        for j in range(n):
                            w = (norm if i == j else 0) - avec[j] * a_i
                            if w:
                                add_entry((form, "tan", j, e), col, w * cf)
    basis = rational_nullspace([rows[k] for k in sorted(rows, key=repr)], ncols=ncols)
    return OracleSpace(arr, mult, d, den, monomials, basis)


def oracle_module_dimension(arr: ArrangementData, mult: Multiplicity, d: int) -> int:
    return oracle_solution_space(arr, mult, d).dim


def _action_on_numerators(arr: ArrangementData, gen_idx: int, space: OracleSpace,
                          vec: List[Scalar]) -> List[Scalar]:
    """Numerator coordinates of w . theta in the ambient monomial slots."""
    n = arr.rank
    w = arr.gens_W[gen_idx]
    winv = scalar_inverse(w)
    nm = len(space.monomials)
    # sign of the denominator under the substitution x -> w^{-1} x
    sign: Scalar = Fraction(1)
    for form, e in space.den.items():
        from .coxeter import _apply_matrix_to_form

        img, c = _apply_matrix_to_form(form, winv)
        sign = sign * c ** e
    index = {m: t for t, m in enumerate(space.monomials)}
    out = [Fraction(0)] * (n * nm)
    for j in range(n):
        acc: Dict[Tuple[int, ...], Scalar] = {}
        for k in range(n):
            if not w[j][k]:
                continue
            base = k * nm
            for t, mono in enumerate(space.monomials):
                c = vec[base + t]
                if not c:
                    continue
                img = _monomial_image(arr, ("gen", gen_idx), winv, mono)
                for e, cf in img.terms.items():
                    acc[e] = acc.get(e, Fraction(0)) + c * cf * w[j][k]
        for e, cf in acc.items():
            if cf:
                out[j * nm + index[e]] = out[j * nm + index[e]] + cf / sign
    return out


def invariant_oracle_dimension(arr: ArrangementData, mult: Multiplicity, d: int) -> int:
    """Dimension of the degree-d piece of the W-fixed part of D(A, m)."""
    space = oracle_solution_space(arr, mult, d)
    if not space.vectors:
        return 0
    rows: List[List[Scalar]] = []
    slots = len(space.vectors[0])
    for gen_idx in range(len(arr.gens_W)):
        images = [_action_on_numerators(arr, gen_idx, space, v) for v in space.vectors]
        for s in range(slots):
            row = [images[t][s] - space.vectors[t][s] for t in range(space.dim)]
            if any(row):
                rows.append(row)
    if not rows:
        return space.dim
    return len(rational_nullspace(rows, ncols=space.dim))


# ---------------------------------------------------------------------------
# Graded comparison reports
# ---------------------------------------------------------------------------

def free_module_dimension(exponents: Sequence[int], rank: int, d: int) -> int:
    """Degree-d dimension of a free module with generators in the exponents."""
    total = 0
    for e in exponents:
        if d >= e:
            total += comb(d - e + rank - 1, rank - 1)
    return total


@dataclass
class GradedReport:
    label: str
    window: List[int]
    expected: List[int]
    observed: List[int]

    @property
    def mismatches(self) -> List[int]:
        return [d for d, e, o in zip(self.window, self.expected, self.observed) if e != o]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __repr__(self):
        status = "ok" if self.ok else f"mismatch at {self.mismatches}"
        return f"GradedReport({self.label}: {status})"


def hilbert_compare(arr: ArrangementData, mult: Multiplicity,
                    exponents: Sequence[int], d_max: int, d_min: int = 0) -> GradedReport:
    """Oracle dimensions against the free-module prediction on a window."""
    window = list(range(d_min, d_max + 1))
    expected = [free_module_dimension(exponents, arr.rank, d) for d in window]
    observed = [oracle_module_dimension(arr, mult, d) for d in window]
    return GradedReport(f"D(A,{mult}) vs exponents {list(exponents)}", window, expected, observed)


def invariant_part_report(arr: ArrangementData, mult: Multiplicity, d_max: int,
                          d_min: int = 0) -> List[int]:
    return [invariant_oracle_dimension(arr, mult, d) for d in range(d_min, d_max + 1)]


def mstar_experiment(arr: ArrangementData, mult: Multiplicity, d_max: int,
                     d_min: int = 0) -> GradedReport:
    """Compare W-invariant graded dimensions of D(A, m) and D(A, m*)."""
    star = mult.star_closure()
    window = list(range(d_min, d_max + 1))
    dims_m = invariant_part_report(arr, mult, d_max, d_min)
    dims_star = invariant_part_report(arr, star, d_max, d_min)
    return GradedReport(f"invariant parts of {mult} vs {star}", window, dims_star, dims_m)


def invariant_basis_obstruction(arr: ArrangementData, mult: Multiplicity,
                                exponents: Sequence[int], d_max: int,
                                d_min: int = 0) -> Optional[int]:
    """First degree where the W-fixed dimensions refute a W-invariant basis.

    A module with a W-invariant basis of the given exponents would have
    fixed-part dimensions sum_i dim R_{d-e_i}; returns the first degree in
    the window where the oracle disagrees, or None if none does.
    """
    from .coxeter import basic_invariants

    degrees = basic_invariants(arr, "W").degrees
    for d in range(d_min, d_max + 1):
        expected = 0
        for e in exponents:
            expected += _invariant_ring_dimension(degrees, d - e)
        observed = invariant_oracle_dimension(arr, mult, d)
        if observed != expected:
            return d
    return None


def _invariant_ring_dimension(degrees: Sequence[int], d: int) -> int:
    if d < 0:
        return 0
    counts = [0] * (d + 1)
    counts[0] = 1
    for deg in degrees:
        for v in range(deg, d + 1):
            counts[v] += counts[v - deg]
    return counts[d]


def series_coefficients(degrees: Sequence[int], shifts: Sequence[int], d_max: int) -> List[int]:
    """Coefficients of (sum_j t^{shifts_j}) / prod_i (1 - t^{degrees_i})."""
    extent = d_max + max(0, -min(shifts)) if shifts else d_max
    base = [0] * (extent + 1)
    base[0] = 1
    for deg in degrees:
        for v in range(deg, extent + 1):
            base[v] += base[v - deg]
    out = [0] * (d_max + 1)
    for s in shifts:
        for v in range(max(s, 0), d_max + 1):
            out[v] += base[v - s]
    return out


def poincare_check(system: InvariantSystem, zeta_degree: int,
                   blocks: Sequence[Sequence[Derivation]], d_max: int) -> GradedReport:
    """Primitive-decomposition block degrees against the closed-form series.

    Each block is free over T = R[P_1 .. P_{l-1}]; the union of blocks must
    reproduce (prod 1/(1-t^{d_i})) (sum_j t^{m-d_j}) through degree d_max,
    with m the degree of the universal derivation.
    """
    degrees = system.degrees
    closed = series_coefficients(degrees, [zeta_degree - d for d in degrees], d_max)
    member_degrees = []
    for block in blocks:
        for theta in block:
            e = theta.degree()
            if e is None:
                raise VerificationError("block member is not homogeneous")
            member_degrees.append(e)
    observed = series_coefficients(degrees[:-1], member_degrees, d_max)
    window = list(range(d_max + 1))
    return GradedReport("primitive decomposition series", window, closed, observed)


# ---------------------------------------------------------------------------
# Invariance classification
# ---------------------------------------------------------------------------

def classify_invariance(theta: Derivation, generators) -> List[str]:
    """Per generator: 'fixed', 'antifixed' or 'neither'."""
    out = []
    for w in generators:
        img = group_action(w, theta)
        if img == theta:
            out.append("fixed")
        elif img == -theta:
            out.append("antifixed")
        else:
            out.append("neither")
    return out


def invariance_check(basis: Sequence[Derivation], generators) -> List[List[str]]:
    return [classify_invariance(theta, generators) for theta in basis]
