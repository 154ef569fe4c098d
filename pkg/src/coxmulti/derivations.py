"""Derivations with arrangement-rational coefficients and the flat connection.

A derivation theta = sum c_i d/dx_i is stored through its coefficient vector
of LogRational entries.  In the orthonormal coordinates of the catalog the
Levi-Civita connection of the Euclidean metric is flat with vanishing
Christoffel symbols, so nabla_theta delta differentiates delta's
coefficients along theta componentwise.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

from .coxeter import ArrangementData, InvariantSystem, Multiplicity
from .linalg import Matrix, scalar_inverse, solve_over_fractions
from .poly import LinearForm, LogRational, Poly


class Derivation:
    """Element of Der_F given by its coefficients in d/dx_1 .. d/dx_l."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Union[LogRational, Poly]]):
        cs = []
        for c in coeffs:
            if isinstance(c, Poly):
                c = LogRational.from_poly(c)
            cs.append(c)
        self.coeffs = tuple(cs)
        if not cs:
            raise ValueError("empty derivation")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @staticmethod
    def zero(nvars: int) -> "Derivation":
        return Derivation([LogRational.zero(nvars)] * nvars)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation([-a for a in self.coeffs])

    def __mul__(self, f) -> "Derivation":
        """Module action: multiply every coefficient by f."""
        return Derivation([c * f for c in self.coeffs])

    __rmul__ = __mul__

    def apply(self, f: Union[Poly, LogRational]) -> LogRational:
        """theta(f) = sum c_i * df/dx_i, reduced."""
        if isinstance(f, Poly):
            f = LogRational.from_poly(f)
        n = self.nvars
        acc = LogRational.zero(n)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            df = f.partial(i)
            if df.is_zero():
                continue
            acc = acc + c * df
        return acc

    def apply_form(self, form: LinearForm) -> LogRational:
        acc = LogRational.zero(self.nvars)
        for a, c in zip(form.coeffs, self.coeffs):
            if a and not c.is_zero():
                acc = acc + c * a
        return acc

    def degree(self) -> Optional[int]:
        """Homogeneity degree; None when inhomogeneous or zero."""
        degs = set()
        for c in self.coeffs:
            if c.is_zero():
                continue
            if not c.is_homogeneous():
                return None
            degs.add(c.degree())
        if len(degs) != 1:
            return None
        return degs.pop()

    def is_polynomial(self) -> bool:
        return all(c.is_poly() for c in self.coeffs)

    def render(self, names=None) -> str:
        if names is None:
            names = [f"x{i+1}" for i in range(self.nvars)]
        parts = [f"[{c.render(names)}] d/d{names[i]}"
                 for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.render()


def euler(nvars: int) -> Derivation:
    """E = sum x_i d/dx_i, characterized by E(alpha) = alpha."""
    return Derivation([Poly.variable(nvars, i) for i in range(nvars)])


def partial_derivation(nvars: int, i: int) -> Derivation:
    cs = [LogRational.zero(nvars)] * nvars
    cs = list(cs)
    cs[i] = LogRational.const(nvars, 1)
    return Derivation(cs)


def covariant_derivative(theta: Derivation, delta: Derivation) -> Derivation:
    """nabla_theta delta: componentwise directional derivative (flat metric)."""
    if theta.nvars != delta.nvars:
        raise ValueError("ambient dimension mismatch")
    return Derivation([theta.apply(c) for c in delta.coeffs])


def group_action(w, theta: Derivation) -> Derivation:
    """(w theta)(f) = w(theta(w^{-1} f)) for an invertible matrix w."""
    n = theta.nvars
    winv = scalar_inverse(w)
    new = []
    for j in range(n):
        acc = LogRational.zero(n)
        for k in range(n):
            if w[j][k]:
                acc = acc + theta.coeffs[k] * w[j][k]
        new.append(acc.substitute_matrix(winv))
    return Derivation(new)


def coordinate_field(system: InvariantSystem, i: int) -> Derivation:
    """d/dP_i in x-coordinates, from J(P)^T v = e_i."""
    arr = system.arr
    n = arr.rank
    rhs = Matrix([[Poly.const(n, 1) if k == i else Poly.zero(n)] for k in range(n)])
    sol = solve_over_fractions(system.jacobian.transpose(), rhs, forms=arr.forms())
    if sol is None:
        raise ValueError("Jacobian is singular")
    return Derivation(sol.column(0))


def gradient_field(system: InvariantSystem, i: int) -> Derivation:
    """I*(dP_i): the gradient of the i-th basic invariant (A = identity)."""
    return Derivation(system.jacobian.column(i))


# ---------------------------------------------------------------------------
# Logarithmic membership
# ---------------------------------------------------------------------------

def tangential_coefficients(theta: Derivation, form: LinearForm) -> List[LogRational]:
    """Coefficients of theta minus its normal component along the hyperplane.

    theta = (theta(alpha)/I*(alpha,alpha)) I*(d alpha) + theta_tan with
    theta_tan(alpha) = 0; returns the coefficients of theta_tan.
    """
    norm = form.norm_sq()
    val = theta.apply_form(form)
    out = []
    for j, c in enumerate(theta.coeffs):
        a_j = form.coeffs[j]
        if a_j:
            out.append(c - val * (a_j / norm))
        else:
            out.append(c)
    return out


def in_d_minus_infinity(theta: Derivation, arr: ArrangementData,
                        forms: Optional[Sequence[LinearForm]] = None) -> bool:
    """Membership in D(A, -infinity): poles only along A, tangential parts
    regular along every hyperplane."""
    allowed = set(arr.forms() if forms is None else forms)
    for c in theta.coeffs:
        for f in c.den:
            if f not in allowed:
                raise ValueError(f"foreign denominator form {f}")
    check = arr.forms() if forms is None else forms
    for form in check:
        for c in tangential_coefficients(theta, form):
            if c.is_zero():
                continue
            if c.order_along(form) < 0:
                return False
    return True


def membership_witness(theta: Derivation, arr: ArrangementData,
                       mult: Multiplicity) -> Optional[Tuple[str, "LinearForm"]]:
    """None when theta lies in D(A, m); otherwise (reason, hyperplane form)."""
    if theta.is_zero():
        raise ValueError("membership of the zero derivation")
    allowed = set(arr.forms())
    for c in theta.coeffs:
        for f in c.den:
            if f not in allowed:
                raise ValueError(f"foreign denominator form {f}")
    for h in arr.hyperplanes:
        for c in tangential_coefficients(theta, h.form):
            if not c.is_zero() and c.order_along(h.form) < 0:
                return ("tangential pole", h.form)
        val = theta.apply_form(h.form)
        if not val.is_zero() and val.order_along(h.form) < mult.of(h):
            return ("order below multiplicity", h.form)
    return None


def log_membership(theta: Derivation, arr: ArrangementData, mult: Multiplicity) -> bool:
    """theta in D(A, m): order of theta(alpha_H) at least m(H) for every H,
    together with membership in D(A, -infinity)."""
    return membership_witness(theta, arr, mult) is None
