"""Sparse multivariate polynomials, linear forms and arrangement fractions.

Poly maps exponent tuples to nonzero coefficients (Fraction or
AlgebraicNumber); the zero polynomial is the empty map.  LinearForm is a
normalized nonzero covector so hyperplane identity is syntactic equality.
LogRational is a reduced quotient whose denominator is a product of powers
of pairwise non-proportional linear forms; it houses every rational function
this package ever needs, since all poles sit along arrangement hyperplanes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from .scalars import AlgebraicNumber, Scalar, as_fraction, scalar_is_rational

Exponent = Tuple[int, ...]

MINUS_INFINITY = None  # degree of the zero polynomial

# shared power tables for repeated substitutions by the same matrix
_SUBST_POWER_CACHE: Dict = {}


def _add_exps(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _grlex_key(e: Exponent):
    return (sum(e), e)


def _scalar_matrix_singular(m) -> bool:
    rows = [list(r) for r in m]
    n = len(rows)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return True
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return False


class Poly:
    """Sparse polynomial in a fixed number of variables, exact coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponent, Scalar]] = None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        c = Fraction(c) if isinstance(c, int) else c
        if not c:
            return Poly(nvars)
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(nvars: int, exps: Sequence[int], c=1) -> "Poly":
        c = Fraction(c) if isinstance(c, int) else c
        if not c:
            return Poly(nvars)
        return Poly(nvars, {tuple(exps): c})

    @staticmethod
    def from_linear(coeffs: Sequence[Scalar]) -> "Poly":
        n = len(coeffs)
        terms: Dict[Exponent, Scalar] = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c) if isinstance(c, int) else c
        return Poly(n, terms)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    def degree(self):
        """Total degree, or MINUS_INFINITY (None) for the zero polynomial."""
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise ValueError("ambient dimension mismatch")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, Poly):
            self._check(other)
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            out: Dict[Exponent, Scalar] = {}
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = _add_exps(ea, eb)
                    c = ca * cb
                    s = out.get(e)
                    if s is None:
                        out[e] = c
                    else:
                        s = s + c
                        if s:
                            out[e] = s
                        else:
                            del out[e]
            return Poly(self.nvars, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = Fraction(c) if isinstance(c, int) else c
        if not c:
            return Poly(self.nvars)
        return Poly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus -------------------------------------------------------
    def partial(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise ValueError("variable index out of range")
        out: Dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = list(e)
                e2[i] = k - 1
                out[tuple(e2)] = c * k
        return Poly(self.nvars, out)

    def substitute(self, images: Sequence["Poly"],
                   power_cache: Optional[Dict] = None) -> "Poly":
        """Substitute x_i -> images[i]; images live in the same ambient ring."""
        if len(images) != self.nvars:
            raise ValueError("wrong number of substitution images")
        cache: Dict = power_cache if power_cache is not None else {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            p = cache.get(key)
            if p is None:
                p = images[i] ** k
                cache[key] = p
            return p

        acc = Poly(self.nvars)
        for e, c in sorted(self.terms.items(), key=lambda t: _grlex_key(t[0])):
            mono = Poly.const(self.nvars, c)
            for i, k in enumerate(e):
                if k:
                    mono = mono * power(i, k)
            acc = acc + mono
        return acc

    def substitute_matrix(self, m: Sequence[Sequence[Scalar]]) -> "Poly":
        """Compose with the linear change of variables x -> M x; M invertible."""
        key = tuple(tuple(row) for row in m)
        cache = _SUBST_POWER_CACHE.get(key)
        if cache is None:
            if _scalar_matrix_singular(key):
                raise ValueError("singular substitution matrix")
            cache = {}
            if len(_SUBST_POWER_CACHE) > 64:
                _SUBST_POWER_CACHE.clear()
            _SUBST_POWER_CACHE[key] = cache
        images = [Poly.from_linear(row) for row in m]
        return self.substitute(images, power_cache=cache)

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        total: Scalar = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = v * point[i] ** k
            total = total + v
        return total

    # -- division -------------------------------------------------------
    def leading(self) -> Tuple[Exponent, Scalar]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def divide_exact(self, d: "Poly") -> Optional["Poly"]:
        """Quotient self/d if the division is exact, else None."""
        self._check(d)
        if not d.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return Poly(self.nvars)
        ed, cd = d.leading()
        rem = dict(self.terms)
        q: Dict[Exponent, Scalar] = {}
        while rem:
            er = max(rem, key=_grlex_key)
            diff = tuple(a - b for a, b in zip(er, ed))
            if any(x < 0 for x in diff):
                return None
            c = rem[er] / cd
            q[diff] = c
            for e2, c2 in d.terms.items():
                e = _add_exps(diff, e2)
                s = rem.get(e)
                v = c * c2
                if s is None:
                    rem[e] = -v
                else:
                    s = s - v
                    if s:
                        rem[e] = s
                    else:
                        del rem[e]
        return Poly(self.nvars, q)

    def multiplicity_along(self, form: "LinearForm") -> int:
        """Largest k with form^k dividing self; self must be nonzero."""
        if not self.terms:
            raise ValueError("multiplicity of the zero polynomial")
        fp = form.to_poly()
        k = 0
        cur = self
        while True:
            nxt = cur.divide_exact(fp)
            if nxt is None:
                return k
            cur = nxt
            k += 1

    # -- rendering ------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i+1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            vars_part = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k
            )
            if isinstance(c, AlgebraicNumber):
                cs = f"({c!r})"
            else:
                cs = str(c)
            if vars_part:
                if cs == "1":
                    parts.append(vars_part)
                elif cs == "-1":
                    parts.append(f"-{vars_part}")
                else:
                    parts.append(f"{cs}*{vars_part}")
            else:
                parts.append(cs)
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return self.render()


class LinearForm:
    """Nonzero covector, normalized so proportional forms compare equal.

    Rational forms store a primitive integer vector with positive first
    nonzero entry; forms over Q(g) are scaled so the first nonzero entry
    is 1.  Normalization is idempotent by construction.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Sequence[Scalar]):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        if all(not c for c in cs):
            raise ValueError("zero linear form")
        if all(scalar_is_rational(c) or (isinstance(c, AlgebraicNumber) and len(c.coeffs) <= 1)
               for c in cs):
            fracs = [as_fraction(c) for c in cs]
            den = lcm(*[f.denominator for f in fracs])
            ints = [int(f * den) for f in fracs]
            g = 0
            for v in ints:
                g = gcd(g, abs(v))
            ints = [v // g for v in ints]
            first = next(v for v in ints if v)
            if first < 0:
                ints = [-v for v in ints]
            cs = [Fraction(v) for v in ints]
        else:
            first = next(c for c in cs if c)
            cs = [c / first for c in cs]
        self.coeffs = tuple(cs)
        self._hash = hash(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        # deterministic ordering for rendering and serialization
        return _form_sort_key(self) < _form_sort_key(other)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def to_poly(self) -> Poly:
        return Poly.from_linear(self.coeffs)

    def dot(self, vec: Sequence) :
        total = None
        for c, v in zip(self.coeffs, vec):
            if not c:
                continue
            term = v * c
            total = term if total is None else total + term
        if total is None:
            total = Fraction(0)
        return total

    def norm_sq(self) -> Scalar:
        total: Scalar = Fraction(0)
        for c in self.coeffs:
            total = total + c * c
        return total

    def proportionality(self, other: "LinearForm") -> Optional[Scalar]:
        """Scalar c with other = c*self, or None if not proportional."""
        ratio = None
        for a, b in zip(self.coeffs, other.coeffs):
            if not a and not b:
                continue
            if not a or not b:
                return None
            r = b / a
            if ratio is None:
                ratio = r
            elif ratio != r:
                return None
        return ratio

    def pivot_index(self) -> int:
        return next(i for i, c in enumerate(self.coeffs) if c)

    def is_coordinate(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        return self.to_poly().render(names)

    def __repr__(self):
        return self.render()


def _form_sort_key(form: LinearForm):
    out = []
    for c in form.coeffs:
        if isinstance(c, AlgebraicNumber):
            out.append((1,) + tuple(c.coeffs))
        else:
            out.append((0, c))
    return out


def normalize_form(coeffs) -> Tuple[LinearForm, Scalar]:
    """LinearForm plus the scalar c with raw = c * normalized."""
    form = LinearForm(coeffs)
    raw = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
    i = form.pivot_index()
    return form, raw[i] / form.coeffs[i]


class LogRational:
    """Reduced fraction num / prod(form^k) with poles along fixed hyperplanes."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Mapping[LinearForm, int]] = None,
                 reduce: bool = True):
        self.num = num
        d = {f: e for f, e in (den or {}).items() if e}
        if any(e < 0 for e in d.values()):
            raise ValueError("negative denominator exponent")
        if not num.terms:
            d = {}
        self.den = d
        if reduce and d:
            self._reduce()

    def _reduce(self):
        for form in list(self.den):
            e = self.den[form]
            fp = form.to_poly()
            while e > 0:
                q = self.num.divide_exact(fp)
                if q is None:
                    break
                self.num = q
                e -= 1
            if e:
                self.den[form] = e
            else:
                del self.den[form]

    # -- constructors ---------------------------------------------------
    @staticmethod
    def from_poly(p: Poly) -> "LogRational":
        return LogRational(p, None, reduce=False)

    @staticmethod
    def zero(nvars: int) -> "LogRational":
        return LogRational(Poly.zero(nvars), None, reduce=False)

    @staticmethod
    def const(nvars: int, c) -> "LogRational":
        return LogRational(Poly.const(nvars, c), None, reduce=False)

    # -- predicates -----------------------------------------------------
    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_poly(self) -> bool:
        return not self.den

    def as_poly(self) -> Poly:
        if self.den:
            raise ValueError("denominator is nontrivial")
        return self.num

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def degree(self):
        """Homogeneity degree (num degree minus denominator degree)."""
        if self.num.is_zero():
            return MINUS_INFINITY
        return self.num.degree() - sum(self.den.values())

    def is_homogeneous(self) -> bool:
        return self.num.is_homogeneous()

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = LogRational.from_poly(other)
        if not isinstance(other, LogRational):
            return NotImplemented
        return not (self - other)

    def __hash__(self):
        return hash((self.num, frozenset(self.den.items())))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "LogRational":
        if isinstance(other, LogRational):
            return other
        if isinstance(other, Poly):
            return LogRational.from_poly(other)
        return LogRational.const(self.nvars, other)

    def __add__(self, other):
        o = self._coerce(other)
        if self.nvars != o.nvars:
            raise ValueError("ambient dimension mismatch")
        common: Dict[LinearForm, int] = dict(self.den)
        for f, e in o.den.items():
            common[f] = max(common.get(f, 0), e)
        a = self.num * _form_product(self.nvars, {f: e - self.den.get(f, 0)
                                                  for f, e in common.items()})
        b = o.num * _form_product(self.nvars, {f: e - o.den.get(f, 0)
                                               for f, e in common.items()})
        return LogRational(a + b, common)

    __radd__ = __add__

    def __neg__(self):
        return LogRational(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return LogRational(self.num * other, self.den, reduce=False)
        o = self._coerce(other)
        den: Dict[LinearForm, int] = dict(self.den)
        for f, e in o.den.items():
            den[f] = den.get(f, 0) + e
        return LogRational(self.num * o.num, den)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LogRational":
        if n < 0:
            raise ValueError("negative power of an arrangement fraction")
        out = LogRational.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def mul_form_power(self, form: LinearForm, k: int) -> "LogRational":
        """Multiply by form^k (k may be negative)."""
        if k == 0 or self.is_zero():
            return self
        if k > 0:
            e = self.den.get(form, 0)
            drop = min(e, k)
            den = dict(self.den)
            if drop == e:
                den.pop(form, None)
            else:
                den[form] = e - drop
            num = self.num * form.to_poly() ** (k - drop)
            return LogRational(num, den, reduce=False)
        den = dict(self.den)
        den[form] = den.get(form, 0) - k
        return LogRational(self.num, den)

    def partial(self, i: int) -> "LogRational":
        """Exact partial derivative (quotient rule over the form powers)."""
        base = LogRational(self.num.partial(i), self.den, reduce=True)
        for form, e in self.den.items():
            a_i = form.coeffs[i]
            if not a_i:
                continue
            den = dict(self.den)
            den[form] = e + 1
            base = base + LogRational(self.num * (-e * a_i), den)
        return base

    def substitute_matrix(self, m, minv=None) -> "LogRational":
        """Compose with x -> M x; forms renormalize and carry scalars out."""
        num = self.num.substitute_matrix(m)
        scal: Scalar = Fraction(1)
        den: Dict[LinearForm, int] = {}
        mt = list(zip(*m))  # columns of M = images of coordinate covectors
        for form, e in self.den.items():
            new_coeffs = [form.dot(col) for col in mt]
            nf, c = normalize_form(new_coeffs)
            den[nf] = den.get(nf, 0) + e
            scal = scal * c ** e
        return LogRational(num * (1 / scal), den)

    def order_along(self, form: LinearForm) -> Union[int, float]:
        """Valuation along the hyperplane form = 0; +inf for the zero element."""
        if self.num.is_zero():
            return float("inf")
        e = self.den.get(form, 0)
        if e:
            return -e  # reduced: numerator is coprime to denominator forms
        return self.num.multiplicity_along(form)

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        num = self.num.render(names)
        if not self.den:
            return num
        dens = []
        for form in sorted(self.den):
            e = self.den[form]
            base = f"({form.render(names)})"
            dens.append(f"{base}^{e}" if e > 1 else base)
        return f"({num}) / ({'*'.join(dens)})"

    def __repr__(self):
        return self.render()


def _form_product(nvars: int, exps: Mapping[LinearForm, int]) -> Poly:
    out = Poly.const(nvars, 1)
    for form, e in exps.items():
        if e:
            out = out * form.to_poly() ** e
    return out


def form_product(nvars: int, exps: Mapping[LinearForm, int]) -> Poly:
    """Expanded product of form powers (exponents must be nonnegative)."""
    if any(e < 0 for e in exps.values()):
        raise ValueError("negative exponent in form product")
    return _form_product(nvars, exps)


def match_product_of_forms(f: LogRational, spec: Mapping[LinearForm, int]):
    """Scalar c with f = c * prod(form^spec), or None if no such c exists.

    Distinct LinearForm keys are never proportional (normalization makes
    proportional covectors compare equal), so the exponent map is always a
    valid multiarrangement prescription.
    """
    if f.is_zero():
        return None
    g = f
    for form, e in spec.items():
        g = g.mul_form_power(form, -e)
    if g.is_constant():
        c = g.num.constant_value()
        return c if c else None
    return None
