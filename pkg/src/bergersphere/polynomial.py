"""Exact sparse multivariate (Laurent) polynomials over the rationals.

A :class:`RationalPoly` maps monomials to :class:`fractions.Fraction`
coefficients.  A monomial is a sorted tuple of ``(variable, exponent)`` pairs
with nonzero integer exponents; negative exponents are allowed so that
quantities known to be nonzero (frame components, say) can be inverted
and later cleared again with :meth:`RationalPoly.clear_denominators`.

Values are immutable and hashable.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from numbers import Rational
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e != 0))


def _mono_pow(m: Monomial, n: int) -> Monomial:
    return tuple((v, e * n) for v, e in m) if n else ONE


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact arithmetic only; got {type(c).__name__}")


class RationalPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[tuple(sorted(m))] = c
        self._terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "RationalPoly":
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c: Scalar) -> "RationalPoly":
        return cls({ONE: c})

    @classmethod
    def coerce(cls, x) -> "RationalPoly":
        if isinstance(x, RationalPoly):
            return x
        return cls.const(x)

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, var: str) -> int:
        """Largest exponent of ``var`` (``-1`` for the zero polynomial)."""
        if not self._terms:
            return -1
        return max(dict(m).get(var, 0) for m in self._terms)

    def min_degree(self, var: str) -> int:
        return min(dict(m).get(var, 0) for m in self._terms) if self._terms else 0

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def coefficients(self, var: str) -> dict[int, "RationalPoly"]:
        """Split as ``sum_k coeff_k * var**k``; returns ``{k: coeff_k}``."""
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            d = dict(m)
            k = d.pop(var, 0)
            parts.setdefault(k, {})[tuple(sorted(d.items()))] = c
        return {k: RationalPoly(t) for k, t in parts.items()}

    def coeff(self, var: str, k: int) -> "RationalPoly":
        return self.coefficients(var).get(k, RationalPoly())

    def coeff_of_monomial(self, mono: "RationalPoly") -> "RationalPoly":
        """Coefficient of a monomial ``mono`` (variables of ``mono`` removed)."""
        (m, _), = mono._terms.items()
        md = dict(m)
        out = {}
        for tm, c in self._terms.items():
            d = dict(tm)
            if all(d.get(v, 0) == e for v, e in md.items()):
                for v in md:
                    d.pop(v)
                out[tuple(sorted(d.items()))] = c
        return RationalPoly(out)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        try:
            other = RationalPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = RationalPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RationalPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalPoly):
            out: dict = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = _mono_mul(m1, m2)
                    out[m] = out.get(m, 0) + c1 * c2
            return RationalPoly(out)
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return RationalPoly({m: c * v for m, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational or by a monomial (Laurent result)."""
        if isinstance(other, RationalPoly):
            if other.is_constant():
                return self / other.constant_value()
            if other.is_monomial():
                return self * other ** -1
            return NotImplemented
        c = _as_fraction(other)
        if c == 0:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __rtruediv__(self, other):
        return RationalPoly.coerce(other) * self ** -1

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials can be inverted")
            (m, c), = self._terms.items()
            return RationalPoly({_mono_pow(m, n): Fraction(1) / c ** (-n)})
        result = RationalPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self._terms == other._terms
        try:
            return self._terms == RationalPoly.const(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus and substitution -------------------------------------
    def diff(self, var: str) -> "RationalPoly":
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e:
                d[var] = e - 1
                out[tuple(sorted((v, k) for v, k in d.items() if k))] = c * e
        return RationalPoly(out)

    def subs(self, values: Mapping[str, object]) -> "RationalPoly":
        """Substitute variables by rationals or polynomials.

        A variable occurring with a negative exponent can only be replaced
        by a nonzero rational or a monomial.
        """
        if not values:
            return self
        cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = RationalPoly.coerce(values[v]) ** e
            return cache[key]

        out = RationalPoly()
        acc: dict = {}
        for m, c in self._terms.items():
            keep = []
            factor = None
            for v, e in m:
                if v in values:
                    p = power(v, e)
                    factor = p if factor is None else factor * p
                else:
                    keep.append((v, e))
            if factor is None:
                acc[tuple(keep)] = acc.get(tuple(keep), 0) + c
            else:
                out = out + RationalPoly({tuple(keep): c}) * factor
        return out + RationalPoly(acc)

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value; ``values`` must cover every variable.  Floats in
        ``values`` give a float result."""
        total = 0
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                term = term * values[v] ** e
            total = total + term
        return total

    # -- Laurent helpers ------------------------------------------------
    def clear_denominators(self) -> tuple["RationalPoly", "RationalPoly"]:
        """Multiply by the smallest monomial making every exponent
        nonnegative; returns ``(polynomial, multiplier)``."""
        lowest: dict = {}
        for m in self._terms:
            for v, e in m:
                if e < lowest.get(v, 0):
                    lowest[v] = e
        mult = RationalPoly({tuple(sorted((v, -e) for v, e in lowest.items())): 1})
        return self * mult, mult

    def is_polynomial(self) -> bool:
        return all(e > 0 for m in self._terms for _, e in m)

    # -- division -------------------------------------------------------
    def _leading(self, order: tuple):
        def key(m):
            d = dict(m)
            return tuple(d.get(v, 0) for v in order)

        m = max(self._terms, key=key)
        return m, self._terms[m]

    def divmod_exact(self, divisor: "RationalPoly") -> "RationalPoly":
        """Exact multivariate division; raises ``ValueError`` when
        ``divisor`` does not divide ``self``."""
        divisor = RationalPoly.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if not (self.is_polynomial() and divisor.is_polynomial()):
            raise ValueError("exact division needs genuine polynomials")
        order = tuple(sorted(self.variables | divisor.variables))
        dm, dc = divisor._leading(order)
        dd = dict(dm)
        rem = self
        quot = RationalPoly()
        while not rem.is_zero():
            rm, rc = rem._leading(order)
            rd = dict(rm)
            if any(rd.get(v, 0) < e for v, e in dd.items()):
                raise ValueError(f"{divisor} does not divide {self}")
            q = RationalPoly({tuple(sorted((v, rd.get(v, 0) - dd.get(v, 0))
                                           for v in set(rd) | set(dd)
                                           if rd.get(v, 0) - dd.get(v, 0))): rc / dc})
            quot = quot + q
            rem = rem - q * divisor
        return quot

    def divides_exactly(self, divisor) -> bool:
        try:
            self.divmod_exact(divisor)
        except ValueError:
            return False
        return True

    def strip_factor(self, factor: "RationalPoly") -> tuple["RationalPoly", int]:
        """Divide out ``factor`` as often as it divides; returns the
        cofactor and the multiplicity."""
        p, k = self, 0
        if p.is_zero():
            return p, 0
        while True:
            try:
                q = p.divmod_exact(factor)
            except ValueError:
                return p, k
            p, k = q, k + 1

    # -- display --------------------------------------------------------
    def _sort_key(self, item):
        m, _ = item
        return (-sum(e for _, e in m), m)

    def __repr__(self):
        return f"RationalPoly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), key=self._sort_key):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        """Deterministic list of ``[coefficient, {var: exponent}]`` pairs."""
        return [[str(c), dict(m)] for m, c in sorted(self._terms.items(), key=self._sort_key)]

    def univariate_coefficients(self, var: str) -> list[Fraction]:
        """Coefficients (highest degree first) of a polynomial in ``var``
        alone."""
        extra = self.variables - {var}
        if extra:
            raise ValueError(f"not univariate in {var}: also depends on {sorted(extra)}")
        deg = self.degree(var)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self._terms.items():
            coeffs[deg - dict(m).get(var, 0)] = c
        return coeffs


def var(*names: str):
    out = tuple(RationalPoly.var(n) for n in names)
    return out if len(out) > 1 else out[0]


def determinant(matrix: list[list]) -> RationalPoly:
    """Leibniz-formula determinant for the small matrices used here."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if n > 6:
        raise ValueError("Leibniz expansion limited to n <= 6")
    total = RationalPoly()
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = RationalPoly.const(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            entry = matrix[i][j]
            if not entry:
                term = RationalPoly()
                break
            term = term * entry
        total = total + term
    return total


def sylvester_matrix(p: RationalPoly, q: RationalPoly, var: str) -> list[list[RationalPoly]]:
    """Sylvester matrix of ``p`` and ``q`` regarded as polynomials in ``var``."""
    m, n = p.degree(var), q.degree(var)
    if m < 1 or n < 1:
        raise ValueError(f"both polynomials need positive degree in {var}")
    pc = p.coefficients(var)
    qc = q.coefficients(var)
    zero = RationalPoly()
    prow = [pc.get(k, zero) for k in range(m, -1, -1)]
    qrow = [qc.get(k, zero) for k in range(n, -1, -1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + prow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qrow + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: RationalPoly, q: RationalPoly, var: str) -> RationalPoly:
    return determinant(sylvester_matrix(p, q, var))


def linear_solve(p: RationalPoly, var: str) -> RationalPoly:
    """Solve ``p = 0`` for ``var`` when ``p`` is affine in ``var`` with a
    rational (or monomial) leading coefficient."""
    coeffs = p.coefficients(var)
    if set(coeffs) - {0, 1} or 1 not in coeffs:
        raise ValueError(f"{p} is not affine in {var}")
    lead = coeffs[1]
    if not (lead.is_constant() or lead.is_monomial()):
        raise ValueError(f"coefficient of {var} is not invertible: {lead}")
    return -coeffs.get(0, RationalPoly()) / lead


def cancel_monomial(p: RationalPoly, q: RationalPoly, mono: RationalPoly) -> RationalPoly:
    """Combination of ``p`` and ``q`` in which the monomial ``mono`` cancels.

    Both inputs must be affine in ``mono`` (every term either contains
    ``mono`` exactly or none of its variables).  When the coefficient of
    ``mono`` in ``q`` divides the one in ``p`` the cheaper combination
    ``p - (cp/cq) q`` is used, otherwise ``cq p - cp q``.
    """
    (m, _), = mono.items()
    md = dict(m)
    for poly in (p, q):
        for tm, _ in poly.items():
            d = dict(tm)
            hits = [d.get(v, 0) for v in md]
            if any(hits) and hits != [md[v] for v in md]:
                raise ValueError(f"not affine in {mono}: term {tm}")
    cp = p.coeff_of_monomial(mono)
    cq = q.coeff_of_monomial(mono)
    if cq.is_zero():
        raise ValueError(f"{mono} does not occur in the eliminating relation")
    try:
        ratio = cp.divmod_exact(cq)
        out = p - ratio * q
    except ValueError:
        out = cq * p - cp * q
    if not out.coeff_of_monomial(mono).is_zero():
        raise ValueError(f"{mono} did not cancel; inputs are not affine in it")
    return out


def derivation(rules: Mapping[str, object]):
    """A derivation (directional derivative) defined by its values on the
    variables; applied through the Leibniz rule.  Every variable of the
    argument must have a rule."""
    rules = {v: RationalPoly.coerce(r) for v, r in rules.items()}

    def apply(p: RationalPoly) -> RationalPoly:
        p = RationalPoly.coerce(p)
        missing = p.variables - set(rules)
        if missing:
            raise KeyError(f"no derivative rule for {sorted(missing)}")
        out = RationalPoly()
        for v in p.variables:
            r = rules[v]
            if r:
                out = out + p.diff(v) * r
        return out

    return apply


def as_poly(x) -> RationalPoly:
    return RationalPoly.coerce(x)


def poly_sum(items: Iterable) -> RationalPoly:
    total = RationalPoly()
    for x in items:
        total = total + x
    return total


def rewrite(p: RationalPoly, rules: Iterable[tuple[RationalPoly, RationalPoly]], max_rounds: int = 200) -> RationalPoly:
    """Replace monomial patterns until none divides a term.

    ``rules`` pairs a monomial (e.g. ``kappa1*a3``) with its replacement.
    The caller is responsible for termination (each rule must lower some
    degree); ``max_rounds`` guards against cycles.
    """
    compiled = []
    for lhs, rhs in rules:
        (m, c), = lhs.items()
        compiled.append((dict(m), c, RationalPoly.coerce(rhs)))
    for _ in range(max_rounds):
        changed = False
        out = RationalPoly()
        keep = {}
        for tm, c in p.items():
            d = dict(tm)
            for pat, pc, rhs in compiled:
                if all(d.get(v, 0) >= e for v, e in pat.items()):
                    rest = {v: d.get(v, 0) - pat.get(v, 0) for v in set(d) | set(pat)}
                    rest_mono = RationalPoly({tuple(sorted((v, e) for v, e in rest.items() if e)): c / pc})
                    out = out + rest_mono * rhs
                    changed = True
                    break
            else:
                keep[tm] = keep.get(tm, 0) + c
        p = out + RationalPoly(keep)
        if not changed:
            return p
    raise RuntimeError("rewriting did not terminate")


def monomial_content(p: RationalPoly) -> RationalPoly:
    """Largest monomial dividing every term (exponents may be negative)."""
    items = list(p.items())
    if not items:
        return RationalPoly.const(1)
    variables = p.variables
    low = {v: min(dict(m).get(v, 0) for m, _ in items) for v in variables}
    return RationalPoly({tuple(sorted((v, e) for v, e in low.items() if e)): 1})


def reduce_unit_circle(p: RationalPoly, a: str, b: str) -> RationalPoly:
    """Reduce modulo ``a^2 + b^2 - 1``: every power ``a^k`` becomes
    ``a^(k mod 2) (1 - b^2)^(k div 2)``.  The result is ``A(b) + a B(b)``,
    which is zero iff the input vanishes on the circle."""
    one_minus = RationalPoly.const(1) - RationalPoly.var(b) ** 2
    out = RationalPoly()
    for k, coeff in p.coefficients(a).items():
        if k < 0:
            raise ValueError(f"negative power of {a}; clear denominators first")
        out = out + coeff * RationalPoly.var(a) ** (k % 2) * one_minus ** (k // 2)
    return out
