"""Integer multivariate truncated power series and the product-form
extraction that turns a Hilbert series into Lie algebra dimensions.

Everything is exact Python-int arithmetic.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from math import comb

from .complexes import FlagComplex, euler_term
from .errors import IdentityViolated, InputError

DEFAULT_DEGREE = 8

Exponent = tuple[int, ...]


class MultiPoly:
    """Sparse integer series in ``nvars`` variables, truncated above total degree ``bound``.

    ``bound=None`` means an exact polynomial.
    """

    __slots__ = ("nvars", "bound", "coeffs")

    def __init__(self, nvars: int, coeffs=None, bound: int | None = None):
        self.nvars = nvars
        self.bound = bound
        self.coeffs: dict[Exponent, int] = {}
        for a, c in (coeffs or {}).items():
            a = tuple(a)
            if len(a) != nvars:
                raise InputError(f"exponent {a} has wrong length for {nvars} variables")
            if bound is not None and sum(a) > bound:
                continue
            if c:
                self.coeffs[a] = self.coeffs.get(a, 0) + c
                if not self.coeffs[a]:
                    del self.coeffs[a]

    @classmethod
    def one(cls, nvars: int, bound: int | None = None) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: 1}, bound)

    @classmethod
    def monomial(cls, alpha: Exponent, coeff: int = 1, bound: int | None = None) -> MultiPoly:
        return cls(len(alpha), {tuple(alpha): coeff}, bound)

    def truncate(self, bound: int) -> MultiPoly:
        b = bound if self.bound is None else min(bound, self.bound)
        return MultiPoly(self.nvars, self.coeffs, b)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.coeffs!r}, bound={self.bound})"

    def _join_bound(self, other: MultiPoly) -> int | None:
        if self.nvars != other.nvars:
            raise InputError("series in different numbers of variables")
        bs = [b for b in (self.bound, other.bound) if b is not None]
        return min(bs) if bs else None

    def __add__(self, other: MultiPoly) -> MultiPoly:
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return MultiPoly(self.nvars, out, self._join_bound(other))

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.nvars, {a: -c for a, c in self.coeffs.items()}, self.bound)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        bound = self._join_bound(other)
        out: dict[Exponent, int] = defaultdict(int)
        for a, c in self.coeffs.items():
            da = sum(a)
            for b, d in other.coeffs.items():
                if bound is not None and da + sum(b) > bound:
                    continue
                out[tuple(x + y for x, y in zip(a, b))] += c * d
        return MultiPoly(self.nvars, out, bound)

    def constant(self) -> int:
        return self.coeffs.get((0,) * self.nvars, 0)

    def degree_part(self, d: int) -> dict[Exponent, int]:
        return {a: c for a, c in self.coeffs.items() if sum(a) == d}

    def substitute_single(self) -> MultiPoly:
        """Image under lambda_1 = ... = lambda_m = x."""
        out: dict[Exponent, int] = defaultdict(int)
        for a, c in self.coeffs.items():
            out[(sum(a),)] += c
        return MultiPoly(1, out, self.bound)

    def single_variable(self) -> list[int]:
        """Coefficient list of the single-variable image, up to the top degree present."""
        s = self.substitute_single()
        top = self.bound if self.bound is not None else max((a[0] for a in s.coeffs), default=0)
        return [s.coeffs.get((d,), 0) for d in range(top + 1)]

    def divide_power(self, alpha: Exponent, n: int) -> MultiPoly:
        """Multiply by (1 - lambda^alpha)^(-n), truncated at the current bound."""
        if n == 0:
            return self
        if self.bound is None:
            raise InputError("division needs a truncation bound")
        step = sum(alpha)
        out: dict[Exponent, int] = defaultdict(int)
        for a, c in self.coeffs.items():
            k = 0
            cur = a
            while sum(cur) <= self.bound:
                out[cur] += c * comb(n + k - 1, k)
                k += 1
                cur = tuple(x + k * y for x, y in zip(a, alpha))
                if step == 0:
                    raise InputError("cannot divide by 1 - 1")
        return MultiPoly(self.nvars, out, self.bound)

    def times_power(self, alpha: Exponent, n: int) -> MultiPoly:
        """Multiply by (1 - lambda^alpha)^n (n >= 0), truncated."""
        factor = MultiPoly(self.nvars, {tuple(k * x for x in alpha): (-1) ** k * comb(n, k) for k in range(n + 1)}, self.bound)
        return self * factor

    def to_json(self) -> list[dict]:
        return [{"alpha": list(a), "c": c} for a, c in sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), t[0]))]

    def format_single(self, var: str = "x") -> str:
        parts = []
        for d, c in enumerate(self.single_variable()):
            if not c:
                continue
            mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{mag}{mono}" if mono else str(mag))
            parts.append(("- " if c < 0 else "+ ") + body)
        if not parts:
            return "0"
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass
class DimTable:
    """Multidegree dimensions n_alpha, with the total-degree aggregation n_k."""

    nvars: int
    bound: int
    n: dict[Exponent, int]

    def __post_init__(self):
        self.n = {tuple(a): v for a, v in self.n.items() if v}

    def by_degree(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for a, v in self.n.items():
            out[sum(a)] += v
        return {k: out.get(k, 0) for k in range(self.bound + 1)}

    def get(self, alpha) -> int:
        return self.n.get(tuple(alpha), 0)

    def to_json(self) -> dict:
        return {
            "dims": [{"alpha": list(a), "n": v} for a, v in sorted(self.n.items(), key=lambda t: (sum(t[0]), t[0]))],
            "by_degree": {str(k): v for k, v in self.by_degree().items()},
        }


def rhs_poly(K: FlagComplex) -> MultiPoly:
    """sum over J of (1 - chi(K_J)) lambda^J."""
    coeffs = {}
    for r in range(K.m + 1):
        for J in itertools.combinations(K.vertices, r):
            c = euler_term(K, J)
            if c:
                coeffs[tuple(1 if v in J else 0 for v in K.vertices)] = c
    return MultiPoly(K.m, coeffs)


def extract_exponents(P: MultiPoly, bound: int = DEFAULT_DEGREE) -> DimTable:
    """The table n with prod (1 - lambda^alpha)^(n_alpha) = P modulo total degree bound + 1."""
    if P.constant() != 1:
        raise InputError("extraction needs constant term 1")
    Q = P.truncate(bound)
    n: dict[Exponent, int] = {}
    for d in range(1, bound + 1):
        part = Q.degree_part(d)
        for alpha, c in sorted(part.items()):
            if c > 0:
                raise IdentityViolated(f"negative multiplicity {-c} at multidegree {alpha}")
            if c:
                n[alpha] = -c
        for alpha, v in part.items():
            Q = Q.divide_power(alpha, -v)
    return DimTable(P.nvars, bound, n)


def product_form(dims: DimTable, bound: int | None = None) -> MultiPoly:
    """prod (1 - lambda^alpha)^(n_alpha), truncated."""
    b = dims.bound if bound is None else bound
    out = MultiPoly.one(dims.nvars, b)
    for alpha, v in sorted(dims.n.items()):
        out = out.times_power(alpha, v)
    return out


def free_lie_series(degrees, bound: int = DEFAULT_DEGREE) -> DimTable:
    """Multigraded dimensions of the free Lie algebra on generators of the given multidegrees."""
    degrees = [tuple(d) for d in degrees]
    if not degrees:
        raise InputError("free_lie_series needs at least one generator degree (or use nvars)")
    nvars = len(degrees[0])
    for d in degrees:
        if len(d) != nvars or sum(d) < 2:
            raise InputError(f"generator degree {d} invalid")
    P = MultiPoly.one(nvars, bound)
    for d in degrees:
        P = P - MultiPoly.monomial(d, 1, bound)
    return extract_exponents(P, bound)


def pbw_series(dims: DimTable, bound: int | None = None) -> MultiPoly:
    """Hilbert series of the symmetric algebra, prod (1 - lambda^alpha)^(-n_alpha), truncated."""
    b = dims.bound if bound is None else bound
    out = MultiPoly.one(dims.nvars, b)
    for alpha, v in sorted(dims.n.items()):
        out = out.divide_power(alpha, v)
    return out


def nk_series(K: FlagComplex, bound: int = DEFAULT_DEGREE) -> DimTable:
    """Predicted multigraded dimensions of N_K."""
    return extract_exponents(rhs_poly(K), bound)
