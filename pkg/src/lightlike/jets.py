"""Truncated bivariate Taylor expansions ("jets") of total order <= 3.

A :class:`Jet3` stores the Taylor coefficients of a smooth function of the
chart parameters ``(u, v)`` about a fixed base point, in the monomial order::

    1, u, v, u^2, uv, v^2, u^3, u^2 v, u v^2, v^3

Coefficients are derivatives divided by factorials, so ``coeffs[4]`` is
``d^2 f/du dv`` and ``coeffs[3]`` is ``(1/2) d^2 f/du^2``.  The coefficient
array may carry leading dimensions, ``(..., 10)``; a jet of shape ``(3,)`` is
an ambient vector field.  ``order`` records how many derivative levels are
trustworthy: differentiation lowers it by one and every operation truncates
to the smaller order of its operands.
"""
import math
import numbers

import numpy as np

from . import _kernels
from ._kernels import DEGREE, INDEX, MAXDEG, NCOEF
from .errors import DomainError

__all__ = [
    "Jet3", "jet_var", "jet_const", "jet_mul", "jet_compose", "directional_derivative",
    "stack", "FUNCTIONS", "coefficient_index",
]

DIV_EPS = 1e-13


def coefficient_index(i, j):
    """Position of the ``u^i v^j`` coefficient."""
    return INDEX[(i, j)]


def _flat(c):
    return np.ascontiguousarray(c, dtype=np.float64).reshape(-1, NCOEF)


class Jet3:
    __slots__ = ("coeffs", "order")
    __array_ufunc__ = None  # numpy operands defer to the reflected operators

    def __init__(self, coeffs, order=MAXDEG):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape[-1:] != (NCOEF,):
            raise ValueError(f"expected trailing dimension {NCOEF}, got shape {coeffs.shape}")
        self.coeffs = coeffs
        self.order = int(order)

    # -- structure -------------------------------------------------------
    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    @property
    def value(self):
        """Pointwise value(s): the constant coefficient."""
        v = self.coeffs[..., 0]
        return float(v) if v.ndim == 0 else v.copy()

    def __getitem__(self, idx):
        if not self.shape:
            raise TypeError("scalar jet is not subscriptable")
        return Jet3(self.coeffs[idx], self.order)

    def __len__(self):
        return self.shape[0]

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def partial(self, i, j):
        """Mixed partial derivative d^(i+j) / du^i dv^j at the base point."""
        return self.coeffs[..., INDEX[(i, j)]] * (math.factorial(i) * math.factorial(j))

    def d_u(self):
        out = np.zeros_like(self.coeffs)
        out[..., _kernels.DU_DST] = self.coeffs[..., _kernels.DU_SRC] * _kernels.DU_FAC
        return Jet3(out, self.order - 1)

    def d_v(self):
        out = np.zeros_like(self.coeffs)
        out[..., _kernels.DV_DST] = self.coeffs[..., _kernels.DV_SRC] * _kernels.DV_FAC
        return Jet3(out, self.order - 1)

    def truncated(self, order):
        c = self.coeffs.copy()
        c[..., DEGREE > order] = 0.0
        return Jet3(c, min(order, self.order))

    def __repr__(self):
        return f"Jet3(order={self.order}, coeffs={self.coeffs!r})"

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet3):
            return other
        if isinstance(other, numbers.Real):
            return jet_const(float(other))
        if isinstance(other, np.ndarray) and other.dtype.kind in "fiu":
            c = np.zeros(other.shape + (NCOEF,))
            c[..., 0] = other
            return Jet3(c)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = Jet3(self.coeffs + other.coeffs, order)
        # a higher-order operand may carry coefficients the result cannot vouch for
        return out.truncated(order) if self.order != other.order else out

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.coeffs, self.order)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Jet3(self.coeffs * float(other), self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            if abs(other) < DIV_EPS:
                raise DomainError("division by (near) zero constant")
            return Jet3(self.coeffs / float(other), self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_mul(self, jet_compose("recip", other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_mul(other, jet_compose("recip", self))

    def __pow__(self, p):
        return jet_pow(self, p)


def stack(jets):
    """Stack scalar (or equally shaped) jets along a new leading axis."""
    jets = list(jets)
    order = min(j.order for j in jets)
    return Jet3(np.stack([j.coeffs for j in jets]), order)


def jet_const(value, order=MAXDEG):
    c = np.zeros(NCOEF)
    c[0] = value
    return Jet3(c, order)


def jet_var(which, value):
    """Seed jet of a chart parameter: ``value + 1*(which - value)``."""
    c = np.zeros(NCOEF)
    c[0] = value
    if which == "u":
        c[INDEX[(1, 0)]] = 1.0
    elif which == "v":
        c[INDEX[(0, 1)]] = 1.0
    else:
        raise ValueError(f"parameter must be 'u' or 'v', not {which!r}")
    return Jet3(c)


def _broadcast_pair(a, b):
    if a.shape == b.shape:
        return a.shape, _flat(a.coeffs), _flat(b.coeffs)
    shape = np.broadcast_shapes(a.shape, b.shape)
    A = np.broadcast_to(a.coeffs, shape + (NCOEF,))
    B = np.broadcast_to(b.coeffs, shape + (NCOEF,))
    return shape, _flat(A), _flat(B)


def jet_mul(a, b):
    """Truncated product; terms of total degree above the result order are dropped."""
    order = min(a.order, b.order)
    shape, A, B = _broadcast_pair(a, b)
    out = _kernels.mul(A, B, order)
    return Jet3(out.reshape(shape + (NCOEF,)), order)


# Taylor coefficients f(c), f'(c), f''(c)/2, f'''(c)/6 of each univariate
# function, evaluated on an array of base values c (already domain-checked).

def _sin(c):
    s, k = np.sin(c), np.cos(c)
    return s, k, -s / 2, -k / 6


def _cos(c):
    s, k = np.sin(c), np.cos(c)
    return k, -s, -k / 2, s / 6


def _exp(c):
    e = np.exp(c)
    return e, e, e / 2, e / 6


def _ln(c):
    return np.log(c), 1 / c, -1 / (2 * c**2), 1 / (3 * c**3)


def _sqrt(c):
    r = np.sqrt(c)
    return r, 1 / (2 * r), -1 / (8 * r**3), 1 / (16 * r**5)


def _tan(c):
    t = np.tan(c)
    sec2 = 1 + t * t
    return t, sec2, t * sec2, sec2 * (1 + 3 * t * t) / 3


def _sinh(c):
    s, k = np.sinh(c), np.cosh(c)
    return s, k, s / 2, k / 6


def _cosh(c):
    s, k = np.sinh(c), np.cosh(c)
    return k, s, k / 2, s / 6


def _recip(c):
    return 1 / c, -1 / c**2, 1 / c**3, -1 / c**4


def _check_positive(name):
    def check(c):
        if np.any(~(c > 0)):
            raise DomainError(f"{name} requires a positive argument, got {np.min(c)!r}")
    return check


def _check_tan(c):
    if np.any(np.abs(np.cos(c)) < DIV_EPS):
        raise DomainError("tan is singular at the base point")


def _check_recip(c):
    if np.any(np.abs(c) < DIV_EPS):
        raise DomainError("division by a jet with (near) zero constant coefficient")


def _check_finite(c):
    pass


FUNCTIONS = {
    "sin": (_sin, _check_finite),
    "cos": (_cos, _check_finite),
    "exp": (_exp, _check_finite),
    "ln": (_ln, _check_positive("ln")),
    "sqrt": (_sqrt, _check_positive("sqrt")),
    "tan": (_tan, _check_tan),
    "sinh": (_sinh, _check_finite),
    "cosh": (_cosh, _check_finite),
    "recip": (_recip, _check_recip),
}


def _compose_coeffs(a, fk):
    if a.shape:
        fk = np.stack([np.broadcast_to(np.asarray(x, dtype=float), a.shape) for x in fk], axis=-1)
    else:
        fk = np.array(fk, dtype=float)
    if not np.all(np.isfinite(fk)):
        raise DomainError("function value overflowed")
    h = a.coeffs.copy()
    h[..., 0] = 0.0
    out = _kernels.horner(_flat(h), np.ascontiguousarray(fk.reshape(-1, 4)), a.order)
    return Jet3(out.reshape(a.shape + (NCOEF,)), a.order)


def _pow_coeffs(c, p):
    integral = float(p).is_integer()
    if not integral and np.any(~(c > 0)):
        raise DomainError(f"non-integer power {p!r} of a non-positive base")
    if p < 0 and np.any(np.abs(c) < DIV_EPS):
        raise DomainError(f"negative power {p!r} of a zero base")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = []
        falling = 1.0
        for k in range(4):
            if k > 0:
                falling *= (p - (k - 1)) / k
            # falling == binomial(p, k); the coefficient is binomial * c^(p-k)
            if falling == 0.0:
                out.append(np.zeros_like(c))
            else:
                out.append(falling * np.power(c, p - k))
    return out


def jet_compose(f, a, p=None):
    """Apply the univariate function ``f`` to the jet ``a`` through third order.

    ``f`` is one of ``sin cos exp ln sqrt tan sinh cosh recip`` or
    ``"pow_const"`` together with the real exponent ``p``.
    """
    c = a.coeffs[..., 0]
    if f == "pow_const":
        if p is None:
            raise ValueError("pow_const needs an exponent")
        return _compose_coeffs(a, _pow_coeffs(c, float(p)))
    try:
        taylor, check = FUNCTIONS[f]
    except KeyError:
        raise ValueError(f"unsupported function {f!r}") from None
    check(c)
    with np.errstate(over="ignore"):
        fk = taylor(c)
    return _compose_coeffs(a, fk)


def jet_pow(a, p):
    """``a**p`` for a real constant ``p``; small non-negative integers multiply exactly."""
    p = float(p)
    if p.is_integer() and 0 <= p <= 8:
        out = jet_const(1.0, a.order) if not a.shape else Jet3(
            np.broadcast_to(jet_const(1.0).coeffs, a.shape + (NCOEF,)).copy(), a.order)
        base = a
        n = int(p)
        while n:
            if n & 1:
                out = jet_mul(out, base)
            n >>= 1
            if n:
                base = jet_mul(base, base)
        return out
    return jet_compose("pow_const", a, p)


def directional_derivative(field, direction):
    """Derivative of a jet field along a parameter-space direction ``(X^u, X^v)``.

    Components of ``direction`` may be plain reals or jets; jets make the
    result differentiable again, which is how nested derivatives such as
    ``D_w(D_w w)`` are formed.  The result has order one less than ``field``.
    """
    du, dv = direction
    return du * field.d_u() + dv * field.d_v()
