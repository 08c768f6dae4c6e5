"""Linear algebra of Minkowski 3-space with signature (-, +, +).

Functions accept plain length-3 arrays; :func:`mdot` and :func:`transversal`
also accept jet-valued vectors (a :class:`~lightlike.jets.Jet3` of shape
``(3,)``), which is how the frame fields stay differentiable.
"""
import math

import numpy as np

from .errors import DegenerateInput
from .jets import Jet3

SIGNATURE = np.array([-1.0, 1.0, 1.0])
# Time reflection paired with a sign flip: g(R x, x) = -|x|^2 for every x.
_REFLECT = np.array([1.0, -1.0, -1.0])

NULL_TOL = 1e-9


def vec(x0, x1, x2):
    return np.array([x0, x1, x2], dtype=float)


def mdot(a, b):
    """g(a, b) = -a0 b0 + a1 b1 + a2 b2."""
    if isinstance(a, Jet3) or isinstance(b, Jet3):
        p = (a * b).coeffs
        return Jet3(-p[0] + p[1] + p[2], min(_order(a), _order(b)))
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def _order(x):
    return x.order if isinstance(x, Jet3) else 3


def mnorm_sq(a):
    return mdot(a, a)


def causal_character(a, tol=1e-9):
    """Classify ``a`` as ``zero``, ``null``, ``spacelike`` or ``timelike``."""
    a = np.asarray(a, dtype=float)
    n2 = float(a @ a)
    if np.sqrt(n2) <= tol:
        return "zero"
    q = mdot(a, a)
    if abs(q) <= tol * n2:
        return "null"
    return "spacelike" if q > 0 else "timelike"


_EVEN = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
_ODD = ((0, 2, 1), (2, 1, 0), (1, 0, 2))


def _term(a, b, c, p):
    x, y, z = sorted((a[p[0]], b[p[1]], c[p[2]]))
    return x * y * z


def triple_product(a, b, c):
    """Coordinate determinant of the rows ``a, b, c`` (signature independent).

    Each of the six Leibniz terms is multiplied in a canonical order and the
    terms are summed with correct rounding, so permuting the arguments
    changes at most the sign of the result, exactly.
    """
    a, b, c = ([float(t) for t in np.asarray(x, dtype=float)] for x in (a, b, c))
    return math.fsum([_term(a, b, c, p) for p in _EVEN] + [-_term(a, b, c, p) for p in _ODD])


def cross(a, b):
    """Euclidean cross product, used only as a linear-dependence test."""
    return np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def _values(x):
    return x.value if isinstance(x, Jet3) else np.asarray(x, dtype=float)


def _reflect(x):
    if isinstance(x, Jet3):
        return Jet3(x.coeffs * _REFLECT[:, None], x.order)
    return np.asarray(x, dtype=float) * _REFLECT


def _candidates(xi, w):
    yield _reflect(xi)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        yield e


def transversal(xi, w):
    """The null transversal N with g(N, xi) = 1 and g(N, w) = 0.

    Works on arrays and on jet-valued vectors alike.  V is taken
    g-orthogonal to w and paired non-trivially with xi, then::

        N = (V - g(V, V) / (2 g(V, xi)) * xi) / g(V, xi)
    """
    xv, wv = _values(xi), _values(w)
    xn = float(np.linalg.norm(xv))
    wn = float(np.linalg.norm(wv))
    if xn == 0.0 or abs(mdot(xv, xv)) > NULL_TOL * xn * xn:
        raise DegenerateInput(f"xi must be a nonzero null vector, got {xv}")
    ww = mdot(wv, wv)
    if ww <= NULL_TOL * wn * wn:
        raise DegenerateInput(f"w must be spacelike, got {wv}")
    if abs(mdot(xv, wv)) > NULL_TOL * xn * wn:
        raise DegenerateInput("w must be g-orthogonal to xi")
    for cand in _candidates(xi, w):
        V = cand - (mdot(cand, w) / mdot(w, w)) * w
        pair = mdot(V, xi)
        pv = pair.value if isinstance(pair, Jet3) else pair
        vn = float(np.linalg.norm(_values(V)))
        if abs(pv) > 1e-8 * vn * xn:
            return (V - (mdot(V, V) / (2.0 * pair)) * xi) / pair
    raise DegenerateInput("no transversal candidate pairs with xi")  # pragma: no cover


def solve_transversal(xi, w):
    """Array front end of :func:`transversal`."""
    return np.asarray(transversal(np.asarray(xi, dtype=float), np.asarray(w, dtype=float)))
