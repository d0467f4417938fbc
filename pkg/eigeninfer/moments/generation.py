"""Symbolic generation of moment relations by formal series algebra.

Moment generating functions are written in the variable ``x = 1/z``:
``M(x) = sum_k alpha_k x^k`` for normal moments and ``D(x) = sum_k alpha_-k x^k`` for dual
moments. The conformal mapping between the sample covariance and the true covariance reads
``M_S(x) = M_Sigma(x (1 + r M_S(x)))`` and its dual counterpart
``D_S(x) = D_Sigma(x / (1 - r - r D_S(x)))``. Every tower below is a reversion or a fixed
point of one of these two equations. Double moments come from the mixed log-derivative of
the difference quotient of ``x (1 + M(x))``.

All coefficients live in sympy polynomial rings over the rationals, so the generated
relations are exact.
"""

import logging
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from eigeninfer.moments.series import FormalSeries

LOGGER = logging.getLogger(__name__)


def moment_names(prefix, first, last):
    """Get variable names ``prefix<first>..prefix<last>``."""
    return [f'{prefix}{index}' for index in range(first, last + 1)]


def _polynomial_ring(names):
    poly_ring, *generators = ring(','.join(names), QQ)
    return poly_ring, generators


def _rational(coefficient):
    return Fraction(int(coefficient.numerator), int(coefficient.denominator))


def polynomial_terms(polynomial):
    """Convert a ring element into ``[(exponents, Fraction)]`` terms."""
    return [
        (tuple(int(exponent) for exponent in monomial), _rational(coefficient))
        for monomial, coefficient in polynomial.terms()
    ]


def forward_tower(order):
    """Moments of ``S`` as polynomials in ``r`` and the moments of ``Sigma``.

    With ``y = x (1 + r M_S(x))`` the mapping inverts to ``x = y / (1 + r M_Sigma(y))``,
    which is reverted and composed with ``M_Sigma``.

    Returns:
        tuple[list, list]:
            Variable names ``(r, a1..aK)`` and the polynomials for ``alpha_1^S..alpha_K^S``.
    """
    names = ['r'] + moment_names('a', 1, order)
    poly_ring, (r, *alphas) = _polynomial_ring(names)
    sigma = FormalSeries([poly_ring.zero] + alphas, order)

    x_of_y = (sigma * r + 1).inverse().shift()
    s_moments = sigma.compose(x_of_y.reversion())
    return names, [s_moments[k] for k in range(1, order + 1)]


def backward_tower(order):
    """Moments of ``Sigma`` as polynomials in ``r`` and the moments of ``S``."""
    names = ['r'] + moment_names('a', 1, order)
    poly_ring, (r, *alphas) = _polynomial_ring(names)
    sample = FormalSeries([poly_ring.zero] + alphas, order)

    y_of_x = (sample * r + 1).shift()
    sigma_moments = sample.compose(y_of_x.reversion())
    return names, [sigma_moments[k] for k in range(1, order + 1)]


def dual_forward_tower(order):
    """Dual moments of ``S`` as polynomials in ``q = 1/(1-r)`` and dual moments of ``Sigma``.

    Substituting ``u = q x`` turns ``x = Z (1 - r - r D_Sigma(Z))`` into
    ``u = Z (1 - (q - 1) D_Sigma(Z))``, whose linear coefficient is one, so the relation
    stays polynomial in ``q``.
    """
    names = ['q'] + moment_names('a', 1, order)
    poly_ring, (q, *alphas) = _polynomial_ring(names)
    sigma = FormalSeries([poly_ring.zero] + alphas, order)

    u_of_z = (sigma * (1 - q) + 1).shift()
    s_moments = sigma.compose(u_of_z.reversion()).scale_variable(q)
    return names, [s_moments[k] for k in range(1, order + 1)]


def dual_backward_tower(order):
    """Dual moments of ``Sigma`` as polynomials in ``r`` and dual moments of ``S``.

    The inner map ``x(Z)`` solves ``x = Z (1 - r - r D_S(x))``; each fixed point pass
    settles one more order.
    """
    names = ['r'] + moment_names('a', 1, order)
    poly_ring, (r, *alphas) = _polynomial_ring(names)
    sample = FormalSeries([poly_ring.zero] + alphas, order)

    inner = FormalSeries([poly_ring.zero], order)
    for _ in range(order):
        inner = (sample.compose(inner) * (-r) + (1 - r)).shift()

    sigma_moments = sample.compose(inner)
    return names, [sigma_moments[k] for k in range(1, order + 1)]


def double_moment_series(dim):
    """Mixed log-derivative of the two-point difference quotient.

    The difference quotient ``(g(y) - g(x)) / (y - x)`` of ``g(x) = x (1 + M(x))`` has
    ``alpha_{a+b}`` as the coefficient of ``x^a y^b``. The coefficient of
    ``x^(i-1) y^(j-1)`` of its mixed log-derivative is the double moment ``alpha_{i,j}``.

    Returns:
        tuple[list, FormalSeries]:
            Variable names ``a1..a(2 dim)`` and a series in ``x`` whose coefficients are
            series in ``y``.
    """
    names = moment_names('a', 1, 2 * dim)
    poly_ring, alphas = _polynomial_ring(names)
    alpha = [poly_ring.one] + alphas
    rows = [
        FormalSeries([alpha[a + b] for b in range(dim + 1)], dim)
        for a in range(dim + 1)
    ]
    quotient = FormalSeries(rows, dim)
    mixed = quotient.log_derivative().map_coefficients(lambda row: row.derivative())
    return names, mixed


def double_moments(dim):
    """Double moments ``alpha_{i,j}``, ``i <= j <= dim``, as polynomials in ``a1..a(2 dim)``."""
    names, mixed = double_moment_series(dim)
    relations = {}
    for i in range(1, dim + 1):
        for j in range(i, dim + 1):
            relations[(i, j)] = mixed[i - 1][j - 1]

    return names, relations


def dual_double_moments(dim):
    """Double dual moments as numerators over powers of ``t2``.

    The dual two-point function has the same structure as the normal one with
    ``alpha_n`` replaced by ``t(n+2) / t2``, where ``t_k`` is the dual moment of order
    ``k``. Every ``alpha_{i,j}`` is weighted homogeneous of weight ``i + j``, so after
    multiplying by ``t2^(i+j)`` each monomial of degree ``d`` gains ``t2^(i+j-d)``.

    Returns:
        tuple[list, dict]:
            Variable names ``t2..t(2 dim + 2)`` and, per ``(i, j)``, a pair of numerator
            terms and the power of ``t2`` in the denominator.
    """
    _, normal = double_moments(dim)
    names = moment_names('t', 2, 2 * dim + 2)
    relations = {}
    for (i, j), polynomial in normal.items():
        weight = i + j
        terms = []
        for exponents, coefficient in polynomial_terms(polynomial):
            degree = sum(exponents)
            terms.append(((weight - degree, ) + exponents, coefficient))

        relations[(i, j)] = (terms, weight)

    return names, relations
