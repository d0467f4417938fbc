"""Truncated formal power series over an exact coefficient ring."""

import numbers
from fractions import Fraction


def _is_zero(value):
    if isinstance(value, FormalSeries):
        return all(_is_zero(coefficient) for coefficient in value.coefficients)

    return value == 0


def _unit_inverse(value):
    """Invert a coefficient that is a unit of its ring.

    Polynomial coefficients are only invertible when they equal ``1`` or ``-1``; plain
    numbers are inverted exactly and nested series recursively.
    """
    if isinstance(value, FormalSeries):
        return value.inverse()

    if value == 1 or value == -1:
        return value

    if isinstance(value, numbers.Integral):
        return Fraction(1, int(value))

    if isinstance(value, numbers.Number) and value != 0:
        return 1 / value

    raise ValueError(f'Coefficient {value!r} is not a unit of its ring.')


class FormalSeries:
    """Power series ``c_0 + c_1 x + ... + c_K x^K + O(x^{K+1})``.

    Coefficients can be any commutative ring elements supporting ``+``, ``-`` and ``*``:
    sympy polynomial ring elements for exact symbolic work, ``Fraction`` or ``float`` for
    numbers, or ``FormalSeries`` themselves for bivariate series. Every operation is exact
    up to the order ``K``; results are truncated to the smallest order involved.

    Args:
        coefficients (list):
            Coefficients ``c_0, c_1, ...``. Missing ones up to ``order`` are zero.
        order (int or None):
            Truncation order ``K``. Defaults to ``len(coefficients) - 1``.
    """

    def __init__(self, coefficients, order=None):
        coefficients = list(coefficients)
        if not coefficients:
            raise ValueError('A series needs at least one coefficient.')

        if order is None:
            order = len(coefficients) - 1

        if order < 0:
            raise ValueError('The series order must be non-negative.')

        zero = coefficients[0] * 0
        coefficients = coefficients[:order + 1]
        coefficients += [zero] * (order + 1 - len(coefficients))
        self._coefficients = tuple(coefficients)

    @classmethod
    def constant(cls, value, order):
        """Build the series ``value + O(x^{order+1})``."""
        return cls([value], order)

    @classmethod
    def variable(cls, one, order):
        """Build the series ``x + O(x^{order+1})`` using ``one`` as the unit coefficient."""
        return cls([one * 0, one], order)

    @property
    def order(self):
        """int: Truncation order ``K``."""
        return len(self._coefficients) - 1

    @property
    def coefficients(self):
        """tuple: Coefficients ``c_0..c_K``."""
        return self._coefficients

    def __getitem__(self, index):
        return self._coefficients[index]

    def __len__(self):
        return len(self._coefficients)

    def _zero(self):
        return self._coefficients[0] * 0

    def truncate(self, order):
        """Drop every coefficient above ``order``."""
        return FormalSeries(self._coefficients, min(order, self.order))

    def __add__(self, other):
        if isinstance(other, FormalSeries):
            order = min(self.order, other.order)
            return FormalSeries(
                [self[n] + other[n] for n in range(order + 1)], order)

        coefficients = list(self._coefficients)
        coefficients[0] = coefficients[0] + other
        return FormalSeries(coefficients, self.order)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-coefficient for coefficient in self._coefficients], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries(
                [coefficient * other for coefficient in self._coefficients], self.order)

        order = min(self.order, other.order)
        product = []
        for n in range(order + 1):
            total = self[0] * other[n]
            for i in range(1, n + 1):
                if _is_zero(self[i]):
                    continue

                total = total + self[i] * other[n - i]

            product.append(total)

        return FormalSeries(product, order)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Integral) or exponent < 0:
            raise ValueError('Only non-negative integer powers are supported.')

        result = FormalSeries.constant(self[0] * 0 + 1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base

            exponent >>= 1
            if exponent:
                base = base * base

        return result

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented

        return self.order == other.order and all(
            _is_zero(a - b) for a, b in zip(self._coefficients, other._coefficients))

    def shift(self):
        """Multiply by the series variable, keeping the order."""
        return FormalSeries((self._zero(),) + self._coefficients[:-1], self.order)

    def scale_variable(self, factor):
        """Substitute ``x -> factor * x``, i.e. multiply ``c_n`` by ``factor^n``."""
        coefficients = []
        power = None
        for n, coefficient in enumerate(self._coefficients):
            if n == 0:
                coefficients.append(coefficient)
                power = factor
            else:
                coefficients.append(coefficient * power)
                power = power * factor

        return FormalSeries(coefficients, self.order)

    def map_coefficients(self, function):
        """Apply ``function`` to every coefficient."""
        return FormalSeries([function(c) for c in self._coefficients], self.order)

    def derivative(self):
        """Differentiate term by term. The result is known up to order ``K - 1``."""
        if self.order == 0:
            return FormalSeries([self._zero()], 0)

        return FormalSeries(
            [self[n] * n for n in range(1, self.order + 1)], self.order - 1)

    def inverse(self):
        """Multiplicative inverse. The constant coefficient must be a unit.

        Raises:
            ValueError:
                If the constant coefficient is not invertible in its ring.
        """
        leading = _unit_inverse(self[0])
        inverse = [leading]
        for n in range(1, self.order + 1):
            total = self[1] * inverse[n - 1]
            for i in range(2, n + 1):
                if _is_zero(self[i]):
                    continue

                total = total + self[i] * inverse[n - i]

            inverse.append(-(leading * total))

        return FormalSeries(inverse, self.order)

    def log_derivative(self):
        """Logarithmic derivative ``f' / f``, known up to order ``K - 1``."""
        return self.derivative() * self.inverse()

    def compose(self, inner):
        """Evaluate ``self(inner(x))`` by Horner's scheme.

        Args:
            inner (FormalSeries):
                Series without constant term.

        Raises:
            ValueError:
                If ``inner`` has a non-zero constant term.
        """
        if not _is_zero(inner[0]):
            raise ValueError('Composition requires an inner series without constant term.')

        order = min(self.order, inner.order)
        result = FormalSeries.constant(self[order], order)
        for n in range(order - 1, -1, -1):
            result = result * inner + self[n]

        return result

    def reversion(self):
        """Functional inverse ``g`` with ``self(g(x)) = x``.

        The series must have no constant term and a unit linear coefficient. The
        coefficients of ``g`` are found one order at a time from the powers of the
        partial inverse, which stay fixed once computed.

        Raises:
            ValueError:
                If the constant term is not zero or the linear term is not invertible.
        """
        if not _is_zero(self[0]):
            raise ValueError('Reversion requires a series without constant term.')

        if self.order == 0:
            raise ValueError('Reversion requires at least a linear term.')

        order = self.order
        zero = self._zero()
        leading = _unit_inverse(self[1])
        # powers[j][n] is the x^n coefficient of g^j
        coefficients = [zero, leading]
        powers = [None, [zero, leading]]
        for j in range(2, order + 1):
            powers.append([zero] * (j) + [leading * powers[j - 1][j - 1]])

        for n in range(2, order + 1):
            for j in range(2, n + 1):
                if len(powers[j]) > n:
                    continue

                total = zero
                for i in range(1, n - j + 2):
                    total = total + coefficients[i] * powers[j - 1][n - i]

                powers[j].append(total)

            total = zero
            for j in range(2, n + 1):
                if _is_zero(self[j]):
                    continue

                total = total + self[j] * powers[j][n]

            coefficient = -(leading * total)
            coefficients.append(coefficient)
            powers[1].append(coefficient)

        return FormalSeries(coefficients, order)

    def __repr__(self):
        terms = ', '.join(str(coefficient) for coefficient in self._coefficients)
        return f'FormalSeries([{terms}], order={self.order})'
