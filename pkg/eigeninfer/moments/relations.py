"""Exact relation tables between spectral moments."""

import enum
import functools
import logging
import re
import time
from fractions import Fraction

import numpy as np

from eigeninfer.errors import DegenerateDenominatorError
from eigeninfer.moments import generation

LOGGER = logging.getLogger(__name__)


class RelationKind(enum.Enum):
    """Families of generated moment relations."""

    FORWARD_TOWER = 'forward-tower'
    BACKWARD_TOWER = 'backward-tower'
    DUAL_FORWARD = 'dual-forward'
    DUAL_BACKWARD = 'dual-backward'
    DOUBLE = 'double'
    DUAL_DOUBLE = 'dual-double'


RELATION_NAMES = {
    RelationKind.FORWARD_TOWER: 'alpha_S',
    RelationKind.BACKWARD_TOWER: 'alpha_Sigma',
    RelationKind.DUAL_FORWARD: 'alpha_S',
    RelationKind.DUAL_BACKWARD: 'alpha_Sigma',
    RelationKind.DOUBLE: 'alpha',
    RelationKind.DUAL_DOUBLE: 'alpha~',
}
DUAL_TOWERS = (RelationKind.DUAL_FORWARD, RelationKind.DUAL_BACKWARD)
LINE_PATTERN = re.compile(
    r'^(?P<name>[^\[\s]+)\[(?P<key>[-\d,]+)\] = (?P<body>.*?)'
    r'(?: / (?P<denominator>\w+)\^(?P<power>\d+))?$'
)
TERM_PATTERN = re.compile(r'\((?P<coefficient>-?\d+(?:/\d+)?), \[(?P<exponents>[\d,]*)\]\)')


class Relation:
    """Polynomial in the table variables, optionally divided by a power of one variable.

    Args:
        terms (list[tuple]):
            ``(exponents, coefficient)`` pairs with exact ``Fraction`` coefficients.
        denominator (tuple or None):
            ``(variable index, power)`` of the denominator monomial, if any.
    """

    def __init__(self, terms, denominator=None):
        self.terms = tuple(
            (tuple(exponents), Fraction(coefficient))
            for exponents, coefficient in terms
            if coefficient != 0
        )
        self.denominator = denominator

    def as_dict(self):
        """Get the numerator as a ``{exponents: coefficient}`` dict."""
        return dict(self.terms)

    def evaluate_exact(self, values):
        """Evaluate with exact arithmetic.

        Args:
            values (list):
                One ``Fraction`` (or ``int``) per table variable.

        Returns:
            Fraction
        """
        total = Fraction(0)
        for exponents, coefficient in self.terms:
            monomial = Fraction(1)
            for value, exponent in zip(values, exponents):
                if exponent:
                    monomial *= Fraction(value) ** exponent

            total += coefficient * monomial

        if self.denominator is not None:
            index, power = self.denominator
            if values[index] == 0:
                raise DegenerateDenominatorError('Relation denominator is zero.', 0)

            total /= Fraction(values[index]) ** power

        return total

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented

        return self.as_dict() == other.as_dict() and self.denominator == other.denominator

    def __len__(self):
        return len(self.terms)


def _term_arrays(terms, width):
    exponents = np.array([exponents for exponents, _ in terms], dtype=np.int64)
    coefficients = np.array([coefficient for _, coefficient in terms], dtype=float)
    return exponents.reshape(len(terms), width), coefficients


def _sum_terms(arrays, values):
    exponents, coefficients = arrays
    return float(np.sum(coefficients * np.prod(values ** exponents, axis=-1)))


def _format_coefficient(coefficient):
    if coefficient.denominator == 1:
        return str(coefficient.numerator)

    return f'{coefficient.numerator}/{coefficient.denominator}'


class RelationTable:
    """Immutable table of exact moment relations.

    Args:
        kind (RelationKind):
            Which family of relations the table holds.
        order (int):
            Order the table was generated to.
        variables (list[str]):
            Names of the input variables, in the order values are passed.
        relations (dict):
            Mapping of key (``k`` for towers, ``(i, j)`` for double moments) to
            ``Relation``.
    """

    def __init__(self, kind, order, variables, relations):
        self.kind = kind
        self.order = order
        self.variables = tuple(variables)
        self._relations = dict(relations)
        self._compiled = None
        self._triangular = None

    @property
    def keys(self):
        """list: Relation keys in table order."""
        return list(self._relations)

    def __getitem__(self, key):
        return self._relations[key]

    def __iter__(self):
        return iter(self._relations.items())

    def __len__(self):
        return len(self._relations)

    def __eq__(self, other):
        if not isinstance(other, RelationTable):
            return NotImplemented

        return (
            self.kind == other.kind
            and self.order == other.order
            and self.variables == other.variables
            and self._relations == other._relations
        )

    def _compile(self):
        if self._compiled is None:
            exponents = []
            coefficients = []
            starts = []
            denominators = []
            width = len(self.variables)
            for relation in self._relations.values():
                starts.append(len(coefficients))
                terms = relation.terms or (((0, ) * width, Fraction(0)), )
                for term_exponents, coefficient in terms:
                    exponents.append(term_exponents)
                    coefficients.append(float(coefficient))

                denominators.append(relation.denominator)

            self._compiled = (
                np.array(exponents, dtype=np.int64),
                np.array(coefficients, dtype=float),
                np.array(starts, dtype=np.intp),
                denominators,
            )

        return self._compiled

    def evaluate(self, values, tolerance=0.0):
        """Evaluate every relation in floating point.

        Args:
            values (list-like):
                One value per table variable, or a 2-D array with one row per point.
            tolerance (float):
                Denominators with absolute value at or below this raise an error.

        Returns:
            numpy.ndarray:
                Relation values in table order (one row per point for 2-D input).

        Raises:
            DegenerateDenominatorError:
                If a denominator vanishes within ``tolerance``.
        """
        exponents, coefficients, starts, denominators = self._compile()
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != len(self.variables):
            raise ValueError(
                f'Expected {len(self.variables)} values for {self.variables}, '
                f'got {values.shape[-1]}.')

        monomials = np.prod(values[..., None, :] ** exponents, axis=-1)
        result = np.add.reduceat(monomials * coefficients, starts, axis=-1)
        for position, denominator in enumerate(denominators):
            if denominator is None:
                continue

            index, power = denominator
            base = values[..., index]
            if np.any(np.abs(base) <= tolerance):
                raise DegenerateDenominatorError(
                    f'Denominator {self.variables[index]} vanishes.', base)

            result[..., position] = result[..., position] / base ** power

        return result

    def evaluate_exact(self, values):
        """Evaluate every relation with exact rational arithmetic."""
        return [relation.evaluate_exact(values) for relation in self._relations.values()]

    def _compile_triangular(self):
        if self._triangular is None:
            width = len(self.variables)
            offset = width - len(self._relations)
            split = []
            for position, relation in enumerate(self._relations.values()):
                index = offset + position
                rest = []
                lead = []
                for exponents, coefficient in relation.terms:
                    if exponents[index] > 1 or any(exponents[index + 1:]):
                        raise ValueError(
                            f'{self.kind.value} relations are not triangular in '
                            f'{self.variables[index]}.')

                    if exponents[index]:
                        reduced = exponents[:index] + (0, ) + exponents[index + 1:]
                        lead.append((reduced, float(coefficient)))
                    else:
                        rest.append((exponents, float(coefficient)))

                split.append((index, _term_arrays(rest, width), _term_arrays(lead, width)))

            self._triangular = split

        return self._triangular

    def solve_triangular(self, parameters, targets):
        """Invert the table numerically, one relation at a time.

        Relation ``k`` may only involve the first ``k`` moment variables and must be
        affine in the ``k``-th one, as every forward tower is. Each step solves
        ``target_k = rest_k + lead_k * a_k`` with the moments found so far, which stays
        at the rounding level of the targets where the expanded inverse polynomials
        cancel catastrophically.

        Args:
            parameters (list-like):
                Values of the leading non-moment variables, such as ``r`` or ``q``.
            targets (list-like):
                One value per relation.

        Returns:
            numpy.ndarray:
                The moment variables that reproduce ``targets``.

        Raises:
            DegenerateDenominatorError:
                If a leading coefficient vanishes.
        """
        parameters = np.atleast_1d(np.asarray(parameters, dtype=float))
        targets = np.asarray(targets, dtype=float)
        if len(parameters) + len(targets) != len(self.variables):
            raise ValueError(
                f'Expected {len(self.variables)} values for {self.variables}, '
                f'got {len(parameters) + len(targets)}.')

        values = np.concatenate([parameters, np.zeros(len(targets))])
        for target, (index, rest, lead) in zip(targets, self._compile_triangular()):
            coefficient = _sum_terms(lead, values)
            if coefficient == 0:
                raise DegenerateDenominatorError(
                    f'Leading coefficient of {self.variables[index]} vanishes.', coefficient)

            values[index] = (target - _sum_terms(rest, values)) / coefficient

        return values[len(parameters):]

    def _format_key(self, key):
        if isinstance(key, tuple):
            return ','.join(str(index) for index in key)

        return str(-key if self.kind in DUAL_TOWERS else key)

    def to_text(self):
        """Serialize the table, one relation per line.

        Each line reads ``name[key] = (coefficient, [exponents]) + ...`` with exact
        integer or ``p/q`` coefficients and, for double dual moments, a trailing
        ``/ t2^power`` denominator.
        """
        lines = [
            f'# kind: {self.kind.value}',
            f'# order: {self.order}',
            f'# variables: {" ".join(self.variables)}',
        ]
        name = RELATION_NAMES[self.kind]
        for key, relation in self._relations.items():
            terms = ' + '.join(
                f'({_format_coefficient(coefficient)}, [{",".join(map(str, exponents))}])'
                for exponents, coefficient in relation.terms
            ) or '0'
            line = f'{name}[{self._format_key(key)}] = '
            if relation.denominator is None:
                line += terms
            else:
                index, power = relation.denominator
                line += f'({terms}) / {self.variables[index]}^{power}'

            lines.append(line)

        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text):
        """Load a table from the text produced by ``to_text``."""
        header = {}
        relations = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue

            if line.startswith('#'):
                field, _, value = line[1:].partition(':')
                header[field.strip()] = value.strip()
                continue

            match = LINE_PATTERN.match(line)
            if match is None:
                raise ValueError(f'Invalid relation line: {line!r}')

            variables = header['variables'].split()
            indices = tuple(abs(int(index)) for index in match.group('key').split(','))
            key = indices[0] if len(indices) == 1 else indices
            terms = [
                (
                    tuple(int(value) for value in term.group('exponents').split(',') if value),
                    Fraction(term.group('coefficient')),
                )
                for term in TERM_PATTERN.finditer(match.group('body'))
            ]
            denominator = None
            if match.group('denominator'):
                denominator = (
                    variables.index(match.group('denominator')),
                    int(match.group('power')),
                )

            relations[key] = Relation(terms, denominator)

        return cls(
            RelationKind(header['kind']),
            int(header['order']),
            header['variables'].split(),
            relations,
        )

    def save(self, path):
        """Write the text serialization to ``path``."""
        with open(path, 'w', encoding='utf-8') as output:
            output.write(self.to_text())

    @classmethod
    def load(cls, path):
        """Read a table written by ``save``."""
        with open(path, encoding='utf-8') as input_file:
            return cls.from_text(input_file.read())


def _tower_table(kind, order, builder):
    names, polynomials = builder(order)
    relations = {
        k: Relation(generation.polynomial_terms(polynomial))
        for k, polynomial in enumerate(polynomials, start=1)
    }
    return RelationTable(kind, order, names, relations)


def _double_table(order):
    names, polynomials = generation.double_moments(order)
    relations = {
        key: Relation(generation.polynomial_terms(polynomial))
        for key, polynomial in polynomials.items()
    }
    return RelationTable(RelationKind.DOUBLE, order, names, relations)


def _dual_double_table(order):
    names, numerators = generation.dual_double_moments(order)
    relations = {
        key: Relation(terms, (0, power))
        for key, (terms, power) in numerators.items()
    }
    return RelationTable(RelationKind.DUAL_DOUBLE, order, names, relations)


BUILDERS = {
    RelationKind.FORWARD_TOWER: functools.partial(
        _tower_table, RelationKind.FORWARD_TOWER, builder=generation.forward_tower),
    RelationKind.BACKWARD_TOWER: functools.partial(
        _tower_table, RelationKind.BACKWARD_TOWER, builder=generation.backward_tower),
    RelationKind.DUAL_FORWARD: functools.partial(
        _tower_table, RelationKind.DUAL_FORWARD, builder=generation.dual_forward_tower),
    RelationKind.DUAL_BACKWARD: functools.partial(
        _tower_table, RelationKind.DUAL_BACKWARD, builder=generation.dual_backward_tower),
    RelationKind.DOUBLE: _double_table,
    RelationKind.DUAL_DOUBLE: _dual_double_table,
}


@functools.lru_cache(maxsize=None)
def _generate(kind, order):
    start = time.perf_counter()
    table = BUILDERS[kind](order)
    LOGGER.debug('Generated %s relations to order %s in %.3f s',
                 kind.value, order, time.perf_counter() - start)
    return table


def generate_relations(kind, order):
    """Generate the exact relation table of the given kind.

    Tables are cached, so repeated calls return the same immutable object.

    Args:
        kind (RelationKind or str):
            One of ``forward-tower``, ``backward-tower``, ``dual-forward``,
            ``dual-backward``, ``double`` or ``dual-double``.
        order (int):
            Tower order ``K`` or double moment matrix dimension ``k``.

    Returns:
        RelationTable
    """
    if not isinstance(kind, RelationKind):
        kind = RelationKind(str(kind).lower().replace('_', '-'))

    if int(order) < 1:
        raise ValueError('Relations need an order of at least 1.')

    return _generate(kind, int(order))
