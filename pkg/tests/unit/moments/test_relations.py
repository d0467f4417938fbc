"""Tests for the eigeninfer.moments.relations module."""

import math
import os
from fractions import Fraction

import numpy as np
import pytest
import sympy

from eigeninfer.errors import DegenerateDenominatorError
from eigeninfer.moments.relations import (
    Relation, RelationKind, RelationTable, generate_relations)

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', '..', 'data')


def _load_fixture(filename):
    relations = {}
    with open(os.path.join(DATA_DIR, filename), encoding='utf-8') as fixture:
        for line in fixture:
            key, _, expression = line.partition(':')
            i, j = (int(index) for index in key.split(','))
            relations[(i, j)] = sympy.sympify(expression.strip())

    return relations


def _as_expression(relation, variables):
    symbols = sympy.symbols(variables)
    numerator = sympy.Integer(0)
    for exponents, coefficient in relation.terms:
        monomial = sympy.Rational(coefficient.numerator, coefficient.denominator)
        for symbol, exponent in zip(symbols, exponents):
            monomial *= symbol ** exponent

        numerator += monomial

    if relation.denominator is None:
        return numerator

    index, power = relation.denominator
    return numerator / symbols[index] ** power


def _narayana_moment(k, r):
    return sum(
        math.comb(k, j) * math.comb(k, j - 1) / k * r ** (j - 1)
        for j in range(1, k + 1)
    )


class TestRelation:

    def test_evaluate_exact(self):
        """``2 a^2 b - 1/2`` at ``(3, 1/2)`` is ``17/2``."""
        # Setup
        relation = Relation([((2, 1), Fraction(2)), ((0, 0), Fraction(-1, 2))])

        # Run
        result = relation.evaluate_exact([3, Fraction(1, 2)])

        # Assert
        assert result == Fraction(17, 2)

    def test_evaluate_exact_zero_denominator(self):
        # Setup
        relation = Relation([((1, 1), 1)], denominator=(0, 2))

        # Run and Assert
        with pytest.raises(DegenerateDenominatorError):
            relation.evaluate_exact([0, 1])

    def test___init___drops_zero_terms(self):
        # Run
        relation = Relation([((1, ), 0), ((2, ), 3)])

        # Assert
        assert len(relation) == 1
        assert relation.as_dict() == {(2, ): Fraction(3)}


class TestRelationTable:

    def test_double_table_matches_fixture(self):
        """Every generated double moment up to ``(5, 5)`` equals the tabulated one."""
        # Setup
        expected = _load_fixture('double_moments.txt')

        # Run
        table = generate_relations(RelationKind.DOUBLE, 5)

        # Assert
        assert sorted(table.keys) == sorted(expected)
        for key, relation in table:
            generated = _as_expression(relation, table.variables)
            assert sympy.expand(generated - expected[key]) == 0, key

    def test_dual_double_table_matches_fixture(self):
        """Every generated double dual moment up to ``(5, 5)`` equals the tabulated one."""
        # Setup
        expected = _load_fixture('dual_double_moments.txt')

        # Run
        table = generate_relations(RelationKind.DUAL_DOUBLE, 5)

        # Assert
        assert table.variables == tuple(f't{index}' for index in range(2, 13))
        t2 = sympy.Symbol('t2')
        for key, relation in table:
            assert relation.denominator == (0, sum(key))
            numerator = _as_expression(Relation(relation.terms), table.variables)
            cleared = sympy.expand(expected[key] * t2 ** sum(key))
            assert sympy.expand(numerator - cleared) == 0, key

    def test_double_coefficients_of_second_entry(self):
        """The ``(2, 2)`` entry has coefficients ``-6, 16, -8, -6, 4``."""
        # Run
        table = generate_relations('double', 2)

        # Assert
        assert table.variables == ('a1', 'a2', 'a3', 'a4')
        assert table[(2, 2)].as_dict() == {
            (4, 0, 0, 0): -6,
            (2, 1, 0, 0): 16,
            (1, 0, 1, 0): -8,
            (0, 2, 0, 0): -6,
            (0, 0, 0, 1): 4,
        }
        assert table[(1, 2)].as_dict() == {
            (3, 0, 0, 0): 2,
            (1, 1, 0, 0): -4,
            (0, 0, 1, 0): 2,
        }

    def test_double_point_mass_vanishes(self):
        """A spectrum without fluctuations has zero double moments."""
        # Setup
        table = generate_relations(RelationKind.DOUBLE, 5)

        # Run
        result = table.evaluate(np.ones(10))

        # Assert
        np.testing.assert_allclose(result, 0.0, atol=1e-9)

    def test_forward_tower_exact_values(self):
        """Two atoms ``(2, 1)`` with equal weights at ``r = 1/2``."""
        # Setup
        table = generate_relations(RelationKind.FORWARD_TOWER, 3)
        values = [Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(9, 2)]

        # Run
        result = table.evaluate_exact(values)

        # Assert
        assert result == [Fraction(3, 2), Fraction(29, 8), Fraction(351, 32)]

    def test_forward_tower_narayana(self):
        """The identity maps to the Marchenko-Pastur moments, Narayana polynomials in ``r``."""
        # Setup
        table = generate_relations(RelationKind.FORWARD_TOWER, 8)
        r = 0.3

        # Run
        result = table.evaluate(np.concatenate([[r], np.ones(8)]))

        # Assert
        expected = [_narayana_moment(k, r) for k in range(1, 9)]
        np.testing.assert_allclose(result, expected, rtol=1e-12)

    def test_evaluate_batched(self):
        # Setup
        table = generate_relations(RelationKind.BACKWARD_TOWER, 2)
        values = np.array([[0.5, 1.5, 3.625], [0.0, 1.0, 2.0]])

        # Run
        result = table.evaluate(values)

        # Assert
        np.testing.assert_allclose(result, [[1.5, 2.5], [1.0, 2.0]])

    def test_evaluate_wrong_length(self):
        # Setup
        table = generate_relations(RelationKind.FORWARD_TOWER, 2)

        # Run and Assert
        with pytest.raises(ValueError, match='Expected 3 values'):
            table.evaluate([0.5, 1.0])

    def test_evaluate_vanishing_denominator(self):
        # Setup
        table = generate_relations(RelationKind.DUAL_DOUBLE, 1)

        # Run and Assert
        with pytest.raises(DegenerateDenominatorError):
            table.evaluate([0.0, 1.0, 1.0], tolerance=1e-12)

    def test_solve_triangular(self):
        """Solving the forward tower undoes it."""
        # Setup
        table = generate_relations(RelationKind.FORWARD_TOWER, 3)

        # Run
        result = table.solve_triangular([0.5], [1.5, 3.625, 10.96875])

        # Assert
        np.testing.assert_allclose(result, [1.5, 2.5, 4.5], rtol=1e-15)

    def test_solve_triangular_dual_near_one(self):
        """Exact inverse Marchenko-Pastur moments at ``q = 10`` solve back to the identity."""
        # Setup
        table = generate_relations(RelationKind.DUAL_FORWARD, 6)
        targets = table.evaluate_exact([Fraction(10)] + [Fraction(1)] * 6)

        # Run
        result = table.solve_triangular(10.0, [float(target) for target in targets])

        # Assert
        np.testing.assert_allclose(result, np.ones(6), rtol=1e-8)

    def test_solve_triangular_not_triangular(self):
        # Setup
        relation = Relation([((0, 2), Fraction(1))])
        table = RelationTable(RelationKind.FORWARD_TOWER, 1, ['r', 'a1'], {1: relation})

        # Run and Assert
        with pytest.raises(ValueError, match='not triangular in a1'):
            table.solve_triangular([0.5], [1.0])

    def test_solve_triangular_vanishing_lead(self):
        """At ``q = 0`` the first dual relation loses its moment."""
        # Setup
        table = generate_relations(RelationKind.DUAL_FORWARD, 2)

        # Run and Assert
        with pytest.raises(DegenerateDenominatorError, match='a1 vanishes'):
            table.solve_triangular([0.0], [1.0, 1.0])

    def test_solve_triangular_wrong_length(self):
        # Setup
        table = generate_relations(RelationKind.FORWARD_TOWER, 2)

        # Run and Assert
        with pytest.raises(ValueError, match='Expected 3 values'):
            table.solve_triangular([0.5], [1.0])

    def test_to_text(self):
        # Setup
        table = generate_relations(RelationKind.DUAL_DOUBLE, 1)

        # Run
        text = table.to_text()

        # Assert
        lines = text.splitlines()
        assert lines[:3] == ['# kind: dual-double', '# order: 1', '# variables: t2 t3 t4']
        assert lines[3].startswith('alpha~[1,1] = (')
        assert lines[3].endswith(') / t2^2')

    def test_from_text_inverts_to_text(self):
        # Setup
        table = generate_relations(RelationKind.DUAL_BACKWARD, 4)

        # Run
        loaded = RelationTable.from_text(table.to_text())

        # Assert
        assert loaded == table

    def test_from_text_invalid_line(self):
        # Setup
        text = '# kind: double\n# order: 1\n# variables: a1 a2\nnot a relation\n'

        # Run and Assert
        with pytest.raises(ValueError, match='Invalid relation line'):
            RelationTable.from_text(text)

    def test_save_load(self, tmp_path):
        # Setup
        table = generate_relations(RelationKind.DOUBLE, 3)
        path = tmp_path / 'double.txt'

        # Run
        table.save(str(path))
        loaded = RelationTable.load(str(path))

        # Assert
        assert loaded == table


def test_generate_relations_cached():
    """Repeated requests return the same table object."""
    # Run
    first = generate_relations('forward_tower', 4)
    second = generate_relations(RelationKind.FORWARD_TOWER, 4)

    # Assert
    assert first is second


def test_generate_relations_invalid_order():
    with pytest.raises(ValueError):
        generate_relations(RelationKind.DOUBLE, 0)


def test_generate_relations_invalid_kind():
    with pytest.raises(ValueError):
        generate_relations('triple', 2)
