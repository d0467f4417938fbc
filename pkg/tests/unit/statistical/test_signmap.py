"""Tests for the eigeninfer.statistical.signmap module."""

import numpy as np
import pandas as pd
import pytest

from eigeninfer.statistical.signmap import (
    SignMapGrid, default_grids, detq_sign_map, detq_value)


def test_default_grids():
    # Run
    lambda_grid, p_grid = default_grids(4, 2, lambda_max=2.0)

    # Assert
    np.testing.assert_allclose(lambda_grid, [0.5, 1.0, 1.5, 2.0])
    np.testing.assert_allclose(p_grid, [0.25, 0.75])


def test_default_grids_empty():
    with pytest.raises(ValueError):
        default_grids(0, 3)


class TestSignMapGrid:

    def test_to_pgm(self):
        """The top row is the largest ``p``."""
        # Setup
        grid = SignMapGrid([0.5, 1.0, 1.5], [0.25, 0.75], [[-1, 0, 1], [1, 1, 1]], 0.5, 3)

        # Run
        pgm = grid.to_pgm()

        # Assert
        assert pgm == 'P2\n3 2\n255\n255 255 255\n0 128 255\n'

    def test_fractions(self):
        # Setup
        grid = SignMapGrid([1.0, 2.0], [0.5, 0.75], [[-1, 0], [1, 1]], 0.5, 3)

        # Run and Assert
        assert grid.negative_fraction() == 0.25
        assert grid.nonpositive_fraction() == 0.5
        assert grid.shape == (2, 2)

    def test_to_csv(self, tmp_path):
        # Setup
        grid = SignMapGrid([1.0, 2.0], [0.1], [[1, -1]], 0.5, 3, 'dual')
        path = tmp_path / 'map.csv'

        # Run
        grid.to_csv(path)

        # Assert
        frame = pd.read_csv(path)
        assert frame.columns.tolist() == ['lambda_s', 'p', 'sign']
        assert frame['sign'].tolist() == [1, -1]
        assert frame['lambda_s'].tolist() == [1.0, 2.0]
        assert path.read_text().splitlines()[1] == '1,0.10000000000000001,1'

    def test_save_pgm(self, tmp_path):
        # Setup
        grid = SignMapGrid([1.0], [0.5], [[0]], 0.5, 3)
        path = tmp_path / 'map.pgm'

        # Run
        grid.save_pgm(path)

        # Assert
        assert path.read_text() == 'P2\n1 1\n255\n128\n'

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match='does not match'):
            SignMapGrid([1.0, 2.0], [0.5], [[1]], 0.5, 3)


class TestDetqSignMap:

    def test_shape(self):
        # Setup
        lambda_grid, p_grid = default_grids(6, 4)

        # Run
        grid = detq_sign_map(0.5, 3, lambda_grid=lambda_grid, p_grid=p_grid)

        # Assert
        assert grid.shape == (4, 6)
        assert set(np.unique(grid.signs)) <= {-1, 0, 1}
        assert grid.k == 3

    def test_degenerate_ratio_independent_of_p(self):
        """At ``Lambda_s = 1`` the spectrum is the identity for every ``p``."""
        # Setup
        p_grid = [0.1, 0.5, 0.9]

        # Run
        grid = detq_sign_map(0.5, 3, lambda_grid=[1.0], p_grid=p_grid)
        values = [detq_value(1.0, p, 0.5, 3) for p in p_grid]

        # Assert
        assert len(set(grid.signs[:, 0])) == 1
        np.testing.assert_allclose(values, values[0], rtol=1e-9)

    def test_matches_detq_value(self):
        # Setup
        lambda_grid = [0.5, 2.0]
        p_grid = [0.3, 0.7]

        # Run
        grid = detq_sign_map(0.5, 3, 'dual', lambda_grid=lambda_grid, p_grid=p_grid)

        # Assert
        for row, p in enumerate(p_grid):
            for column, lambda_s in enumerate(lambda_grid):
                value = detq_value(lambda_s, p, 0.5, 3, 'dual')
                if grid.signs[row, column] != 0:
                    assert np.sign(value) == grid.signs[row, column]

    def test_invalid_grid(self):
        with pytest.raises(ValueError, match='Grids must lie'):
            detq_sign_map(0.5, 3, lambda_grid=[0.0, 1.0], p_grid=[0.5])
