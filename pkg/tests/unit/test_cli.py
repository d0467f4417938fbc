"""Tests for the eigeninfer.cli module."""

import os

import pandas as pd
import pytest

from eigeninfer.cli import main


def test_print_config(capsys):
    # Run
    status = main(['print-config', '--preset', 'table2-126x180'])

    # Assert
    output = capsys.readouterr().out
    assert status == 0
    assert 'n = 126\n' in output
    assert 't = 180\n' in output


def test_relations_stdout(capsys):
    # Run
    status = main(['relations', '--kind', 'forward-tower', '--order', '2'])

    # Assert
    assert status == 0
    assert capsys.readouterr().out.startswith('# kind: forward-tower\n# order: 2\n')


def test_relations_file(tmp_path):
    # Setup
    path = tmp_path / 'double.txt'

    # Run
    status = main(['relations', '--kind', 'double', '--order', '2', '--out', str(path)])

    # Assert
    assert status == 0
    assert path.read_text().startswith('# kind: double\n')


def test_signmap(tmp_path, capsys):
    # Setup
    prefix = str(tmp_path / 'map')

    # Run
    status = main(['-q', 'signmap', '--r', '0.5', '--grid', '4x3', '--out', prefix])

    # Assert
    assert status == 0
    assert capsys.readouterr().out.startswith('negative fraction: ')
    assert len(pd.read_csv(prefix + '.csv')) == 12
    with open(prefix + '.pgm', encoding='ascii') as pgm:
        assert pgm.read().startswith('P2\n4 3\n255\n')


def test_signmap_invalid_grid():
    with pytest.raises(SystemExit):
        main(['signmap', '--r', '0.5', '--grid', '4by3', '--out', 'map'])


def test_run(tmp_path, monkeypatch, capsys):
    # Setup
    monkeypatch.setenv('EIGENINFER_MAX_WORKERS', '1')
    config_path = tmp_path / 'config.txt'
    config_path.write_text('n = 16\nt = 32\nensemble_size = 2\nmethods = analytic:m=2\n')
    output_dir = str(tmp_path / 'results')

    # Run
    status = main(['-q', 'run', str(config_path), '--output-dir', output_dir])

    # Assert
    assert status == 0
    assert 'analytic-m2' in capsys.readouterr().out
    assert os.path.exists(os.path.join(output_dir, 'table.csv'))
    assert os.path.exists(os.path.join(output_dir, 'report.pkl'))


def test_run_without_config(capsys):
    # Run
    status = main(['run'])

    # Assert
    assert status == 1
    assert 'Give a configuration file or --preset' in capsys.readouterr().err


def test_run_missing_file(tmp_path, capsys):
    # Run
    status = main(['run', str(tmp_path / 'missing.txt')])

    # Assert
    assert status == 1
    assert capsys.readouterr().err.startswith('eigeninfer: error: ')
