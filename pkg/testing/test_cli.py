"""
Tests for the fockwizz command-line interface
"""

import math

import pytest

from fockwizz.states import load_state
from fockwizz.utils.records import read_json
from fockwizz.workflows.cli_opts import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, create_parser, main

from test_utils import read_csv_rows, squeezed_vacuum_overlap


@pytest.fixture
def workdir(temp_dir, monkeypatch):
    """Run commands from an empty directory with no configuration in the environment."""
    monkeypatch.chdir(temp_dir)
    monkeypatch.delenv('FOCKWIZZ_CONFIG', raising=False)
    monkeypatch.delenv('FOCKWIZZ_VERBOSE', raising=False)
    return temp_dir


def test_parser_commands():
    """Test the four subcommands are registered."""
    parser = create_parser()
    args = parser.parse_args(['converge', '--m', '2', '--z', '0.6', '--dims', '64', '128'])
    assert args.command == 'converge'
    assert args.dims == ['64', '128']


def test_no_command(workdir, capsys):
    """Test running without a command prints help."""
    assert main([]) == EXIT_OK
    assert 'fockwizz' in capsys.readouterr().out


def test_gen_gcs(workdir, capsys):
    """Test gen writes a phased state and a statistics table."""
    code = main(['gen', '--kind', 'gcs', '--m', '2', '--z', '0.6', '-o', 'squeezed.json'])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert 'Truncation loss:' in out
    assert 'Phase fix: applied' in out
    ket = load_state(workdir / 'squeezed.json')
    assert ket.space.dim == 128
    assert ket.amps[0].real == pytest.approx(squeezed_vacuum_overlap(0.6), abs=1e-8)
    header, rows = read_csv_rows(workdir / 'squeezed_stats.csv')
    assert header == ['n', 'p_n']
    assert len(rows) == 128
    assert rows[1][1] == 0.0


def test_gen_verbose_echoes_amplitudes(workdir, capsys):
    """Test verbose gen prints amplitudes in the a+bi form it accepts."""
    assert main(['--verbose', 'gen', '--kind', 'gcs', '--m', '2', '--z', '0.3-0.4i']) == EXIT_OK
    assert 'z=0.3-0.4i' in capsys.readouterr().out


def test_gen_superposition_lambda_zero(workdir):
    """Test U_m(0)|0> is the vacuum."""
    assert main(['gen', '--kind', 'superposition', '--m', '2', '--z', '0.5',
                 '--lambda', '0']) == EXIT_OK
    ket = load_state(workdir / 'state.json')
    assert ket.amps[0] == pytest.approx(1.0, abs=1e-15)
    assert ket.meta['kind'] == 'superposition'


def test_gen_cat(workdir, capsys):
    """Test the cat state matches the two-term superposition."""
    code = main(['gen', '--kind', 'cat', '--z', '1.5', '--u=-1.5',
                 '--lambda', str(math.pi / 4)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    line = [l for l in out.splitlines() if l.startswith('Fidelity')][0]
    assert float(line.split(':')[1]) >= 1 - 1e-8


def test_gen_bad_complex(workdir, capsys):
    """Test a malformed amplitude is a usage error with its position."""
    code = main(['gen', '--kind', 'coherent', '--z', '1+2'])
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.startswith('Error:')
    assert 'position' in err


def test_gen_radius_guard(workdir, capsys):
    """Test m >= 3 beyond the safe radius is refused."""
    assert main(['gen', '--kind', 'gcs', '--m', '3', '--z', '0.5']) == EXIT_USAGE
    assert 'Error:' in capsys.readouterr().err


def test_gen_gcs_m3_default_dim(workdir):
    """Test |0.2_3> generates at the default dim once its convergence is confirmed."""
    assert main(['gen', '--kind', 'gcs', '--m', '3', '--z', '0.2', '-o', 'z3.json']) == EXIT_OK
    ket = load_state(workdir / 'z3.json')
    assert ket.meta['tail_mass'] > 0
    assert ket.amps[1] == 0


@pytest.mark.parametrize("kind", ['superposition', 'gdf_basis', 'dressed_basis'])
def test_gen_override_reaches_every_kind(workdir, capsys, kind):
    """Test --override and --safe-radius apply to every D_m-based kind."""
    base = ['gen', '--kind', kind, '--m', '3', '--z', '0.4', '--lambda', '0.7', '--dim', '64']
    assert main(base) == EXIT_USAGE
    assert 'safe radius' in capsys.readouterr().err
    assert main(base + ['--override', '-o', 'explore.json']) == EXIT_OK
    assert load_state(workdir / 'explore.json').meta['kind'] == kind
    # a wider radius admits z; the convergence gate then decides
    assert main(base + ['--safe-radius', '0.5']) in (EXIT_OK, EXIT_FAILURE)
    assert 'safe radius' not in capsys.readouterr().err


def test_verify_selection(workdir, capsys):
    """Test verify on a single check."""
    code = main(['verify', '--check', 'eq29a-composition', '--m', '1', '2', '--z', '0.3',
                 '--lambda', '0.5', '--dim', '64', '--report', 'report.json',
                 '--format', 'structured'])
    assert code == EXIT_OK
    doc = read_json(workdir / 'report.json')
    assert doc['summary']['fail'] == 0
    assert {r['check_id'] for r in doc['results']} == {'eq29a-composition'}
    assert 'Checks:' in capsys.readouterr().out


def test_verify_skip_is_reported(workdir, capsys):
    """Test skipped checks are listed with their reason."""
    code = main(['verify', '--check', 'eq17a-generation', '--m', '2', '--z', '0.5+0.3i',
                 '--lambda', '0', '--dim', '16'])
    assert code == EXIT_OK
    assert 'Skipped eq17a-generation' in capsys.readouterr().out


def test_verify_list(workdir, capsys):
    """Test listing registered checks."""
    assert main(['verify', '--list']) == EXIT_OK
    assert 'eq15a-hermiticity' in capsys.readouterr().out


def test_sweep_lambda(workdir):
    """Test |<0|U_1|0>|^2 = cos^2 + sin^2 exp(-|z|^2) along lambda."""
    code = main(['sweep', '--param', 'lambda', '--range', '0:3.2:0.1', '--z', '0.8',
                 '-o', 'sweep.csv'])
    assert code == EXIT_OK
    header, rows = read_csv_rows(workdir / 'sweep.csv')
    assert header == ['lambda', 'vacuum-probability']
    assert len(rows) == 32
    for lam, prob in rows:
        expected = math.cos(lam) ** 2 + math.sin(lam) ** 2 * math.exp(-0.64)
        assert prob == pytest.approx(expected, abs=1e-10)


@pytest.mark.slow
def test_sweep_z_squeezed_amplitude(workdir):
    """Test <0|z_2> = 1/sqrt(cosh r) along |z|."""
    code = main(['sweep', '--param', 'z', '--range', '0.3:1.01:0.35', '--m', '2',
                 '--observable', 'gcs-vacuum-amplitude', '--dim', '256', '-o', 'z.csv'])
    assert code == EXIT_OK
    _, rows = read_csv_rows(workdir / 'z.csv')
    assert [round(r, 2) for r, _ in rows] == [0.3, 0.65, 1.0]
    for r, amplitude in rows:
        assert amplitude == pytest.approx(squeezed_vacuum_overlap(r), abs=1e-8)


def test_sweep_empty_range(workdir, capsys):
    """Test an empty range is a usage error."""
    assert main(['sweep', '--param', 'lambda', '--range', '1:0:0.1']) == EXIT_USAGE
    assert 'Error:' in capsys.readouterr().err


def test_converge(workdir, capsys):
    """Test the convergence verdict for a coherent state."""
    assert main(['converge', '--m', '1', '--z', '0.8', '--dims', '64,128',
                 '-o', 'conv.json']) == EXIT_OK
    assert 'Verdict: converged' in capsys.readouterr().out
    doc = read_json(workdir / 'conv.json')
    assert doc['verdict'] == 'converged'
    assert doc['dims'] == [64, 128]


def test_converge_single_dim(workdir):
    """Test a single dimension is a usage error."""
    assert main(['converge', '--m', '1', '--z', '0.8', '--dims', '64']) == EXIT_USAGE


def test_config_file_precedence(workdir, mock_config_file):
    """Test file values apply unless a flag overrides them."""
    assert main(['gen', '--kind', 'coherent', '--z', '0.5', '-o', 'from_file.json']) == EXIT_OK
    assert load_state(workdir / 'from_file.json').space.dim == 48
    # FORMAT=structured in the file switches the statistics table to JSON
    assert (workdir / 'from_file_stats.json').exists()

    assert main(['gen', '--kind', 'coherent', '--z', '0.5', '--dim', '64',
                 '-o', 'from_flag.json']) == EXIT_OK
    ket = load_state(workdir / 'from_flag.json')
    assert ket.space.dim == 64
    assert ket.space.interior_dim == 32
