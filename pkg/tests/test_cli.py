import csv
import io
import json

import pytest

import fanoness
from enums import ExitCode


def _read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith('# ')
    return list(csv.DictReader(io.StringIO('\n'.join(lines[1:]))))


def test_steady_reference_point(tmp_path):
    out = tmp_path / 'steady.csv'

    assert fanoness.run(['steady', '--nbar', '1', '--delta', '1', '-q', '-o', str(out)]) == ExitCode.Success.value
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert float(row['re_ab']) == pytest.approx(1.0 / 7.0, rel=1e-15)
    assert float(row['rho_aa']) == pytest.approx(3.0 / 14.0, rel=1e-15)
    assert float(row['c_ratio']) == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert row['method'] == 'closed-form'


def test_steady_strong_pumping(tmp_path):
    out = tmp_path / 'steady.json'

    assert fanoness.run(['steady', '--nbar', '1000', '--delta', '10', '-f', 'json', '-q', '-o', str(out)]) == 0
    report = json.loads(out.read_text(encoding='utf-8'))
    record = dict(zip(report['columns'], report['rows'][0]))
    assert record['rel_intensity_diff'] == pytest.approx(1001000.0 / 4305101.0, rel=1e-12)
    assert record['re_ab'] == pytest.approx(record['rel_intensity_diff'], abs=1e-12)
    assert report['metadata']['nbar'] == 1000.0


def test_steady_displays_record(capsys):
    assert fanoness.run(['steady', '--nbar', '1', '--delta', '1']) == 0

    out = capsys.readouterr().out
    assert 're_ab' in out
    assert '0.14285714285714' in out
    assert 'closed-form' in out


def test_steady_asymmetric_system(tmp_path):
    out = tmp_path / 'steady.csv'

    assert fanoness.run(['steady', '--nbar', '1', '--delta', '1', '--gamma-b', '2', '-q', '-o', str(out)]) == 0
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert row['method'] == 'linear-solve'
    assert row['canonical'] == 'nan'


@pytest.mark.parametrize(
    "argv,code",
    [
        (['steady', '--nbar=-1', '--delta', '1'], ExitCode.InvalidParameters),
        (['steady', '--nbar', '1', '--delta', '1', '--gamma-a', '0'], ExitCode.InvalidParameters),
        (['steady', '--nbar', '1e6', '--delta', '0'], ExitCode.SingularGenerator),
        (['sweep', '--nbar', '1', '-a', 'delta=1,2', '-O', 'rho_ab'], ExitCode.InvalidParameters),
        (['sweep', '--nbar', '1', '-a', 'temperature=1,2'], ExitCode.InvalidParameters),
        (['evolve', '--nbar', '1', '--delta', '1', '--initial', '0.3,0.2,0,0'], ExitCode.InvalidParameters),
        (['evolve', '--nbar', '1', '--delta', '1', '--t-end=-1'], ExitCode.InvalidParameters),
        (['transport', '--nbar', '1', '--delta', '1', '--gamma-d', '1'], ExitCode.InvalidParameters),
    ],
)
def test_error_exit_codes(argv, code):
    assert fanoness.run(argv + ['-q']) == code.value


def test_error_is_reported_on_stderr(capsys):
    assert fanoness.run(['steady', '--nbar', '1e6', '--delta', '0']) == ExitCode.SingularGenerator.value

    assert 'SINGULAR_GENERATOR' in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('file', encoding='utf-8')
    argv = ['steady', '--nbar', '1', '--delta', '1', '-q', '-o', str(blocker / 'steady.csv')]

    assert fanoness.run(argv) == ExitCode.IoFailure.value


def test_unknown_subcommand_exits_like_argparse():
    with pytest.raises(SystemExit) as exc_info:
        fanoness.run(['plot'])

    assert exc_info.value.code == 2


def test_evolve(tmp_path):
    out = tmp_path / 'evolve.csv'
    argv = ['evolve', '--nbar', '1', '--delta', '1', '--t-end', '5', '--n-points', '51', '-q', '-o', str(out)]

    assert fanoness.run(argv) == 0
    text = out.read_text(encoding='utf-8')
    rows = _read_csv(text)
    assert len(rows) == 51
    assert float(rows[-1]['t']) == 5.0
    assert 'regime=overdamped' in text.splitlines()[0]


def test_evolve_exact_from_initial_state(tmp_path):
    out = tmp_path / 'evolve.csv'
    argv = ['evolve', '--nbar', '1', '--delta', '1', '--gamma-b', '1.5', '--initial', '0.3,0.2,0.1,0',
            '--exact', '--t-end', '2', '--n-points', '11', '-q', '-o', str(out)]

    assert fanoness.run(argv) == 0
    rows = _read_csv(out.read_text(encoding='utf-8'))
    assert float(rows[0]['rho_aa']) == 0.3
    assert float(rows[0]['re_ab']) == 0.1


def test_sweep(tmp_path):
    out = tmp_path / 'sweep.csv'
    argv = ['sweep', '--delta', '1', '-a', 'nbar:1e-2:1e2:5:log', '-O', 're_ab,c_ratio', '-O', 'flux',
            '--threads', '2', '-q', '-o', str(out)]

    assert fanoness.run(argv) == 0
    rows = _read_csv(out.read_text(encoding='utf-8'))
    assert len(rows) == 5
    assert list(rows[0]) == ['nbar', 're_ab', 'c_ratio', 'flux']
    assert float(rows[2]['re_ab']) == pytest.approx(1.0 / 7.0)


def test_sweep_with_failed_points_still_succeeds(tmp_path, capsys):
    out = tmp_path / 'sweep.csv'
    argv = ['sweep', '--nbar', '1e6', '-a', 'delta=0,1e5', '-o', str(out)]

    assert fanoness.run(argv) == 0
    assert '1 grid point evaluation(s) failed' in capsys.readouterr().err
    rows = _read_csv(out.read_text(encoding='utf-8'))
    assert rows[0]['re_ab'] == 'nan'


def test_sweep_prints_table_to_stdout(capsys):
    assert fanoness.run(['sweep', '--nbar', '1', '-a', 'delta=1,2', '-f', 'json']) == 0

    report = json.loads(capsys.readouterr().out)
    assert report['columns'] == ['delta', 're_ab']
    assert len(report['rows']) == 2


def test_transport_flux(tmp_path):
    out = tmp_path / 'transport.csv'

    assert fanoness.run(['transport', '--nbar', '1', '--delta', '1', '-q', '-o', str(out)]) == 0
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert float(row['flux']) == pytest.approx(-1.0 / 7.0, abs=1e-12)
    assert float(row['reduced_nbar']) == pytest.approx(1.0)


def test_transport_with_explicit_baths(tmp_path):
    out = tmp_path / 'transport.csv'
    argv = ['transport', '--delta', '1', '--nbar-L', '2', '--gamma-L', '1', '1', '--gamma-R', '1', '1',
            '--nbar-R', '0.5', '-q', '-o', str(out)]

    assert fanoness.run(argv) == 0
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert row['reduced_nbar'] == 'nan'
    assert float(row['rho_aa']) > 0.0


def test_transport_equivalence_check(tmp_path):
    out = tmp_path / 'check.csv'
    argv = ['transport', '--check-equivalence', '--draws', '20', '--seed', '7', '-q', '-o', str(out)]

    assert fanoness.run(argv) == 0
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert int(row['draws']) == 20
    assert float(row['max_deviation']) <= 1e-14


def test_figures(tmp_path, capsys):
    argv = ['figures', 'coherence-vs-splitting', '-o', str(tmp_path / 'figs')]

    assert fanoness.run(argv) == 0
    assert (tmp_path / 'figs' / 'coherence-vs-splitting.csv').is_file()
    assert 'coherence-vs-splitting.csv' in capsys.readouterr().out


def test_figures_into_unwritable_directory(tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('file', encoding='utf-8')

    assert fanoness.run(['figures', 'coherence-vs-splitting', '-q', '-o', str(blocker)]) == ExitCode.IoFailure.value


def test_json_and_csv_report_identical_values(tmp_path):
    base = ['steady', '--nbar', '3', '--delta', '2', '--gamma-d', '0.5', '-q']
    assert fanoness.run(base + ['-o', str(tmp_path / 'a.csv')]) == 0
    assert fanoness.run(base + ['-f', 'json', '-o', str(tmp_path / 'a.json')]) == 0

    row = _read_csv((tmp_path / 'a.csv').read_text(encoding='utf-8'))[0]
    report = json.loads((tmp_path / 'a.json').read_text(encoding='utf-8'))
    for name, value in zip(report['columns'], report['rows'][0]):
        if isinstance(value, float):
            assert float(row[name]) == value


def test_configuration_file(tmp_path):
    config = tmp_path / 'run.ini'
    config.write_text('nbar = 1\ndelta = 5\n', encoding='utf-8')
    out = tmp_path / 'steady.csv'

    assert fanoness.run(['steady', '-C', str(config), '--delta', '1', '-q', '-o', str(out)]) == 0
    row = _read_csv(out.read_text(encoding='utf-8'))[0]
    assert float(row['re_ab']) == pytest.approx(1.0 / 7.0)

    assert fanoness.run(['steady', '-C', str(tmp_path / 'missing.ini'), '-q']) == ExitCode.InvalidParameters.value


def test_figures_by_short_number(tmp_path):
    assert fanoness.run(['figures', 'fig2a', '-q', '-o', str(tmp_path)]) == 0

    lines = (tmp_path / 'transient-overdamped.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith('# panel=transient-overdamped,')
    assert 'nbar=0.001' in lines[0]
    assert 'delta=0.1' in lines[0]
    assert lines[1].startswith('t,rho_gg,rho_aa,rho_bb,re_ab,im_ab')
