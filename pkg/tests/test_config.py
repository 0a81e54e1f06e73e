import pytest

from config import RunConfiguration
from dynamics import REL_TOL
from enums import ErrorCode, OutputFormat
from exceptions import InvalidParameterError


def test_configuration_is_a_singleton():
    first = RunConfiguration()
    first.with_args(nbar=2.0)

    assert RunConfiguration() is first
    assert RunConfiguration().nbar == 2.0

    RunConfiguration.reset()
    assert RunConfiguration().nbar == 0.0


def test_defaults():
    config = RunConfiguration()

    assert config.rel_tol == REL_TOL
    assert config.n_points == 201
    assert config.format == OutputFormat.Csv
    assert config.output is None
    assert config.params().gamma_b == 1.0


def test_with_args_ignores_missing_values():
    config = RunConfiguration()
    config.with_args(nbar=1.0, delta=None, format='json', threads=None)

    assert config.nbar == 1.0
    assert config.delta == 0.0
    assert config.format == OutputFormat.Json
    assert config.threads is None


def test_with_file_reads_sectioned_ini(tmp_path):
    path = tmp_path / 'run.ini'
    path.write_text('[DEFAULT]\nnbar = 1000\ndelta = 10\nn_points = 51\nformat = JSON\nverbose = True\n',
                    encoding='utf-8')
    config = RunConfiguration()
    config.with_file(str(path))

    assert config.nbar == 1000.0
    assert config.delta == 10.0
    assert config.n_points == 51
    assert config.format == OutputFormat.Json
    assert config.verbose is True
    assert config.config_file == str(path)


def test_with_file_reads_bare_key_values(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text('# steady-state run\ngamma_a = 2\ngamma_d = 0.5\noutput = ./out.csv\n', encoding='utf-8')
    config = RunConfiguration()
    config.with_file(str(path))
    params = config.params()

    assert params.gamma_a == params.gamma_b == 2.0
    assert params.gamma_d == 0.5
    assert config.output == './out.csv'


def test_arguments_override_file_values(tmp_path):
    path = tmp_path / 'run.ini'
    path.write_text('nbar = 1000\ndelta = 10\n', encoding='utf-8')
    config = RunConfiguration()
    config.with_file(str(path))
    config.with_args(delta=2.0, gamma_b=0.5)

    params = config.params()
    assert params.nbar == 1000.0
    assert params.delta == 2.0
    assert params.gamma_b == 0.5


@pytest.mark.parametrize(
    "text",
    [
        'temperature = 300\n',
        'nbar = lots\n',
        'n_points = 2.5\n',
        'format = xml\n',
        'nbar 1000\n',
    ],
)
def test_with_file_rejects_bad_content(tmp_path, text):
    path = tmp_path / 'bad.ini'
    path.write_text(text, encoding='utf-8')

    with pytest.raises(InvalidParameterError) as exc_info:
        RunConfiguration().with_file(str(path))

    assert exc_info.value.code == ErrorCode.ConfigMismatch


def test_missing_file(tmp_path):
    with pytest.raises(InvalidParameterError) as exc_info:
        RunConfiguration().with_file(str(tmp_path / 'missing.ini'))

    assert exc_info.value.code == ErrorCode.ConfigMismatch


def test_unknown_argument_key():
    with pytest.raises(InvalidParameterError) as exc_info:
        RunConfiguration().with_args(temperature=300.0)

    assert exc_info.value.code == ErrorCode.ConfigMismatch


def test_params_are_validated():
    config = RunConfiguration()
    config.with_args(nbar=-1.0)

    with pytest.raises(InvalidParameterError) as exc_info:
        config.params()

    assert exc_info.value.code == ErrorCode.NegativeRate
