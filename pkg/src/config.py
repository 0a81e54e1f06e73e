import configparser
import os
from typing import Any, Optional

from core import VParams, validate
from dynamics import ABS_TOL, REL_TOL
from enums import ErrorCode, OutputFormat
from exceptions import InvalidParameterError

_FLOAT_KEYS: tuple[str, ...] = ('nbar', 'delta', 'gamma_a', 'gamma_b', 'gamma_rel', 'gamma_d',
                                'rel_tol', 'abs_tol', 't_end')
_INT_KEYS: tuple[str, ...] = ('n_points', 'threads')


class RunConfiguration:
    # Class-level variable to store the singleton instance
    __instance: Optional['RunConfiguration'] = None

    nbar: float
    delta: float
    gamma_a: float
    gamma_b: Optional[float]
    gamma_rel: float
    gamma_d: float
    rel_tol: float
    abs_tol: float
    t_end: Optional[float]
    n_points: int
    output: Optional[str]
    format: OutputFormat
    threads: Optional[int]
    config_file: Optional[str]
    verbose: bool

    def __new__(cls, *args, **kwargs) -> 'RunConfiguration':
        if cls.__instance is None:
            cls.__instance = super(RunConfiguration, cls).__new__(cls, *args, **kwargs)
        return cls.__instance

    def __init__(self) -> None:
        if not hasattr(self, '_initialized'):  # Ensure init is called only once
            self.nbar = 0.0
            self.delta = 0.0
            self.gamma_a = 1.0
            self.gamma_b = None  # follows gamma_a unless set
            self.gamma_rel = 0.0
            self.gamma_d = 0.0
            self.rel_tol = REL_TOL
            self.abs_tol = ABS_TOL
            self.t_end = None
            self.n_points = 201
            self.output = None
            self.format = OutputFormat.Csv
            self.threads = None
            self.config_file = None
            self.verbose = False
            self._initialized = True  # Mark as initialized to prevent re-init

    @classmethod
    def reset(cls) -> None:
        cls.__instance = None

    def with_args(self, **values: Any) -> None:
        """Any value that is not None overwrites the previous one."""
        self.__update({k: v for k, v in values.items() if v is not None})

    def with_file(self, config_file: str) -> None:
        """Values present in the INI file overwrite the previous ones.

        Bare `key = value` lines without a section header are read as [DEFAULT].
        """
        if not os.path.isfile(config_file):
            raise InvalidParameterError(ErrorCode.ConfigMismatch,
                                        f'Invalid configuration file {config_file}')

        self.config_file = os.path.abspath(config_file)
        self.__update(self.__parse_file(config_file))

    def params(self) -> VParams:
        gamma_b = self.gamma_a if self.gamma_b is None else self.gamma_b
        return validate(VParams(gamma_a=self.gamma_a, gamma_b=gamma_b, nbar=self.nbar,
                                delta=self.delta, gamma_rel=self.gamma_rel, gamma_d=self.gamma_d))

    @staticmethod
    def __parse_file(config_file: str) -> dict[str, Any]:
        with open(config_file, encoding='utf-8') as f:
            text = f.read()
        if not text.lstrip().startswith('['):
            text = '[DEFAULT]\n' + text

        config: configparser.ConfigParser = configparser.ConfigParser()
        try:
            config.read_string(text, source=config_file)
        except configparser.Error as ex:
            raise InvalidParameterError(ErrorCode.ConfigMismatch, f'{config_file}: {ex}')

        config_from_file: dict[str, Any] = {}
        for key, value in config.items('DEFAULT'):
            config_from_file[key] = RunConfiguration.__convert(key, value)
        return config_from_file

    @staticmethod
    def __convert(key: str, value: str) -> Any:
        try:
            if key in _FLOAT_KEYS:
                return float(value)
            if key in _INT_KEYS:
                return int(value)
            if key == 'format':
                return OutputFormat(value.strip().lower())
            if key == 'verbose':
                return value.strip().upper() == 'TRUE'
            if key == 'output':
                return value.strip()
        except ValueError:
            raise InvalidParameterError(ErrorCode.ConfigMismatch, f'cannot read {key} = {value!r}')
        raise InvalidParameterError(ErrorCode.ConfigMismatch, f'unknown configuration key {key!r}')

    def __update(self, values: dict[str, Any]) -> None:
        for key, value in values.items():
            if key not in _FLOAT_KEYS + _INT_KEYS + ('format', 'verbose', 'output'):
                raise InvalidParameterError(ErrorCode.ConfigMismatch, f'unknown configuration key {key!r}')
            if key == 'format' and isinstance(value, str):
                value = OutputFormat(value)
            if key == 'output' and value in ('', 'None'):
                continue
            setattr(self, key, value)
