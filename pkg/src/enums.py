from enum import Enum


class ErrorCode(Enum):
    NegativeRate = 'NEGATIVE_RATE'
    NonpositiveDecay = 'NONPOSITIVE_DECAY'
    NonpositiveFrequency = 'NONPOSITIVE_FREQUENCY'
    NonpositiveIntensity = 'NONPOSITIVE_INTENSITY'
    NonFinite = 'NON_FINITE'
    AsymmetricInput = 'ASYMMETRIC_INPUT'
    AsymmetricState = 'ASYMMETRIC_STATE'
    InvalidInitial = 'INVALID_INITIAL'
    RegimeMismatch = 'REGIME_MISMATCH'
    ConfigMismatch = 'CONFIG_MISMATCH'
    UnknownAxis = 'UNKNOWN_AXIS'
    UnknownObservable = 'UNKNOWN_OBSERVABLE'
    UnknownFigure = 'UNKNOWN_FIGURE'
    SingularGenerator = 'SINGULAR_GENERATOR'
    StepFailure = 'STEP_FAILURE'
    IoFailure = 'IO_FAILURE'
    IdentityViolation = 'IDENTITY_VIOLATION'


class ExitCode(Enum):
    Success = 0
    Failure = 1
    InvalidParameters = 2
    SingularGenerator = 3
    IoFailure = 4
    StepFailure = 5
    IdentityViolation = 6


class Regime(Enum):
    Underdamped = 'underdamped'
    Overdamped = 'overdamped'


class SteadyStateMethod(Enum):
    ClosedForm = 'closed-form'
    LinearSolve = 'linear-solve'


class Spacing(Enum):
    Linear = 'linear'
    Log = 'log'


class OutputFormat(Enum):
    Csv = 'csv'
    Json = 'json'
