# factorization/serializers.py
"""
Validation of the experiment configuration.

The configuration is a JSON object with the sections synth, solver,
spectrogram, metrics, mc and output. Every section is validated by a DRF
serializer; unknown keys are rejected at every level.
"""
import logging

from django.conf import settings
from rest_framework import serializers
from rest_framework.exceptions import ErrorDetail

from .core.experiment import parse_algorithm
from .exceptions import ConfigError
from .models.solver import (
    INIT_METHODS,
    JACOBIAN_MODES,
    LAMBDA_UPDATES,
    OUTER_REFERENCES,
    STEP_SCALINGS,
    W_UPDATE_RULES,
)

logger = logging.getLogger(__name__)

DEFAULT_MC_ALGORITHMS = ['mu', 'mu:0.1', 'mu:0.5', 'shinbo']


def algorithm_label(name, lam):
    if name == 'shinbo':
        return 'shinbo'
    return 'mu' if not lam else f"mu:{lam:g}"


class StrictSerializer(serializers.Serializer):
    """
    Serializer that rejects keys it does not declare. A missing nested
    section is validated as an empty mapping so that its defaults are filled.
    """

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ["Unknown configuration key."] for key in unknown}
                )
            data = dict(data)
            for name, field in self.fields.items():
                if isinstance(field, serializers.Serializer) and data.get(name) is None:
                    data[name] = {}
        return super().to_internal_value(data)


class AlgorithmField(serializers.CharField):
    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        try:
            return algorithm_label(*parse_algorithm(value))
        except ValueError as e:
            raise serializers.ValidationError(str(e))


class SynthSpecSerializer(StrictSerializer):
    m = serializers.IntegerField(min_value=1, default=100)
    n = serializers.IntegerField(min_value=1, default=70)
    r = serializers.IntegerField(min_value=1, default=3)
    density_W = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.10)
    density_H = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.70)
    seed = serializers.IntegerField(min_value=0, default=0)
    noise = serializers.FloatField(min_value=0.0, default=0.0)

    def validate(self, attrs):
        for name in ('density_W', 'density_H'):
            if attrs[name] <= 0:
                raise serializers.ValidationError({name: "Density must lie in (0, 1]."})
        if attrs['r'] > min(attrs['m'], attrs['n']):
            raise serializers.ValidationError({'r': "Rank must not exceed min(m, n)."})
        return attrs


class SolverConfigSerializer(StrictSerializer):
    algorithm = AlgorithmField(default='shinbo')
    rank = serializers.IntegerField(min_value=1, required=False)
    max_outer_iters = serializers.IntegerField(min_value=1, default=settings.SHINBO['DEFAULT_MAX_ITERS'])
    inner_iters = serializers.IntegerField(min_value=1, default=settings.SHINBO['DEFAULT_INNER_ITERS'])
    tol = serializers.FloatField(default=settings.SHINBO['DEFAULT_TOL'])
    step_alpha = serializers.FloatField(default=settings.SHINBO['DEFAULT_STEP_ALPHA'])
    seed = serializers.IntegerField(min_value=0, default=0)
    w_update_rule = serializers.ChoiceField(choices=W_UPDATE_RULES, default='is_divergence')
    # None lets the data source pick: warm_start for matrices, truncated_gaussian for signals
    init = serializers.ChoiceField(choices=INIT_METHODS, allow_null=True, default=None)
    warm_start_iters = serializers.IntegerField(min_value=0, default=settings.SHINBO['WARM_START_ITERS'])
    lambda_update = serializers.ChoiceField(choices=LAMBDA_UPDATES, default='per_row')
    jacobian = serializers.ChoiceField(choices=JACOBIAN_MODES, default='diagonal')
    outer_reference = serializers.ChoiceField(choices=OUTER_REFERENCES, default='background')
    normalize = serializers.BooleanField(default=True)
    floor = serializers.FloatField(default=settings.SHINBO['FLOOR'])
    update_exponent = serializers.FloatField(default=settings.SHINBO['UPDATE_EXPONENT'])
    step_scaling = serializers.ChoiceField(choices=STEP_SCALINGS, default='clipped')
    lambda_max = serializers.FloatField(allow_null=True, default=settings.SHINBO['LAMBDA_MAX'])

    def validate(self, attrs):
        errors = {}
        for name in ('tol', 'step_alpha', 'floor'):
            if not attrs[name] > 0:
                errors[name] = "Must be > 0."
        if not 0 < attrs['update_exponent'] <= 1:
            errors['update_exponent'] = "Must lie in (0, 1]."
        if attrs['lambda_max'] is not None and not attrs['lambda_max'] > 0:
            errors['lambda_max'] = "Must be > 0."
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class SpectrogramSerializer(StrictSerializer):
    window_len = serializers.IntegerField(min_value=1, default=128)
    overlap = serializers.IntegerField(min_value=0, default=100)
    nfft = serializers.IntegerField(min_value=1, default=512)
    window = serializers.ChoiceField(choices=('hann', 'hamming', 'rectangular'), default='hann')
    power = serializers.BooleanField(default=True)
    sample_rate = serializers.FloatField(required=False, allow_null=True, default=None)

    def validate(self, attrs):
        if not attrs['overlap'] < attrs['window_len'] <= attrs['nfft']:
            raise serializers.ValidationError("Need 0 <= overlap < window_len <= nfft.")
        if attrs.get('sample_rate') is not None and not attrs['sample_rate'] > 0:
            raise serializers.ValidationError({'sample_rate': "Must be > 0."})
        return attrs


class MetricsSerializer(StrictSerializer):
    sparsity_tau = serializers.FloatField(min_value=0.0, default=settings.SHINBO['SPARSITY_TAU'])
    sir_cap_db = serializers.FloatField(default=settings.SHINBO['SIR_CAP_DB'])
    envsi_harmonics = serializers.IntegerField(min_value=1, default=settings.SHINBO['ENVSI_HARMONICS'])
    envsi_bins = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    envsi_tolerance = serializers.IntegerField(min_value=0, default=settings.SHINBO['ENVSI_TOLERANCE_BINS'])
    envsi_truncate = serializers.BooleanField(default=False)
    f0 = serializers.FloatField(required=False, allow_null=True, default=None)
    search_band = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), min_length=2, max_length=2, default=[50.0, 150.0]
    )
    frame_rate = serializers.FloatField(required=False, allow_null=True, default=None)

    def validate(self, attrs):
        lo, hi = attrs['search_band']
        if lo > hi:
            raise serializers.ValidationError({'search_band': "Lower edge exceeds upper edge."})
        return attrs


class SurrogateSerializer(StrictSerializer):
    fs = serializers.FloatField(default=50000.0)
    duration = serializers.FloatField(default=1.0)
    f0 = serializers.FloatField(default=91.0)
    carrier_hz = serializers.FloatField(default=3000.0)
    decay = serializers.FloatField(min_value=0.0, default=800.0)
    noise_sigma = serializers.FloatField(min_value=0.0, default=0.3)
    amplitude = serializers.FloatField(min_value=0.0, default=1.0)

    def validate(self, attrs):
        nyquist = attrs['fs'] / 2
        if not attrs['fs'] > 0 or not attrs['duration'] > 0:
            raise serializers.ValidationError("fs and duration must be > 0.")
        for name in ('f0', 'carrier_hz'):
            if not 0 < attrs[name] < nyquist:
                raise serializers.ValidationError({name: "Must lie in (0, fs/2)."})
        return attrs


class MonteCarloSerializer(StrictSerializer):
    runs = serializers.IntegerField(min_value=2, default=30)
    base_seed = serializers.IntegerField(min_value=0, default=0)
    algorithms = serializers.ListField(child=AlgorithmField(), min_length=1, default=list(DEFAULT_MC_ALGORITHMS))
    workers = serializers.IntegerField(min_value=1, default=settings.SHINBO['DEFAULT_WORKERS'])
    ranks = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False, default=list)
    noise = serializers.ListField(child=serializers.FloatField(min_value=0.0), required=False, default=list)
    mode = serializers.ChoiceField(choices=('synthetic', 'surrogate'), default='synthetic')
    surrogate = SurrogateSerializer(required=False)

    def validate_algorithms(self, value):
        if len(set(value)) != len(value):
            raise serializers.ValidationError("Algorithms must be distinct.")
        return value


class OutputSerializer(StrictSerializer):
    dir = serializers.CharField(required=False, allow_null=True, default=None)


class ExperimentConfigSerializer(StrictSerializer):
    synth = SynthSpecSerializer(required=False)
    solver = SolverConfigSerializer(required=False)
    spectrogram = SpectrogramSerializer(required=False)
    metrics = MetricsSerializer(required=False)
    mc = MonteCarloSerializer(required=False)
    output = OutputSerializer(required=False)


def resolve_config(data):
    """
    Validate a raw configuration mapping and return the resolved config with
    every default filled in.

    Raises:
        ConfigError: with the serializer's field errors
    """
    serializer = ExperimentConfigSerializer(data=data or {})
    if not serializer.is_valid():
        errors = _plain(serializer.errors)
        logger.error(f"Invalid experiment configuration: {errors}")
        raise ConfigError("Invalid experiment configuration", errors=errors)
    return _plain(serializer.validated_data)


def _plain(value):
    """Turn DRF's ReturnDict/OrderedDict/ErrorDetail nesting into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, ErrorDetail):
        return str(value)
    return value
