from .factors import FactorPair, FmdState, PenaltyVector
from .solver import ObjectiveValue, ResponseReport, RunTrace, SolverConfig, TraceRecord
from .signal import EnvelopeSpectrum, SampledSignal, Spectrogram
from .evaluation import ReportBundle, SirReport, SynthSpec, TestResult

__all__ = [
    'FactorPair',
    'FmdState',
    'PenaltyVector',
    'ObjectiveValue',
    'ResponseReport',
    'RunTrace',
    'SolverConfig',
    'TraceRecord',
    'EnvelopeSpectrum',
    'SampledSignal',
    'Spectrogram',
    'ReportBundle',
    'SirReport',
    'SynthSpec',
    'TestResult',
]
