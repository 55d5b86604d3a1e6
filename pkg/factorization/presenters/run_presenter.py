# factorization/presenters/run_presenter.py
import logging
from pathlib import Path

from .base_presenter import EXIT_CONFIG, BasePresenter
from ..core.experiment import MATRIX_INIT, SIGNAL_INIT

logger = logging.getLogger(__name__)


class RunPresenter(BasePresenter):
    """
    Presenter for the run command.

    Loads the data matrix (a CSV matrix, or a signal turned into its
    spectrogram), runs the selected algorithm and writes W, H, lambda, the
    per-iteration trace and report.json.
    """

    def __init__(self):
        super().__init__()
        self.solver_controller = self.service_registry.get_solver_controller()
        self.signal_controller = self.service_registry.get_signal_controller()

    def trace_header(self, rank):
        return ['k', 'D0', 'response'] + [f"lambda_{l + 1}" for l in range(rank)] + ['seconds']

    def trace_rows(self, trace):
        """One row per outer iteration: k, D0, response, lambda_1..lambda_r, seconds."""
        rows = []
        for record in trace:
            row = {'k': record.k, 'D0': record.objective.fit, 'response': record.response, 'seconds': record.seconds}
            row.update({f"lambda_{l + 1}": value for l, value in enumerate(record.lambdas)})
            rows.append(row)
        return rows

    def format_run_report(self, config, outcome, source):
        trace = outcome.trace
        last = trace.records[-1] if trace.records else None
        return {
            'algorithm': outcome.algorithm,
            'config': config,
            'solver_config': outcome.config.to_dict(),
            'input': source,
            'shape': list(outcome.factors.shape),
            'rank': outcome.factors.rank,
            'iterations': len(trace),
            'stop_reason': trace.stop_reason,
            'final': None if last is None else {
                'D0': last.objective.fit,
                'penalty': last.objective.penalty,
                'response': last.response,
            },
            'lambdas': [float(v) for v in outcome.lambdas],
        }

    def handle_run(self, raw_config, out_dir, input_path=None, signal_path=None):
        """
        Args:
            raw_config (dict): Unvalidated configuration
            out_dir: Output directory
            input_path: CSV data matrix (synthetic mode)
            signal_path: WAV/CSV signal (real mode, spectrogram built first)

        Returns:
            tuple: (response_data, status)
        """
        return self.handle('run', self._run, raw_config, out_dir, input_path, signal_path)

    def _run(self, raw_config, out_dir, input_path, signal_path):
        config = self.resolve(raw_config)
        out_dir = Path(out_dir)
        source = {}
        default_init = MATRIX_INIT
        if signal_path is not None:
            signal = self.signal_controller.load(signal_path, config['spectrogram']['sample_rate'])
            spec = self.signal_controller.spectrogram(signal, config['spectrogram'])
            X = spec.power
            default_init = SIGNAL_INIT
            source = {
                'signal': str(signal_path),
                'frame_rate': spec.frame_rate,
                'freq_resolution': spec.freq_resolution,
            }
        elif input_path is not None:
            X = self.solver_controller.read_matrix(input_path)
            source = {'matrix': str(input_path)}
        else:
            return self.format_api_response(False, error="Either an input matrix or a signal is required", status=EXIT_CONFIG)

        outcome = self.solver_controller.run(X, config['solver'], default_init=default_init)
        written = self.solver_controller.save_factors(out_dir, outcome)
        written['trace'] = self.solver_controller.write_rows(
            out_dir / 'trace.csv', self.trace_header(outcome.factors.rank), self.trace_rows(outcome.trace),
        )
        report = self.format_run_report(config, outcome, source)
        written['report'] = self.solver_controller.write_json(out_dir / 'report.json', report)
        return self.format_api_response(
            True,
            data={
                'iterations': report['iterations'],
                'stop_reason': report['stop_reason'],
                'final': report['final'],
                'files': {name: str(path) for name, path in written.items()},
            },
            message=f"{outcome.algorithm} stopped ({outcome.trace.stop_reason}) after {len(outcome.trace)} iterations",
        )
