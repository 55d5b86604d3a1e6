# factorization/management/commands/eval.py
from ...presenters import get_registry
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Recompute metrics (SIR/sparsity against truth, or ENVSI of activations) from persisted factors."

    FLAG_MAP = {
        'f0': ('metrics', 'f0'),
        'tau': ('metrics', 'sparsity_tau'),
        'harmonics': ('metrics', 'envsi_harmonics'),
    }

    def add_arguments(self, parser):
        parser.add_argument('--config', help="JSON experiment configuration file")
        parser.add_argument('--out', help="Output JSON file (default: <run>/eval.json)")
        parser.add_argument('--run', help="Run directory with W.csv, H.csv and report.json")
        parser.add_argument('--W', dest='W', help="Estimated W (CSV)")
        parser.add_argument('--H', dest='H', help="Estimated H (CSV)")
        parser.add_argument('--truth', help="Dataset directory with W_true.csv and H_true.csv")
        parser.add_argument('--frame-rate', type=float, help="Frame rate of the factorized spectrogram")
        parser.add_argument('--f0', type=float, help="Fundamental for ENVSI (default: detected)")
        parser.add_argument('--tau', type=float, help="Sparsity threshold")
        parser.add_argument('--harmonics', type=int, help="ENVSI harmonics M1")

    def handle(self, *args, **options):
        raw = self.load_config(options)
        response, status = get_registry().get_report_presenter().handle_eval(
            raw,
            out_path=options.get('out'),
            run_dir=options.get('run'),
            W_path=options.get('W'),
            H_path=options.get('H'),
            truth_dir=options.get('truth'),
            frame_rate=options.get('frame_rate'),
        )
        return self.finish(response, status)
