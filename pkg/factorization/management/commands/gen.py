# factorization/management/commands/gen.py
from ...presenters import get_registry
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = (
        "Generate a seeded synthetic dataset (W_true.csv, H_true.csv, X.csv, manifest.json) "
        "or, with --surrogate, a bearing-like test signal (signal.wav, signal.json)."
    )

    output_name = 'gen'
    FLAG_MAP = {
        'm': ('synth', 'm'),
        'n': ('synth', 'n'),
        'r': ('synth', 'r'),
        'density_w': ('synth', 'density_W'),
        'density_h': ('synth', 'density_H'),
        'seed': ('synth', 'seed'),
        'noise': ('synth', 'noise'),
    }

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--m', type=int, help="Rows of X")
        parser.add_argument('--n', type=int, help="Columns of X")
        parser.add_argument('--r', type=int, help="Rank")
        parser.add_argument('--density-w', type=float, help="Fraction of nonzeros in W (default 0.10)")
        parser.add_argument('--density-h', type=float, help="Fraction of nonzeros in H (default 0.70)")
        parser.add_argument('--seed', type=int)
        parser.add_argument('--noise', type=float, help="Noise level epsilon (default 0)")
        parser.add_argument('--surrogate', action='store_true',
                            help="Write the bearing surrogate signal (mc.surrogate section) instead of a matrix dataset")

    def handle(self, *args, **options):
        raw = self.load_config(options)
        out = self.output_dir(options, raw)
        registry = get_registry()
        if options.get('surrogate'):
            response, status = registry.get_signal_presenter().handle_surrogate(raw, out)
        else:
            response, status = registry.get_dataset_presenter().handle_generate(raw, out)
        return self.finish(response, status)
