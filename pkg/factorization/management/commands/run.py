# factorization/management/commands/run.py
from django.core.management.base import CommandError

from ...presenters import get_registry
from ..base import EXIT_CONFIG, ExperimentCommand


class Command(ExperimentCommand):
    help = (
        "Factorize a data matrix (or the spectrogram of a signal) with mu, mu:<lambda> or shinbo; "
        "writes W.csv, H.csv, lambda.csv, trace.csv and report.json."
    )

    output_name = 'run'
    FLAG_MAP = {
        'algorithm': ('solver', 'algorithm'),
        'rank': ('solver', 'rank'),
        'max_iters': ('solver', 'max_outer_iters'),
        'inner_iters': ('solver', 'inner_iters'),
        'tol': ('solver', 'tol'),
        'alpha': ('solver', 'step_alpha'),
        'lambda_max': ('solver', 'lambda_max'),
        'step_scaling': ('solver', 'step_scaling'),
        'exponent': ('solver', 'update_exponent'),
        'seed': ('solver', 'seed'),
        'init': ('solver', 'init'),
        'w_rule': ('solver', 'w_update_rule'),
        'warm_start_iters': ('solver', 'warm_start_iters'),
        'lambda_update': ('solver', 'lambda_update'),
        'jacobian': ('solver', 'jacobian'),
        'outer_reference': ('solver', 'outer_reference'),
        'normalize': ('solver', 'normalize'),
        'sample_rate': ('spectrogram', 'sample_rate'),
        'window_len': ('spectrogram', 'window_len'),
        'overlap': ('spectrogram', 'overlap'),
        'nfft': ('spectrogram', 'nfft'),
        'window': ('spectrogram', 'window'),
        'power': ('spectrogram', 'power'),
    }

    def add_arguments(self, parser):
        super().add_arguments(parser)
        source = parser.add_mutually_exclusive_group()
        source.add_argument('--input', help="CSV data matrix X")
        source.add_argument('--signal', help="WAV/CSV signal; its spectrogram is factorized")
        parser.add_argument('--algorithm', help="mu, mu:<lambda> or shinbo")
        parser.add_argument('--lambda', dest='lambda_bar', type=float,
                            help="Fixed penalty for mu (same as --algorithm mu:<lambda>)")
        parser.add_argument('--rank', type=int)
        parser.add_argument('--max-iters', type=int, help="Outer iterations K")
        parser.add_argument('--inner-iters', type=int, help="Inner row iterations T")
        parser.add_argument('--tol', type=float)
        parser.add_argument('--alpha', type=float, help="Step size of the lambda update")
        parser.add_argument('--lambda-max', type=float, help="Upper bound of every lambda_l")
        parser.add_argument('--step-scaling', choices=['clipped', 'none'])
        parser.add_argument('--exponent', type=float, help="Exponent of the IS multiplicative updates, in (0, 1]")
        parser.add_argument('--seed', type=int)
        parser.add_argument('--init', choices=['nndsvd', 'warm_start', 'truncated_gaussian'])
        parser.add_argument('--w-rule', choices=['paper_euclidean', 'is_divergence'])
        parser.add_argument('--warm-start-iters', type=int)
        parser.add_argument('--lambda-update', choices=['per_row', 'batched'])
        parser.add_argument('--jacobian', choices=['diagonal', 'full'])
        parser.add_argument('--outer-reference', choices=['background', 'residual'])
        parser.add_argument('--no-normalize', dest='normalize', action='store_const', const=False)
        parser.add_argument('--sample-rate', type=float)
        parser.add_argument('--window-len', type=int)
        parser.add_argument('--overlap', type=int)
        parser.add_argument('--nfft', type=int)
        parser.add_argument('--window', choices=['hann', 'hamming', 'rectangular'])
        parser.add_argument('--magnitude', dest='power', action='store_const', const=False)

    def handle(self, *args, **options):
        if options.get('lambda_bar') is not None:
            algorithm = options.get('algorithm') or 'mu'
            if algorithm.strip().lower() != 'mu':
                raise CommandError("--lambda only applies to --algorithm mu", returncode=EXIT_CONFIG)
            options['algorithm'] = f"mu:{options['lambda_bar']:g}"
        raw = self.load_config(options)
        out = self.output_dir(options, raw)
        response, status = get_registry().get_run_presenter().handle_run(
            raw, out, input_path=options.get('input'), signal_path=options.get('signal'),
        )
        return self.finish(response, status)
