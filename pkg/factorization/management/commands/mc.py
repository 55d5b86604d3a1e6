# factorization/management/commands/mc.py
from ...presenters import get_registry
from ..base import ExperimentCommand, comma_list


class Command(ExperimentCommand):
    help = (
        "Monte-Carlo comparison of algorithms: per-run metrics, mean/std tables, Kruskal-Wallis and "
        "BH-adjusted pairwise Mann-Whitney tests, convergence traces."
    )

    output_name = 'mc'
    FLAG_MAP = {
        'runs': ('mc', 'runs'),
        'seed': ('mc', 'base_seed'),
        'algorithms': ('mc', 'algorithms'),
        'workers': ('mc', 'workers'),
        'ranks': ('mc', 'ranks'),
        'noise': ('mc', 'noise'),
        'mode': ('mc', 'mode'),
        'm': ('synth', 'm'),
        'n': ('synth', 'n'),
        'r': ('synth', 'r'),
        'rank': ('solver', 'rank'),
        'max_iters': ('solver', 'max_outer_iters'),
        'inner_iters': ('solver', 'inner_iters'),
        'tol': ('solver', 'tol'),
        'alpha': ('solver', 'step_alpha'),
        'lambda_max': ('solver', 'lambda_max'),
        'step_scaling': ('solver', 'step_scaling'),
        'exponent': ('solver', 'update_exponent'),
        'init': ('solver', 'init'),
    }

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--runs', type=int, help="Replicates per setting (>= 2)")
        parser.add_argument('--seed', type=int, help="Seed of the first replicate")
        parser.add_argument('--algorithms', type=comma_list(str), help="e.g. mu,mu:0.1,mu:0.5,shinbo")
        parser.add_argument('--workers', type=int, help="Worker processes (default: SHINBO_WORKERS)")
        parser.add_argument('--ranks', type=comma_list(int), help="Rank sweep, e.g. 4,5,6")
        parser.add_argument('--noise', type=comma_list(float), help="Noise sweep, e.g. 0.01,0.05,0.1")
        parser.add_argument('--mode', choices=['synthetic', 'surrogate'])
        parser.add_argument('--m', type=int)
        parser.add_argument('--n', type=int)
        parser.add_argument('--r', type=int)
        parser.add_argument('--rank', type=int, help="Factorization rank (default: synth r)")
        parser.add_argument('--max-iters', type=int)
        parser.add_argument('--inner-iters', type=int)
        parser.add_argument('--tol', type=float)
        parser.add_argument('--alpha', type=float)
        parser.add_argument('--lambda-max', type=float, help="Upper bound of every lambda_l")
        parser.add_argument('--step-scaling', choices=['clipped', 'none'])
        parser.add_argument('--exponent', type=float, help="Exponent of the IS multiplicative updates, in (0, 1]")
        parser.add_argument('--init', choices=['nndsvd', 'warm_start', 'truncated_gaussian'])

    def handle(self, *args, **options):
        raw = self.load_config(options)
        out = self.output_dir(options, raw)
        response, status = get_registry().get_report_presenter().handle_monte_carlo(raw, out)
        if not status and response['data']['partial']:
            self.stderr.write(self.style.WARNING("Some runs failed; see failures in report.json"))
        return self.finish(response, status)
