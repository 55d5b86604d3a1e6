import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from scipy.io import wavfile

from factorization.core.datagen import impulsive_signal, synth_factors
from factorization.core.experiment import build_solver_config, run_algorithm
from factorization.core.metrics import score_factors
from factorization.models import SynthSpec
from factorization.serializers import resolve_config


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp(prefix='shinbo-test-'))
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)

    def call(self, name, *args, **options):
        out = StringIO()
        call_command(name, *args, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def write_config(self, data, name='config.json'):
        path = self.tmp / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return str(path)

    def generate(self, name='data', **options):
        params = {'m': 30, 'n': 20, 'r': 3, 'seed': 1}
        params.update(options)
        self.call('gen', out=str(self.tmp / name), **params)
        return self.tmp / name


class GenCommandTests(CommandTestCase):
    def test_writes_dataset_and_manifest(self):
        data = self.generate()
        W = np.loadtxt(data / 'W_true.csv', delimiter=',', ndmin=2)
        H = np.loadtxt(data / 'H_true.csv', delimiter=',', ndmin=2)
        X = np.loadtxt(data / 'X.csv', delimiter=',', ndmin=2)
        self.assertEqual((W.shape, H.shape, X.shape), ((30, 3), (3, 20), (30, 20)))
        np.testing.assert_allclose(X, W @ H, rtol=1e-15)
        manifest = json.loads((data / 'manifest.json').read_text())
        self.assertEqual(manifest['seed'], 1)
        self.assertEqual(manifest['shapes']['X'], [30, 20])
        self.assertFalse((data / 'X_clean.csv').exists())

    def test_same_seed_gives_identical_files(self):
        first, second = self.generate('a'), self.generate('b')
        for name in ('W_true.csv', 'H_true.csv', 'X.csv'):
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())

    def test_noise_keeps_clean_copy(self):
        data = self.generate(noise=0.05)
        X = np.loadtxt(data / 'X.csv', delimiter=',')
        clean = np.loadtxt(data / 'X_clean.csv', delimiter=',')
        self.assertTrue(np.all(X >= 0))
        self.assertFalse(np.array_equal(X, clean))

    def test_density_too_low_exits_with_config_status(self):
        with self.assertRaises(CommandError) as ctx:
            self.generate(m=100, n=70, density_w=0.001)
        self.assertEqual(ctx.exception.returncode, 3)

    def test_config_file_and_flag_override(self):
        config = self.write_config({'synth': {'m': 12, 'n': 10, 'r': 2, 'seed': 4}})
        self.call('gen', config=config, n=8, out=str(self.tmp / 'cfg'))
        X = np.loadtxt(self.tmp / 'cfg' / 'X.csv', delimiter=',')
        self.assertEqual(X.shape, (12, 8))

    def test_malformed_config(self):
        path = self.tmp / 'broken.json'
        path.write_text('{"synth": ', encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.call('gen', config=str(path), out=str(self.tmp / 'x'))
        self.assertEqual(ctx.exception.returncode, 3)

    def test_unknown_config_key(self):
        config = self.write_config({'synth': {'rows': 10}})
        with self.assertRaises(CommandError) as ctx:
            self.call('gen', config=config, out=str(self.tmp / 'x'))
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertIn('rows', str(ctx.exception))


class RunEvalCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.data = self.generate()

    def run_solver(self, name='run', **options):
        params = {'input': str(self.data / 'X.csv'), 'rank': 3, 'max_iters': 8, 'out': str(self.tmp / name)}
        params.update(options)
        self.call('run', **params)
        return self.tmp / name

    def test_run_writes_artifacts(self):
        run = self.run_solver(algorithm='shinbo')
        for name in ('W.csv', 'H.csv', 'lambda.csv', 'trace.csv', 'report.json'):
            self.assertTrue((run / name).exists(), name)
        report = json.loads((run / 'report.json').read_text())
        self.assertEqual(report['algorithm'], 'shinbo')
        self.assertEqual(report['rank'], 3)
        self.assertEqual(report['solver_config']['lambda_mode'], 'per_row_adaptive')
        header = (run / 'trace.csv').read_text().splitlines()[0]
        self.assertEqual(header, 'k,D0,response,lambda_1,lambda_2,lambda_3,seconds')
        lambdas = np.loadtxt(run / 'lambda.csv', delimiter=',')
        self.assertTrue(np.all(lambdas >= 0))

    def test_fixed_lambda_flag(self):
        run = self.run_solver(lambda_bar=0.5)
        report = json.loads((run / 'report.json').read_text())
        self.assertEqual(report['algorithm'], 'mu:0.5')
        self.assertEqual(report['lambdas'], [0.5, 0.5, 0.5])

    def test_lambda_flag_rejected_for_shinbo(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_solver(algorithm='shinbo', lambda_bar=0.5)
        self.assertEqual(ctx.exception.returncode, 3)

    def test_rank_above_min_dimension(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_solver(rank=25)
        self.assertEqual(ctx.exception.returncode, 3)

    def test_missing_input_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_solver(input=str(self.tmp / 'missing.csv'))
        self.assertEqual(ctx.exception.returncode, 3)

    def test_gen_run_eval_round_trip(self):
        run = self.run_solver(algorithm='mu')
        self.call('eval', run=str(run), truth=str(self.data))
        document = json.loads((run / 'eval.json').read_text())
        self.assertEqual(document['mode'], 'synthetic')

        # the same factorization computed in memory, without any file in between
        W_true, H_true, X = synth_factors(SynthSpec(m=30, n=20, r=3, density_W=0.1, density_H=0.7, seed=1))
        solver = resolve_config({'solver': {'algorithm': 'mu', 'rank': 3, 'max_outer_iters': 8}})['solver']
        pair, _, _ = run_algorithm(X, build_solver_config(solver, 3, 'mu'), 'mu')
        expected = score_factors(W_true, H_true, pair.W, pair.H)
        for key in ('sir_W', 'sir_H', 'sp_W', 'sp_H'):
            self.assertAlmostEqual(document['metrics'][key], expected[key], delta=1e-9)

    def test_eval_is_byte_stable(self):
        run = self.run_solver(algorithm='mu')
        self.call('eval', run=str(run), truth=str(self.data), out=str(self.tmp / 'first.json'))
        self.call('eval', run=str(run), truth=str(self.data), out=str(self.tmp / 'second.json'))
        self.assertEqual((self.tmp / 'first.json').read_bytes(), (self.tmp / 'second.json').read_bytes())

    def test_eval_against_wrong_rank_truth(self):
        run = self.run_solver(rank=2)
        with self.assertRaises(CommandError) as ctx:
            self.call('eval', run=str(run), truth=str(self.data))
        self.assertEqual(ctx.exception.returncode, 3)


class SignalCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        signal = impulsive_signal(8000.0, 1.0, 40.0, 1500.0, 400.0, 0.1, seed=[0, 3])
        self.wav = self.tmp / 'signal.wav'
        wavfile.write(self.wav, 8000, signal.samples.astype(np.float32))
        self.csv = self.tmp / 'signal.csv'
        np.savetxt(self.csv, signal.samples[:2000], delimiter=',')

    def test_stft_from_wav(self):
        self.call('stft', signal=str(self.wav), out=str(self.tmp / 'spec'))
        sidecar = json.loads((self.tmp / 'spec' / 'spectrogram.json').read_text())
        self.assertEqual(sidecar['shape'], [257, (8000 - 128) // 28 + 1])
        self.assertAlmostEqual(sidecar['frame_rate'], 8000 / 28)
        self.assertAlmostEqual(sidecar['freq_resolution'], 8000 / 512)
        S = np.loadtxt(self.tmp / 'spec' / 'spectrogram.csv', delimiter=',')
        self.assertEqual(list(S.shape), sidecar['shape'])

    def test_stft_from_csv_needs_sample_rate(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('stft', signal=str(self.csv), out=str(self.tmp / 'spec'))
        self.assertEqual(ctx.exception.returncode, 3)
        self.call('stft', signal=str(self.csv), sample_rate=8000.0, out=str(self.tmp / 'spec'))
        sidecar = json.loads((self.tmp / 'spec' / 'spectrogram.json').read_text())
        self.assertEqual(sidecar['shape'], [257, 67])

    def test_run_on_signal_then_eval_activations(self):
        run = self.tmp / 'run'
        self.call(
            'run', signal=str(self.wav), algorithm='mu', rank=3, max_iters=5,
            init='truncated_gaussian', w_rule='is_divergence', out=str(run),
        )
        report = json.loads((run / 'report.json').read_text())
        self.assertAlmostEqual(report['input']['frame_rate'], 8000 / 28)
        self.call('eval', run=str(run), f0=40.0, harmonics=3)
        document = json.loads((run / 'eval.json').read_text())
        self.assertEqual(document['mode'], 'activations')
        self.assertEqual(len(document['metrics']['components']), 3)
        self.assertGreaterEqual(document['metrics']['envsi'], 0.0)
        self.assertLessEqual(document['metrics']['envsi'], 1.0)


class MonteCarloCommandTests(CommandTestCase):
    def test_small_batch(self):
        out = self.tmp / 'mc'
        self.call(
            'mc', runs=2, algorithms=['mu', 'shinbo'], workers=1, m=20, n=15, r=2,
            max_iters=5, out=str(out),
        )
        for name in ('runs.csv', 'aggregates.csv', 'kruskal.csv', 'pairwise.csv', 'traces.csv', 'report.json'):
            self.assertTrue((out / name).exists(), name)
        runs = (out / 'runs.csv').read_text().splitlines()
        self.assertEqual(len(runs), 1 + 2 * 2)
        self.assertTrue(runs[0].startswith('seed,rank,noise,algorithm,status,sir_W,sir_H,sp_W,sp_H'))
        report = json.loads((out / 'report.json').read_text())
        self.assertEqual([(r['seed'], r['algorithm']) for r in report['runs']],
                         [(0, 'mu'), (0, 'shinbo'), (1, 'mu'), (1, 'shinbo')])
        self.assertEqual(report['config']['mc']['runs'], 2)

    def test_single_run_is_rejected(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('mc', runs=1, out=str(self.tmp / 'mc'))
        self.assertEqual(ctx.exception.returncode, 3)


class SurrogateCommandTests(CommandTestCase):
    def test_gen_surrogate_then_stft(self):
        config = self.write_config({'mc': {'surrogate': {'duration': 0.1}}})
        self.call('gen', surrogate=True, config=config, seed=2, out=str(self.tmp / 'signal'))
        sidecar = json.loads((self.tmp / 'signal' / 'signal.json').read_text())
        self.assertEqual((sidecar['seed'], sidecar['samples']), (2, 5000))
        rate, samples = wavfile.read(self.tmp / 'signal' / 'signal.wav')
        self.assertEqual((rate, samples.dtype, samples.size), (50000, np.float32, 5000))

        self.call('stft', signal=str(self.tmp / 'signal' / 'signal.wav'), out=str(self.tmp / 'spec'))
        spec = json.loads((self.tmp / 'spec' / 'spectrogram.json').read_text())
        self.assertEqual(spec['shape'], [257, (5000 - 128) // 28 + 1])
