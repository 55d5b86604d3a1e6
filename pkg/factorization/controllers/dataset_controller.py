# factorization/controllers/dataset_controller.py
import logging
from pathlib import Path

from .base_controller import BaseController
from ..core.datagen import add_noise, synth_factors
from ..core.experiment import NOISE_STREAM
from ..exceptions import ShinboError
from ..models import SynthSpec

logger = logging.getLogger(__name__)


class DatasetController(BaseController):
    """
    Controller for synthetic datasets.

    Generates seeded ground-truth factors, optionally corrupts X with
    projected Gaussian noise, and persists or reloads the (W_true, H_true, X)
    triple together with its manifest.
    """

    FILES = {'W_true': 'W_true.csv', 'H_true': 'H_true.csv', 'X': 'X.csv'}

    def generate(self, synth):
        """
        Generate a dataset from a resolved synth section.

        Args:
            synth (dict): m, n, r, density_W, density_H, seed and noise

        Returns:
            dict: W_true, H_true, X (noisy if noise > 0) and X_clean
        """
        spec = SynthSpec(
            m=synth['m'], n=synth['n'], r=synth['r'],
            density_W=synth['density_W'], density_H=synth['density_H'], seed=synth['seed'],
        )
        try:
            W_true, H_true, X = synth_factors(spec)
        except ShinboError as e:
            logger.error(f"Error generating dataset {spec}: {e}")
            raise
        noisy = add_noise(X, synth['noise'], [synth['seed'], NOISE_STREAM]) if synth['noise'] > 0 else X
        logger.info(f"Generated {spec.m}x{spec.n} rank-{spec.r} dataset (seed {spec.seed}, noise {synth['noise']:g})")
        return {'W_true': W_true, 'H_true': H_true, 'X': noisy, 'X_clean': X}

    def save(self, out_dir, dataset, config):
        """
        Write W_true.csv, H_true.csv, X.csv (and X_clean.csv for noisy data)
        plus manifest.json recording the seed and the resolved configuration.

        Returns:
            dict: name -> written Path, including the manifest
        """
        out_dir = self.ensure_dir(out_dir)
        written = {name: self.write_matrix(out_dir / filename, dataset[name]) for name, filename in self.FILES.items()}
        if config['synth']['noise'] > 0:
            written['X_clean'] = self.write_matrix(out_dir / 'X_clean.csv', dataset['X_clean'])
        manifest = {
            'seed': config['synth']['seed'],
            'synth': config['synth'],
            'config': config,
            'files': {name: path.name for name, path in written.items()},
            'shapes': {name: list(dataset[name].shape) for name in written},
        }
        written['manifest'] = self.write_json(out_dir / 'manifest.json', manifest)
        return written

    def load_truth(self, data_dir):
        data_dir = Path(data_dir)
        return self.read_matrix(data_dir / self.FILES['W_true']), self.read_matrix(data_dir / self.FILES['H_true'])
