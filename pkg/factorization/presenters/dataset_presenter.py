# factorization/presenters/dataset_presenter.py
import logging
from pathlib import Path

from .base_presenter import BasePresenter

logger = logging.getLogger(__name__)


class DatasetPresenter(BasePresenter):
    """Presenter for the gen command."""

    def __init__(self):
        super().__init__()
        self.dataset_controller = self.service_registry.get_dataset_controller()

    def handle_generate(self, raw_config, out_dir):
        """
        Validate the configuration, generate the dataset and write it.

        Args:
            raw_config (dict): Unvalidated configuration
            out_dir: Output directory

        Returns:
            tuple: (response_data, status)
        """
        return self.handle('gen', self._generate, raw_config, out_dir)

    def _generate(self, raw_config, out_dir):
        config = self.resolve(raw_config)
        dataset = self.dataset_controller.generate(config['synth'])
        written = self.dataset_controller.save(Path(out_dir), dataset, config)
        return self.format_api_response(
            True,
            data={
                'files': {name: str(path) for name, path in written.items()},
                'shapes': {name: list(dataset[name].shape) for name in ('W_true', 'H_true', 'X')},
            },
            message=f"Dataset written to {out_dir}",
        )
