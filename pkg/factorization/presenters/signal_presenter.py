# factorization/presenters/signal_presenter.py
import logging
from pathlib import Path

from .base_presenter import BasePresenter

logger = logging.getLogger(__name__)


class SignalPresenter(BasePresenter):
    """Presenter for the stft command."""

    def __init__(self):
        super().__init__()
        self.signal_controller = self.service_registry.get_signal_controller()

    def handle_stft(self, raw_config, signal_path, out_dir):
        return self.handle('stft', self._stft, raw_config, signal_path, out_dir)

    def _stft(self, raw_config, signal_path, out_dir):
        config = self.resolve(raw_config)
        spectrogram = config['spectrogram']
        signal = self.signal_controller.load(signal_path, spectrogram['sample_rate'])
        spec = self.signal_controller.spectrogram(signal, spectrogram)
        matrix, sidecar = self.signal_controller.save_spectrogram(Path(out_dir), spec, spectrogram, signal_path)
        return self.format_api_response(
            True,
            data={
                'shape': list(spec.shape),
                'freq_resolution': spec.freq_resolution,
                'frame_rate': spec.frame_rate,
                'files': {'spectrogram': str(matrix), 'sidecar': str(sidecar)},
            },
            message=f"Spectrogram {spec.shape[0]}x{spec.shape[1]} written to {out_dir}",
        )

    def handle_surrogate(self, raw_config, out_dir):
        """
        Draw the bearing surrogate from mc.surrogate with seed synth.seed and
        write it as signal.wav plus signal.json.

        Returns:
            tuple: (response_data, status)
        """
        return self.handle('gen', self._surrogate, raw_config, out_dir)

    def _surrogate(self, raw_config, out_dir):
        config = self.resolve(raw_config)
        surrogate = config['mc']['surrogate']
        seed = config['synth']['seed']
        signal = self.signal_controller.surrogate(surrogate, seed)
        wav, sidecar = self.signal_controller.save_surrogate(Path(out_dir), signal, surrogate, seed)
        return self.format_api_response(
            True,
            data={'samples': int(signal.samples.size), 'files': {'signal': str(wav), 'sidecar': str(sidecar)}},
            message=f"Surrogate signal ({signal.duration:g} s at {signal.sample_rate:g} Hz) written to {out_dir}",
        )
