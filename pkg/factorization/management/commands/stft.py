# factorization/management/commands/stft.py
from ...presenters import get_registry
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compute the one-sided spectrogram of a WAV/CSV signal (spectrogram.csv + spectrogram.json)."

    output_name = 'stft'
    FLAG_MAP = {
        'sample_rate': ('spectrogram', 'sample_rate'),
        'window_len': ('spectrogram', 'window_len'),
        'overlap': ('spectrogram', 'overlap'),
        'nfft': ('spectrogram', 'nfft'),
        'window': ('spectrogram', 'window'),
        'power': ('spectrogram', 'power'),
    }

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--signal', required=True, help="WAV file or one-column CSV of samples")
        parser.add_argument('--sample-rate', type=float, help="Sample rate in Hz (required for CSV)")
        parser.add_argument('--window-len', type=int)
        parser.add_argument('--overlap', type=int)
        parser.add_argument('--nfft', type=int)
        parser.add_argument('--window', choices=['hann', 'hamming', 'rectangular'])
        parser.add_argument('--magnitude', dest='power', action='store_const', const=False,
                            help="Magnitude instead of power spectrogram")

    def handle(self, *args, **options):
        raw = self.load_config(options)
        out = self.output_dir(options, raw)
        response, status = get_registry().get_signal_presenter().handle_stft(raw, options['signal'], out)
        return self.finish(response, status)
