# factorization/controllers/base_controller.py
import json
import logging
from pathlib import Path

import numpy as np
from django.core.cache import cache
from scipy.io import wavfile

from ..exceptions import ConfigError, DomainError
from ..models import SampledSignal

logger = logging.getLogger(__name__)


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


class BaseController:
    """
    Base controller class that other controllers inherit from.

    This class owns the artifact formats shared by every command: headerless
    full-precision CSV matrices, sorted-key JSON documents and mono signals
    (WAV or one-column CSV). Loaded matrices are cached per file version.
    """

    MATRIX_FORMAT = '%.17g'

    def __init__(self, cache_timeout=300):
        """
        Initialize the base controller.

        Args:
            cache_timeout: Timeout for cached matrices in seconds (default: 300)
        """
        self.cache_timeout = cache_timeout

    def ensure_dir(self, path):
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def write_matrix(self, path, matrix):
        """
        Write a matrix as headerless row-major CSV with 17 significant digits.

        Args:
            path: Destination file
            matrix: 1-D or 2-D array (1-D is written as one row)

        Returns:
            Path: The written file
        """
        path = Path(path)
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        np.savetxt(path, matrix, delimiter=',', fmt=self.MATRIX_FORMAT)
        return path

    def read_matrix(self, path, use_cache=True):
        """
        Read a headerless CSV matrix.

        Args:
            path: CSV file
            use_cache (bool): Whether to use cache

        Returns:
            np.ndarray: 2-D float array
        """
        path = Path(path)
        try:
            stat = path.stat()
        except OSError as e:
            logger.error(f"Error reading matrix {path}: {e}")
            raise ConfigError(f"cannot read matrix file {path}: {e.strerror}", path=str(path)) from e

        cache_key = f"matrix_{path.resolve()}_{stat.st_mtime_ns}_{stat.st_size}"
        if use_cache:
            cached = cache.get(cache_key)
            if cached is not None:
                return cached.copy()

        try:
            matrix = np.loadtxt(path, delimiter=',', ndmin=2)
        except ValueError as e:
            logger.error(f"Error parsing matrix {path}: {e}")
            raise ConfigError(f"malformed matrix file {path}: {e}", path=str(path)) from e

        if use_cache:
            cache.set(cache_key, matrix, self.cache_timeout)
        return matrix.copy()

    def write_json(self, path, data):
        """Write `data` as byte-stable JSON (sorted keys, fixed indentation, trailing newline)."""
        path = Path(path)
        text = json.dumps(data, sort_keys=True, indent=2, default=_json_default, allow_nan=False)
        path.write_text(text + '\n', encoding='utf-8')
        return path

    def read_json(self, path):
        path = Path(path)
        try:
            return json.loads(path.read_text(encoding='utf-8'))
        except OSError as e:
            logger.error(f"Error reading JSON {path}: {e}")
            raise ConfigError(f"cannot read {path}: {e.strerror}", path=str(path)) from e
        except json.JSONDecodeError as e:
            logger.error(f"Error parsing JSON {path}: {e}")
            raise ConfigError(f"malformed JSON in {path}: {e.msg}", path=str(path)) from e

    def write_rows(self, path, header, rows):
        """Write a tidy CSV table with a header line; floats keep full precision."""
        path = Path(path)
        lines = [','.join(header)]
        for row in rows:
            lines.append(','.join(self._cell(row.get(column)) for column in header))
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        return path

    @staticmethod
    def _cell(value):
        if value is None:
            return ''
        if isinstance(value, (float, np.floating)):
            return format(float(value), '.17g')
        text = str(value)
        if any(c in text for c in ',"\n'):
            return '"' + text.replace('"', '""') + '"'
        return text

    def read_signal(self, path, sample_rate=None):
        """
        Read a mono signal from a 16-bit / 32-bit float PCM WAV file or from
        a one-column CSV (sample_rate then required).

        Returns:
            SampledSignal
        """
        path = Path(path)
        if path.suffix.lower() == '.wav':
            try:
                rate, data = wavfile.read(path)
            except (OSError, ValueError) as e:
                logger.error(f"Error reading WAV {path}: {e}")
                raise ConfigError(f"cannot read WAV file {path}: {e}", path=str(path)) from e
            if data.ndim != 1:
                raise DomainError(f"{path} has {data.shape[1]} channels; only mono signals are supported")
            if data.dtype == np.int16:
                samples = data.astype(float) / 32768.0
            elif data.dtype == np.float32:
                samples = data.astype(float)
            else:
                raise DomainError(f"{path}: unsupported WAV sample type {data.dtype}")
            return SampledSignal(samples=samples, sample_rate=float(sample_rate or rate))

        if sample_rate is None:
            raise ConfigError(f"{path}: a sample rate is required for CSV signals")
        matrix = self.read_matrix(path, use_cache=False)
        if matrix.shape[1] != 1:
            matrix = matrix.T if matrix.shape[0] == 1 else None
        if matrix is None:
            raise DomainError(f"{path}: expected a single column of samples")
        return SampledSignal(samples=matrix[:, 0], sample_rate=float(sample_rate))

    def write_wav(self, path, signal):
        """Write a SampledSignal as 32-bit float WAV (integer sample rate)."""
        path = Path(path)
        wavfile.write(path, int(round(signal.sample_rate)), signal.samples.astype(np.float32))
        return path
