# factorization/management/base.py
"""
Shared plumbing for the factorization management commands: the --config
file, flag overrides and the mapping of presenter responses to exit codes.
"""
import argparse
import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

logger = logging.getLogger(__name__)

EXIT_CONFIG = 3


def comma_list(cast):
    """argparse type for comma-separated lists, e.g. '4,5,6'."""
    def parse(text):
        try:
            return [cast(item) for item in text.split(',') if item.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"invalid list {text!r}: {e}")
    return parse


class ExperimentCommand(BaseCommand):
    """
    Base class for commands driven by an ExperimentConfig.

    Subclasses declare FLAG_MAP entries (option name -> (section, key)); any
    option given on the command line overrides the value from --config.
    """

    FLAG_MAP = {}
    output_name = 'out'

    def add_arguments(self, parser):
        parser.add_argument('--config', help="JSON experiment configuration file")
        parser.add_argument('--out', help="Output directory")

    def load_config(self, options):
        raw = {}
        if options.get('config'):
            path = Path(options['config'])
            try:
                raw = json.loads(path.read_text(encoding='utf-8'))
            except OSError as e:
                raise CommandError(f"Cannot read config {path}: {e.strerror}", returncode=EXIT_CONFIG)
            except json.JSONDecodeError as e:
                raise CommandError(f"Malformed JSON in {path}: {e.msg}", returncode=EXIT_CONFIG)
            if not isinstance(raw, dict):
                raise CommandError(f"{path} must hold a JSON object", returncode=EXIT_CONFIG)
        for option, (section, key) in self.FLAG_MAP.items():
            value = options.get(option)
            if value is not None:
                section_data = raw.setdefault(section, {})
                if not isinstance(section_data, dict):
                    raise CommandError(f"config section {section!r} must be an object", returncode=EXIT_CONFIG)
                section_data[key] = value
        return raw

    def output_dir(self, options, raw):
        """--out, then output.dir from the config, then SHINBO_OUTPUT_DIR/<command>."""
        out = options.get('out') or (raw.get('output') or {}).get('dir')
        if not out:
            out = str(Path(settings.SHINBO['OUTPUT_DIR']) / self.output_name)
        raw.setdefault('output', {})
        if isinstance(raw['output'], dict):
            raw['output']['dir'] = str(out)
        return Path(out)

    def finish(self, response, status):
        """Print the presenter response; raise CommandError with its exit status on failure."""
        if status:
            details = response.get('data', {}).get('validation_errors')
            message = response.get('error', 'Command failed')
            if details:
                message = f"{message}: {json.dumps(details, sort_keys=True)}"
            raise CommandError(message, returncode=status)
        if response.get('message'):
            self.stdout.write(self.style.SUCCESS(response['message']))
        return None
