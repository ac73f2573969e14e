"""
Shared base for the depsi management commands.

Options are validated through RunConfigForm; domain errors become
CommandError with exit code 2 (input/validation) or 3 (numeric degeneracy).
"""
import logging
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from .exceptions import DegenerateSampleError
from .forms import RunConfigForm

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_DEGENERATE = 3


class DepsiCommand(BaseCommand):
    """Subclasses set ``command_name`` and implement ``run(config)`` returning the output text."""

    command_name = None

    def add_seed_argument(self, parser):
        parser.add_argument('--seed', type=int, help='Root seed (default: DEPSI_SEED setting)')

    def add_output_arguments(self, parser, formats=('json',), default=None):
        parser.add_argument('--out', help='Write to this file instead of stdout')
        parser.add_argument('--format', choices=formats, default=default or formats[0])

    def add_dataset_arguments(self, parser):
        parser.add_argument('--input', required=True, help='CSV file with a header row')
        parser.add_argument('--y', required=True, help='Response column')
        parser.add_argument('--x', help='Comma-separated covariate columns (default: all but --y)')

    def validate(self, options):
        data = {name: options.get(name) for name in RunConfigForm.base_fields if name != 'command'}
        data['command'] = self.command_name
        form = RunConfigForm(data)
        if not form.is_valid():
            messages = [
                f"{field}: {message}" if field != '__all__' else message
                for field, errors in form.errors.items()
                for message in errors
            ]
            raise CommandError('; '.join(messages), returncode=EXIT_INVALID)
        return form.cleaned_data

    def emit(self, text, out=None):
        if out:
            Path(out).write_text(text, encoding='utf-8')
            if self.verbosity >= 2:
                self.stderr.write(self.style.SUCCESS(f"Wrote {out}"))
        else:
            self.stdout.write(text, ending='')

    def handle(self, *args, **options):
        self.verbosity = options.get('verbosity', 1)
        # command-specific flags that are not part of the run configuration
        self.options = options
        config = self.validate(options)
        try:
            text = self.run(config)
        except DegenerateSampleError as exc:
            raise CommandError('; '.join(exc.messages), returncode=EXIT_DEGENERATE)
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=EXIT_INVALID)
        self.emit(text, config.get('out'))

    def run(self, config):
        raise NotImplementedError('subclasses of DepsiCommand must provide a run() method')
