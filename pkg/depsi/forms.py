from pathlib import Path

from django import forms
from django.conf import settings

from .exceptions import InvalidFamilyError
from .families import FamilySpec
from .models import MAX_SEED, OutputFormat, SeedSpec, Variant

COMMAND_CHOICES = [
    ('simulate', 'Sample a family'),
    ('estimate', 'Estimate T, R2 and Q from a CSV'),
    ('measures', 'Estimate on a family sample against closed forms'),
    ('featsel', 'Greedy feature selection'),
    ('family', 'Closed-form psi parameters and measures'),
    ('psi_grid', 'Export psi on a node grid'),
    ('convergence', 'd_inf convergence campaign'),
]


class RunConfigForm(forms.Form):
    """
    Validated run configuration shared by all management commands.

    Commands pass their parsed options as form data; ``cleaned_data`` then
    holds a FamilySpec, a SeedSpec, the covariate list and the size list.
    """

    command = forms.ChoiceField(choices=COMMAND_CHOICES)
    input = forms.CharField(required=False)
    y = forms.CharField(required=False)
    x = forms.CharField(required=False)
    family = forms.CharField(required=False)
    n = forms.IntegerField(required=False, min_value=2)
    sizes = forms.CharField(required=False)
    reps = forms.IntegerField(required=False, min_value=1)
    grid = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False, min_value=0, max_value=MAX_SEED)
    threshold = forms.FloatField(required=False, min_value=0.0)
    max_steps = forms.IntegerField(required=False, min_value=1)
    jobs = forms.IntegerField(required=False)
    variant = forms.ChoiceField(choices=Variant.choices, required=False)
    out = forms.CharField(required=False)
    format = forms.ChoiceField(choices=OutputFormat.choices, required=False)

    # fields each command cannot run without
    REQUIRED_BY_COMMAND = {
        'simulate': ('family', 'n'),
        'estimate': ('input', 'y'),
        'measures': ('family', 'n'),
        'featsel': ('input', 'y'),
        'family': ('family',),
        'convergence': ('family', 'sizes'),
    }

    def clean_input(self):
        path = self.cleaned_data.get('input')
        if path and not Path(path).is_file():
            raise forms.ValidationError(f"Input file '{path}' does not exist or is not readable.")
        return path or None

    def clean_x(self):
        raw = self.cleaned_data.get('x')
        if not raw:
            return None
        columns = [c.strip() for c in raw.split(',') if c.strip()]
        if len(set(columns)) != len(columns):
            raise forms.ValidationError("Covariate columns must be distinct.")
        return columns

    def clean_family(self):
        raw = self.cleaned_data.get('family')
        if not raw:
            return None
        try:
            return FamilySpec.parse(raw)
        except InvalidFamilyError as exc:
            raise forms.ValidationError(exc.messages, code='invalid_family')

    def clean_sizes(self):
        raw = self.cleaned_data.get('sizes')
        if not raw:
            return None
        try:
            sizes = [int(part) for part in raw.split(',') if part.strip()]
        except ValueError:
            raise forms.ValidationError(f"Sizes must be a comma-separated list of integers, got '{raw}'.")
        if not sizes or min(sizes) < 2:
            raise forms.ValidationError("Every sample size must be at least 2.")
        return sizes

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return SeedSpec.from_value(seed)

    def clean_out(self):
        path = self.cleaned_data.get('out')
        if not path:
            return None
        parent = Path(path).resolve().parent
        if not parent.is_dir():
            raise forms.ValidationError(f"Output directory '{parent}' does not exist.")
        return path

    def clean(self):
        cleaned_data = super().clean()
        command = cleaned_data.get('command')
        for name in self.REQUIRED_BY_COMMAND.get(command, ()):
            if cleaned_data.get(name) in (None, '', []) and name not in self.errors:
                self.add_error(name, f"--{name.replace('_', '-')} is required for '{command}'.")

        if command == 'psi_grid' and not cleaned_data.get('family') and not cleaned_data.get('input'):
            if 'family' not in self.errors and 'input' not in self.errors:
                raise forms.ValidationError("psi_grid needs either --family or --input with --y.")
        if command == 'psi_grid' and cleaned_data.get('input') and not cleaned_data.get('y'):
            self.add_error('y', "--y is required with --input.")

        if cleaned_data.get('grid') is None:
            cleaned_data['grid'] = getattr(settings, 'DEPSI_GRID_RESOLUTION', 50)
        if cleaned_data.get('jobs') is None:
            cleaned_data['jobs'] = getattr(settings, 'DEPSI_N_JOBS', 1)
        if not cleaned_data.get('variant'):
            cleaned_data['variant'] = Variant.DSTAR
        return cleaned_data
