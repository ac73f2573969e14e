"""
Domain errors for the depsi app.

Every error is a django ValidationError carrying a stable ``code`` so that
forms, management commands and Celery tasks can report them uniformly.
"""
from django.core.exceptions import ValidationError


class DepsiError(ValidationError):
    default_code = 'invalid'

    def __init__(self, message, code=None, params=None):
        super().__init__(message, code=code or self.default_code, params=params)


class InvalidInputError(DepsiError):
    """Malformed dataset, parameter or file."""
    default_code = 'invalid'


class IncomparableGridsError(DepsiError):
    """Two grids of different resolution were compared."""
    default_code = 'incomparable'


class GridInvariantError(DepsiError):
    """A grid is not grounded, has non-uniform margins or is not 2-increasing."""
    default_code = 'grid_invariant'


class InvalidFamilyError(DepsiError):
    default_code = 'invalid_family'


class NoClosedFormError(DepsiError):
    default_code = 'no_closed_form'


class DegenerateSampleError(DepsiError):
    """The sample makes a measure undefined (constant response)."""
    default_code = 'degenerate'
