"""Field-spec documents and the ``vlab`` command line."""

from .build import build_field, build_model
from .runner import Report, run_checks
from .spec import FieldSpecDocument, SpecSyntaxError, parse_spec, print_spec

__all__ = ["build_field", "build_model", "Report", "run_checks", "FieldSpecDocument",
           "SpecSyntaxError", "parse_spec", "print_spec"]
