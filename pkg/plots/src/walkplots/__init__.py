"""Static figure rendering for basicwalk experiment outputs."""

from .figures import (FigureError, FigureSpec, KINDS, MissingInputError,
                      SchemaMismatchError, render)

__all__ = ["FigureError", "FigureSpec", "KINDS", "MissingInputError",
           "SchemaMismatchError", "render"]
__version__ = "0.1.0"
