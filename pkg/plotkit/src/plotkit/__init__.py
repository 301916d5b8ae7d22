"""Figure rendering for oscnet CSV outputs."""

from .render import (MissingColumnError, RenderError, RenderResult, SeriesSpec,
                     preset_spec, render, render_preset)

__version__ = "0.1.0"
