"""Focusing, rainbows and squeezing of kicked rotors.

Thin Python layer over the C++ engines. Times are dimensionless
(tau = t hbar / I) and angles are in radians.
"""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run as _run, scenario_defaults as _scenario_defaults


def scenario_config(name, **overrides):
    """Default config of a catalog scenario as a dict, with overrides applied."""
    config = _json.loads(_scenario_defaults(name))
    config.update(overrides)
    return config


def run_config(config):
    """Run a config given as a dict or JSON text and return the manifest dict."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run(config)
