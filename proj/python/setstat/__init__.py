"""Set-valued statistics: convex sets, random sets, set regression, inverse optimisation."""

import json as _json

from ._setstat import *  # noqa: F401,F403
from ._setstat import __version__, run_experiment as _run_experiment


def run(config):
    """Run an experiment from a config dict; returns the summary dict."""
    return _json.loads(_run_experiment(_json.dumps(config)))
