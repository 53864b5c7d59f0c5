"""Python interface to the wao command layer."""

import json

from ._core import __version__, hilbert_oracle, hilbert_symbol, smith_invariants
from ._core import run as _run

__all__ = [
    "WaoError",
    "__version__",
    "ch",
    "hilbert_oracle",
    "hilbert_symbol",
    "pair",
    "run",
    "selftest",
    "sha",
    "smith_invariants",
    "units_pic",
    "verdict",
]


class WaoError(RuntimeError):
    def __init__(self, exit_code, report):
        self.exit_code = exit_code
        self.report = report
        err = report.get("error", {})
        super().__init__(err.get("message", f"command failed with exit code {exit_code}"))


def run(command, scenario="", *, set=None, tuple=None, degree=1, level=None, bound=None, check=True):
    """Run a command and return its JSON report as a dict.

    With check=True an exit code other than 0 raises WaoError.
    """
    code, report, _ = _run(command, str(scenario), set, tuple, degree, level, bound)
    report = json.loads(report)
    if check and code != 0:
        raise WaoError(code, report)
    return report


def sha(scenario, set=None, degree=1):
    return run("sha", scenario, set=set, degree=degree)["results"]


def ch(scenario, set=None, level=None, bound=None):
    return run("ch", scenario, set=set, level=level, bound=bound)["results"]


def pair(scenario, set=None, bound=None):
    return run("pair", scenario, set=set, bound=bound)


def verdict(scenario, tuple=None, bound=None):
    return run("verdict", scenario, tuple=tuple, bound=bound)["results"]


def units_pic(scenario):
    return run("units-pic", scenario)["results"]


def selftest():
    return run("selftest", check=False)
