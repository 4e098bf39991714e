"""Reading and writing series (CSV) and weights (JSON)."""

import json
from pathlib import Path

import numpy as np

from .core import OffCenterWindow, Signal, TaperedWindow, Theta, theta_from_weights
from .exceptions import InvalidWeightsError

FLOAT_FORMAT = "%.17g"


def parse_signal_lines(lines, source="<input>"):
    """Parse CSV lines: one value per line, or ``index,value`` pairs.

    Blank lines and lines starting with ``#`` are skipped. A non-numeric
    first record is taken as a header.
    """
    values = []
    seen_record = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) > 2:
            raise ValueError(f"{source}:{lineno}: expected 1 or 2 columns, got {len(fields)}")
        try:
            values.append(float(fields[-1]))
        except ValueError:
            if seen_record:
                raise ValueError(f"{source}:{lineno}: cannot parse {fields[-1]!r}") from None
        seen_record = True
    return Signal(values)


def read_signal_csv(path):
    path = Path(path)
    with path.open() as fh:
        return parse_signal_lines(fh, str(path))


def format_values(values):
    return "".join(FLOAT_FORMAT % v + "\n" for v in np.asarray(values, dtype=np.float64))


def write_signal_csv(path, values):
    Path(path).write_text(format_values(values))


def write_indexed(path, values, index=None):
    """Two-column ``index,value`` data file, ready for plotting."""
    values = np.asarray(values, dtype=np.float64)
    index = np.arange(values.size) if index is None else np.asarray(index)
    lines = ["index,value\n"]
    lines += [f"{i},{FLOAT_FORMAT % v}\n" for i, v in zip(index.tolist(), values)]
    Path(path).write_text("".join(lines))


def theta_from_dict(obj):
    """Build :class:`Theta` from a weights mapping.

    Accepted layouts (arrays are odd-length, centred at ``k = 0``):

    * ``{"alpha": [...], "beta": [...]}``
    * ``{"p": [...], "q": [...], "A": a}`` with ``B = 1 - a``
    * ``{"w": [...]}``, a single tapered window mapped with ``A = w_0``
    """
    if not isinstance(obj, dict):
        raise InvalidWeightsError("weights JSON must be an object")
    if "alpha" in obj:
        return Theta(obj["alpha"], obj.get("beta", [0.0]))
    if "p" in obj:
        if "A" not in obj:
            raise InvalidWeightsError('"p"/"q" weights need a mass "A"')
        a = float(obj["A"])
        if not 0 < a <= 1:
            raise InvalidWeightsError(f'"A" must lie in (0, 1], got {a}')
        p = TaperedWindow(obj["p"])
        if a == 1.0:
            return Theta(p.weights)
        if "q" not in obj:
            raise InvalidWeightsError('"q" is required when A < 1')
        return Theta.from_shapes(p.weights, OffCenterWindow(obj["q"]).weights, a)
    if "w" in obj:
        return theta_from_weights(obj["w"])
    raise InvalidWeightsError('weights JSON needs "alpha"/"beta", "p"/"q"/"A" or "w"')


def read_weights_json(path):
    with Path(path).open() as fh:
        return theta_from_dict(json.load(fh))


def dump_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
