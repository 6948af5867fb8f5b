"""Deterministic table emission: CSV with LF endings, exact rationals as
num/den, a manifest comment line carrying the seed and parameters so that
identical manifests give byte-identical files."""

import sys
from fractions import Fraction


def render_cell(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return ""
    return str(x)


def emit_table(rows, schema, path, manifest=None):
    """Write rows (iterables matching schema) as CSV; '-' writes to stdout."""
    lines = []
    if manifest:
        items = " ".join(f"{k}={render_cell(v)}" for k, v in sorted(manifest.items()))
        lines.append(f"# {items}")
    lines.append(",".join(schema))
    for row in rows:
        cells = list(row)
        if len(cells) != len(schema):
            raise ValueError(f"row arity {len(cells)} != schema arity {len(schema)}")
        lines.append(",".join(render_cell(c) for c in cells))
    data = "\n".join(lines) + "\n"
    if path == "-" or path is None:
        sys.stdout.write(data)
    else:
        try:
            with open(path, "w", newline="") as fh:
                fh.write(data)
        except OSError as e:
            raise OSError(f"cannot write table to {path}: {e}") from e


def parse_rational(s):
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))
