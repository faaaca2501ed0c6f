"""Finite complex measures on R^n: transforms, convolutions, mollification,
tube domains and the identity suite."""

import json

from . import _core
from ._core import (
    Measure,
    MeasureError,
    add,
    apply,
    compact_approximation,
    convolve,
    e_kernel,
    fourier,
    fourier_complex,
    gauss_G,
    gauss_W,
    identity_names,
    mollified_inversion,
    mollify,
    product,
    scale,
    total_variation_norm,
)


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def measure(spec):
    """Build a Measure from a dict or JSON text in the measure schema."""
    return Measure.from_json(_text(spec))


def atoms(points_and_weights):
    """Atomic measure from [(point, weight), ...]; points may be scalars."""
    items = []
    dim = None
    for point, weight in points_and_weights:
        p = [float(point)] if isinstance(point, (int, float)) else [float(c) for c in point]
        dim = len(p) if dim is None else dim
        w = complex(weight)
        items.append({"point": p, "re": w.real, "im": w.imag})
    return measure({"dim": dim or 1, "atoms": items})


def fourier_grid(mu, grid, **quad):
    """Transform samples on a grid, returned as the spectrum dict."""
    return json.loads(_core.fourier_grid(mu, grid, **quad))


def invert(spectrum, x, **quad):
    return _core.invert(_text(spectrum), list(x), **quad)


def half_plane_extension(spectrum, z, **quad):
    return _core.half_plane_extension(_text(spectrum), complex(z), **quad)


def dual_cone(support):
    return _core.dual_cone(_text(support))


def growth_indicator(support, eta):
    return _core.growth_indicator(_text(support), list(eta))


def tube_membership(support, zeta):
    return _core.tube_membership(_text(support), list(zeta))


def run_identity(name, payload, tolerance=None):
    return json.loads(_core.run_identity(name, _text(payload), tolerance))


def verify(seed=0, profile="default"):
    """Run the identity suite; returns (list of report dicts, pinned_pass)."""
    lines, ok = _core.verify(seed, profile)
    return [json.loads(line) for line in lines.splitlines()], ok
