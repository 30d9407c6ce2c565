"""Default parameters shared by the command line and the experiments.

======================  ==========  ==============================================
key                     default     meaning
======================  ==========  ==============================================
N                       1024        truncation / number of moments
tol                     1e-10       power-iteration relative change
max_iter                100000      power-iteration cap
grid_depth              40          disk grid radii 1 - 2^(-j/2), j <= grid_depth
grid_angles             256         equispaced angles per grid radius
grid_uniform            64          extra uniform radii i / grid_uniform
quad_radial             256         Gauss-Legendre radial nodes of the disk rule
quad_angular            512         equispaced angular nodes of the disk rule
quad_levels             48          dyadic levels of the graded radial rule
quad_per_level          16          Gauss nodes per graded level
box_levels              24          dyadic levels inside a Carleson box
box_per_level           6           Gauss nodes per box level
depth                   16          dyadic depth for box criteria
threshold               2.0         moment-decay threshold
seed                    0           PCG64 seed
samples                 100         identity-check sample count
K                       5           counterexample truncation
degree                  32          pairing-probe polynomial degree
trials                  200         pairing-probe trials
N_list                  16,64,256,1024   Hilbert section sizes
s_list                  -0.75,-0.5,-0.25,0,0.5,1   power-weight exponents
scan_N                  65536       finest truncation in the family scan
scan_grid_depth         40          finest grid depth in the family scan
scan_carleson_depth     20          finest Carleson depth in the family scan
scan_box_depth          12          finest box depth in the family scan
======================  ==========  ==============================================

A config file (``HML_CONFIG``) holds ``key = value`` lines with ``#``
comments; command-line flags override it.
"""

from __future__ import annotations

import os

DEFAULTS = {
    "N": 1024,
    "tol": 1e-10,
    "max_iter": 100_000,
    "grid_depth": 40,
    "grid_angles": 256,
    "grid_uniform": 64,
    "quad_radial": 256,
    "quad_angular": 512,
    "quad_levels": 48,
    "quad_per_level": 16,
    "box_levels": 24,
    "box_per_level": 6,
    "depth": 16,
    "threshold": 2.0,
    "seed": 0,
    "samples": 100,
    "K": 5,
    "degree": 32,
    "trials": 200,
    "N_list": "16,64,256,1024",
    "s_list": "-0.75,-0.5,-0.25,0,0.5,1",
    "scan_N": 65536,
    "scan_grid_depth": 40,
    "scan_carleson_depth": 20,
    "scan_box_depth": 12,
}


class ConfigError(ValueError):
    pass


def parse_config(text: str, origin: str = "<config>") -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        default = DEFAULTS[key]
        try:
            out[key] = type(default)(float(value) if isinstance(default, int) and
                                     "e" in value.lower() else value)
        except ValueError:
            raise ConfigError(f"{origin}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def load_defaults(environ=None) -> dict:
    """Defaults overlaid with the file named by ``HML_CONFIG``, if any."""
    environ = os.environ if environ is None else environ
    values = dict(DEFAULTS)
    path = environ.get("HML_CONFIG")
    if path:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config(fh.read(), path))
    return values
