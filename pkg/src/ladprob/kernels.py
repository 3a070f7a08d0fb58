"""Backend selection for the oracle kernels.

The compiled module is used when it imports; setting ``LADPROB_PURE_PYTHON=1``
forces the pure-Python fallback.  Both produce identical tallies.
"""

from __future__ import annotations

import os

from . import _kernels_py

PURE_ENV_VAR = "LADPROB_PURE_PYTHON"
# Stamp arrays in the compiled sampler are sized by the domain; larger
# domains go through the set-based Python sampler instead.
_MAX_COMPILED_DOMAIN = 1 << 22

_compiled = None
if os.environ.get(PURE_ENV_VAR, "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
PRNG_NAME = _kernels_py.PRNG_NAME


def _impl(name: str):
    return getattr(_compiled if _compiled is not None else _kernels_py, name)


def sample_tally(d_y, d_z, n1, n2, trials, seed, disjoint_only=False, max_attempts=0):
    if _compiled is not None and d_y * d_z <= _MAX_COMPILED_DOMAIN:
        return _compiled.sample_tally(d_y, d_z, n1, n2, trials, seed, disjoint_only, max_attempts)
    return _kernels_py.sample_tally(d_y, d_z, n1, n2, trials, seed, disjoint_only, max_attempts)


def exhaustive_m1(d_y, d_z, n):
    return _impl("exhaustive_m1")(d_y, d_z, n)


def exhaustive_m2(d_y, d_z, n):
    return _impl("exhaustive_m2")(d_y, d_z, n)


__all__ = ["BACKEND", "PRNG_NAME", "sample_tally", "exhaustive_m1", "exhaustive_m2"]
