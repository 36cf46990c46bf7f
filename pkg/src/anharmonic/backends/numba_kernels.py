"""numba-compiled versions of the loop kernels.

A private copy of :mod:`anharmonic.backends._loops` is loaded and every
function in it is replaced by an ``njit`` dispatcher, so calls between
kernels resolve to compiled code.
"""
import importlib.util
import inspect
import os
import sys

from numba import njit

_src = os.path.join(os.path.dirname(__file__), "_loops.py")
_spec = importlib.util.spec_from_file_location("anharmonic.backends._loops_jit", _src)
_mod = importlib.util.module_from_spec(_spec)
sys.modules[_spec.name] = _mod  # cached kernels look the module up by name
_spec.loader.exec_module(_mod)

for _name, _obj in list(vars(_mod).items()):
    if inspect.isfunction(_obj) and _obj.__module__ == _mod.__name__:
        setattr(_mod, _name, njit(cache=True)(_obj))

NAME = "numba"

pfq_dd = _mod.pfq_dd
logk_series = _mod.logk_series
logk_hankel = _mod.logk_hankel
logk_integral = _mod.logk_integral
logk_dispatch = _mod.logk_dispatch
log_bessel_k = _mod.log_bessel_k_loop
pfq_real = _mod.pfq_real_loop
delta_table = _mod.delta_table
gis_forward = _mod.gis_forward
