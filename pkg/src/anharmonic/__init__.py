"""Anharmonic oscillator coherent-state toolkit.

Modules
-------
specfun
    Hypergeometric series and modified Bessel functions.
spectrum
    Energy levels, ladder operators and the su(1,1) generators.
states
    Fock vectors, coherent states and cat states.
measure
    Radial weight, certified quadrature and resolution of unity.
intelligent
    Generalized intelligent states and uncertainty reports.
analytic
    Power-series representation and the Kummer solution.
"""
from . import analytic, errors, intelligent, measure, specfun, spectrum, states
from .errors import AnharmonicError
from .intelligent import GisLabel, UncertaintyReport, gis_recurrence, uncertainty_report
from .spectrum import ModelParams
from .states import CoherentLabel, FockVector, coherent

__version__ = "0.1.0"

__all__ = [
    "analytic",
    "errors",
    "intelligent",
    "measure",
    "specfun",
    "spectrum",
    "states",
    "AnharmonicError",
    "CoherentLabel",
    "FockVector",
    "GisLabel",
    "ModelParams",
    "UncertaintyReport",
    "coherent",
    "gis_recurrence",
    "uncertainty_report",
]
