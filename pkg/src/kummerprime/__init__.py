"""Primality proving for 4 m^2 5^n - 1 with the Kummer surface of y^2 = x^5 + h."""

from .certify import CertificationTask, Verdict, certify, validate_task
from .genus2 import Curve, MumfordDivisor
from .kummer import KummerPoint, kappa, start_vector
from .sqrt5synth import Sqrt5Map, synthesize

__version__ = "0.1.0"

__all__ = ["CertificationTask", "Verdict", "certify", "validate_task", "Curve",
           "MumfordDivisor", "KummerPoint", "kappa", "start_vector", "Sqrt5Map", "synthesize"]
