""" Online and offline omniprediction: proper calibration, multiaccuracy
and the weak learners that combine them, with the calibration metrics and
adversarial constructions used to evaluate them.
"""
import logging

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
