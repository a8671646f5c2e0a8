"""Toolkit for simulating, quantifying and compensating red-green
color vision deficiency with fuzzy-graded linear transforms."""

from .core import Image8, ImageF, load_image, save_image
from .correct import CorrectionOptions, FuzzyProfile, correct
from .simulate import SimSpec, simulate

__all__ = [
    "Image8",
    "ImageF",
    "load_image",
    "save_image",
    "CorrectionOptions",
    "FuzzyProfile",
    "correct",
    "SimSpec",
    "simulate",
]

__version__ = "0.1.0"
