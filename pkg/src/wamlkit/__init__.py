"""Workbench for weakly aggregative modal logic over n-ary Kripke models."""

from .model import NModel, PointedModel
from .syntax import Formula, parse, print_formula

__all__ = ["Formula", "NModel", "PointedModel", "parse", "print_formula"]
