"""
Loud Cycles

Exact difference-function jets, independence ladders and parameter blow-ups
for crossing limit cycles of piecewise quadratic perturbations of the Loud
isochronous centers, cross-checked against a numeric piecewise-flow oracle.
"""

__version__ = "0.1.0"
__author__ = "Loud Cycles Team"
