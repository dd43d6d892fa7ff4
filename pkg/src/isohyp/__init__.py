"""isohyp: a numerical laboratory for weighted isoperimetry in hyperbolic space.

Geodesic balls centered at the base point are the expected minimizers of
the weighted perimeter at fixed weighted volume whenever the density is
radial and strictly log-convex.  This package provides the machinery to
verify the computable consequences of that statement at desk scale:
exact Poincare-disk geometry, weighted functionals of rotationally
symmetric sets, constant weighted-mean-curvature shooting with tangent
event detection, randomized comparison-lemma verifiers, the rank-one
symmetric space reduction, and a volume-constrained shape optimizer.
"""

__version__ = "0.1.0"
