"""Exact dimension analysis of spline spaces over T-meshes.

Subpackages cover the T-mesh structures (mesh, hierarchy), the exact B-net
rank oracle (linalg, oracle), closed-form dimension formulas (dimension), the
mixed-partial-derivative embedding constraint systems (piecewise, embedding),
basis construction (basis), crossing-vertex-relationship graphs (cvr), and a
CLI (cli).
"""

__version__ = "0.1.0"
