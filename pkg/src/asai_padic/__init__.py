"""Explicit local factors, zeta integrals and Iwasawa-algebra measures for
p-adic Asai L-functions of GL_2 over a quadratic extension."""

from .errors import ArtifactError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["ArtifactError", "BACKEND", "__version__"]
