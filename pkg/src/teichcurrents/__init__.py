"""Marked hyperbolic surfaces, Liouville currents and limit cones.

Modules
-------
moebius
    PSL(2, R) elements, boundary points and their spectral data.
words
    Reduced words, canonical closed-curve representatives, enumeration.
holonomy
    Marked Fuchsian representations: construction, markings, validation, I/O.
spectrum
    Marked length spectra, length matrices and Jordan samples.
currents
    Liouville box masses, discrete currents, intersection numbers.
independence
    Numerical rank of length matrices and limit-cone dimension.
flow
    Geodesic flow on the unit tangent bundle and Birkhoff averages.
cli
    Batch driver.

The inner loops live in :mod:`teichcurrents.kernels`, which loads the
compiled extension when it is built and the pure-Python fallback otherwise.
"""

__version__ = "0.1.0"
