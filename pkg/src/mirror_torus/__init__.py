"""Mirror symmetry for elliptic curves, computed on both sides.

Exact homological algebra (``homcore``, ``cechlab``), truncated theta series
(``qseries``), the sheaf side (``sheafside``), the torus Fukaya side
(``fukayaside``) and the dictionary between them (``mirror``).
"""

__version__ = "0.1.0"
