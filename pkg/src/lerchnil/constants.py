"""Default tolerances, grids and ranges used across the library and the CLI.

Every numeric default that a test or a CLI flag depends on lives here so a
reader can see them in one place.
"""

# scalar special functions
LERCH_TOL = 1e-12          # target accuracy of the Lerch zeta kernel
POLE_RADIUS = 1e-8         # |s - s0| below which a pole is flagged
SINGULAR_EPS = 1e-12       # distance to a lattice line treated as "on" it
GL_ORDER = 24              # Gauss-Legendre nodes per panel on the contour tail
GL_ORDER_CHECK = 16        # lower-order companion rule for error estimates
HEAD_MIN = 8               # minimum number of explicitly summed terms
HEAD_MAX = 200_000         # beyond this the a-distance to Z is too small to trust

# nilmanifold functions
QUAD_MIDPOINT_NODES = 128
QUAD_GL_NODES = 64
VALIDATE_POINTS = 64
VALIDATE_TOL = 1e-6
MAX_DEPTH = 16

# Weil-Brezin truncation and line quadrature
WB_TOL = 1e-14
FOURIER_TOL = 1e-12
INVERSE_NODES = 64

# spectral
MELLIN_STEP = 0.02         # trapezoid step in log-coordinates
SYNTH_T = 40.0
SYNTH_H = 0.05
DELTA_H = 1e-3
MELLIN_MEASURE = "4pi"     # dtau/(4 pi); "2sqrt2pi" is available for comparison

# verification
FE_POINTS = ((0.3, 0.7), (0.45, 0.2), (0.8, 0.35))
FE_TOL = 1e-6
HECKE_TOL = 1e-8
INTERTWINE_TOL = 1e-6
OPERATOR_TOL = 1e-9
EXACT_TOL = 1e-12
ISOMETRY_TOL = 1e-6
LEAK_TOL = 1e-5
SPECTRAL_TOL = 1e-6
SYNTH_TOL = 1e-4
DELTA_TOL = 1e-4
SEED = 20240601
NUDGE = (0.0123, 0.0171)   # shift applied to seeded points that hit a singular line
NUDGE_MARGIN = 1e-3        # required distance of N a and d c from the integers
