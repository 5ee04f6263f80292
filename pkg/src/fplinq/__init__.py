"""Link scheduling, beamforming and power control for device-to-device
networks, built on matrix fractional-programming transforms.

Subpackages and modules:

- ``linops``       Hermitian matrix kernels (square roots, PSD solves, bisection).
- ``transforms``   Scalar and matrix FP transforms plus an MM-surrogate certifier.
- ``network``      Topology generation, channel model, exact rate evaluation.
- ``matching``     Weighted bipartite matching (Hungarian and auction).
- ``schedulers``   FPLinQ and the benchmark schedulers.
- ``fairness``     Proportional-fairness weight updates and log-utility.
- ``harness``      Seeded Monte-Carlo experiment runner and CSV/JSON export.
"""

__version__ = "0.1.0"
