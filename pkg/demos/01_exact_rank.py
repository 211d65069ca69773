"""
Exact and modular rank
======================

Ranks over Q by fraction-free elimination, and the cheaper probe mod large primes.
"""
import random

from syzygy import exactla
from syzygy.exactla import Matrix, Mode, ModularConfig

# a rank-2 matrix: the third row is the sum of the first two
m = Matrix.from_rows([[1, 2, 3], [4, 5, 6], [5, 7, 9]])
print("rank:", exactla.rank(m))
print("kernel:", exactla.kernel_basis(m))

# the probe can only undercount; a prime dividing a pivot would show it
primes = exactla.random_primes(3, rng=random.Random(0))
rr = exactla.rank_report(m, ModularConfig(primes, Mode.MODULAR_PROBE))
print("modular ranks:", rr.modular)

# matrices serialise to a plain text format
print(m.dumps(), end="")
