"""
Shared constants across the SGT project
"""

from fractions import Fraction
import math

# Even Bernoulli numbers B_2 .. B_12 used by the BCH recursion
BERNOULLI_EVEN = {
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
}

# Exact continuum actions of the four catalogue fields on [0,1]^4
CONTINUUM_ACTIONS = {
    1: 1.0,
    2: 1.0,
    3: 0.5 + 1.0 / (8.0 * (2.0 * math.pi) ** 4),
    4: 0.5,
}

CASE_CHOICES = [
    (1, 'Case 1 - A_x^3 sinusoidal in t'),
    (2, 'Case 2 - A_y^3 sinusoidal in x'),
    (3, 'Case 3 - A_x^1(y), A_y^2(x) with nonlinear term'),
    (4, 'Case 4 - constant A_x^1 = A_y^2 = 1'),
]

# Discrete action kinds
ACTION_J = 'J'
ACTION_I = 'I'
ACTION_L = 'L'

ACTION_CHOICES = [
    (ACTION_J, 'Interpolated FEM action S^J'),
    (ACTION_I, 'Intermediate action S^I'),
    (ACTION_L, 'Simplicial gauge theory action S^L'),
]

# Tolerances
ALGEBRA_TOL = 1e-12
BRANCH_TOL = 1e-9

# Convergence acceptance: fitted exponent window, and the relative error below
# which a discrete action counts as exact (rounding level)
ORDER_WINDOW = (1.8, 2.2)
CONVERGED_FLOOR = 1e-12

# Convergence CSV contract: floats carry up to 17 significant digits with
# trailing zeros dropped, and parse back to the identical double
CSV_COLUMNS = ['case', 'action', 'N', 'h', 'S_discrete', 'S_exact', 'rel_err']
CSV_FLOAT_FORMAT = '.17g'
