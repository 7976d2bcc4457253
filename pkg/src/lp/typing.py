from fractions import Fraction
from typing import TypeAlias

Rational: TypeAlias = Fraction
