"""Exception hierarchy shared by all modules."""


class StepanovError(Exception):
    """Base class for every error raised by this package."""


class NotADivisor(StepanovError, ValueError):
    pass


class NotPrime(StepanovError, ValueError):
    pass


class ModulusMismatch(StepanovError, ValueError):
    pass


class DivisionByZeroPoly(StepanovError, ZeroDivisionError):
    pass


class BothZero(StepanovError, ValueError):
    pass


class ZeroPolynomial(StepanovError, ValueError):
    pass


class DegenerateParams(StepanovError, ValueError):
    """Subgroup order too small for the degrees: some B_i or D is zero."""


class TrivialKernel(StepanovError, ArithmeticError):
    """Homogeneous system has full column rank."""


class DegreeOverflow(StepanovError, ValueError):
    """The degree of the auxiliary polynomial would reach the characteristic."""


class ZeroPsi(StepanovError, ValueError):
    pass


class EmptyFamily(StepanovError, ValueError):
    pass


class FamilyTooLarge(StepanovError, ValueError):
    pass


class FieldTooLarge(StepanovError, ValueError):
    pass


class NoConvergence(StepanovError, ArithmeticError):
    pass
