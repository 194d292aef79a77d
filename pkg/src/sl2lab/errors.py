"""Exception hierarchy.  Every error raised by the library derives from Sl2LabError."""


class Sl2LabError(Exception):
    pass


class NotPrime(Sl2LabError, ValueError):
    def __init__(self, n):
        super().__init__(f"{n} is not prime")
        self.n = n


class UnsupportedDegree(Sl2LabError, ValueError):
    def __init__(self, alpha):
        super().__init__(f"extension degree {alpha} not supported (use 1 or 2)")
        self.alpha = alpha


class FieldCapExceeded(Sl2LabError, ValueError):
    def __init__(self, q, cap):
        super().__init__(f"field size {q} exceeds cap {cap}")


class DivisionByZero(Sl2LabError, ZeroDivisionError):
    pass


class NotInSL2(Sl2LabError, ValueError):
    """Matrix entries with determinant != 1."""


class CapExceeded(Sl2LabError):
    def __init__(self, size, cap, what="group"):
        super().__init__(f"{what} size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class FieldMismatch(Sl2LabError, ValueError):
    pass


class EmptySet(Sl2LabError, ValueError):
    pass


class NotSymmetric(Sl2LabError, ValueError):
    pass


class NotInPower(Sl2LabError, ValueError):
    pass


class NotRss(Sl2LabError, ValueError):
    pass


class NotGenerating(Sl2LabError):
    def __init__(self, reached, order):
        super().__init__(f"set generates a subgroup of size {reached}, not {order}")
        self.reached = reached
        self.order = order


class BadG(Sl2LabError, ValueError):
    pass


class NotSplit(Sl2LabError, ValueError):
    pass


class OrbitTrapped(Sl2LabError):
    pass


class KmaxExceeded(Sl2LabError):
    def __init__(self, kmax):
        super().__init__(f"no escape witness up to k = {kmax}")
        self.kmax = kmax


class DimensionMismatch(Sl2LabError, ValueError):
    pass


class NoConvergence(Sl2LabError):
    def __init__(self, iterations, residual):
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


class TooLarge(Sl2LabError, ValueError):
    pass


class BudgetExceeded(Sl2LabError):
    pass
