"""Exception hierarchy.

Two families: :class:`ValidationError` for bad input (CLI exit status 1) and
:class:`NumericalError` for failures of the linear algebra or of an
iteration (CLI exit status 2). Every error names the node, arc, pair or
line it concerns.
"""


class BopError(Exception):
    """Base class of every error raised by this package."""


class ValidationError(BopError, ValueError):
    pass


class NumericalError(BopError, ArithmeticError):
    pass


class ZeroOutDegree(ValidationError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node} has no outgoing arc (all affinities in row {node} are zero)")


class ShapeMismatch(ValidationError):
    pass


class NegativeEntry(ValidationError):
    def __init__(self, which, i, j, value):
        self.which, self.i, self.j, self.value = which, i, j, value
        super().__init__(f"negative {which} {value!r} on arc ({i}, {j})")


class ParseError(ValidationError):
    def __init__(self, line_no, line, reason):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}: {line.rstrip()!r}")


class DuplicateArc(ValidationError):
    def __init__(self, i, j, line_no=None):
        self.i, self.j, self.line_no = i, j, line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}duplicate arc ({i}, {j})")


class NonPositiveTheta(ValidationError):
    def __init__(self, theta):
        self.theta = theta
        super().__init__(f"theta must be > 0, got {theta!r}")


class NotUndirected(ValidationError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"graph is not undirected: arc ({i}, {j}) differs from arc ({j}, {i})")


class InfiniteDistance(ValidationError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"distance between nodes {i} and {j} is infinite (disconnected pair)")


class DepthLimitExceeded(ValidationError):
    pass


class InsufficientClassSize(ValidationError):
    def __init__(self, cls, count, needed):
        self.cls, self.count, self.needed = cls, count, needed
        super().__init__(f"class {cls} has {count} labeled nodes, at least {needed} required")


class DegenerateTraining(ValidationError):
    pass


class SingularSystem(NumericalError):
    pass


class DegeneratePartition(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, max_iters, last, residual, target=None):
        self.max_iters = max_iters
        self.last = last
        self.residual = residual
        self.target = target
        tgt = f" for target node {target}" if target is not None else ""
        super().__init__(
            f"fixed-point iteration{tgt} did not converge in {max_iters} iterations "
            f"(last sup-norm change {residual:.3g})"
        )
