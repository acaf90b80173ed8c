"""Exception hierarchy shared by all modules."""


class EllipticWError(Exception):
    pass


class DegenerateQ(EllipticWError, ValueError):
    pass


class NomeOutOfDomain(EllipticWError, ValueError):
    pass


class TruncationBudgetExceeded(EllipticWError, RuntimeError):
    pass


class NonconvergentTau(EllipticWError, ValueError):
    pass


class NonconvergentSeries(EllipticWError, ValueError):
    pass


class PoleHit(EllipticWError, ZeroDivisionError):
    def __init__(self, msg, location=None):
        super().__init__(msg)
        self.location = location


class ThetaZeroDenominator(PoleHit):
    pass


class StarNomeOutOfDomain(EllipticWError, ValueError):
    pass


class SamplePointDegenerate(EllipticWError, ValueError):
    pass


class SurfaceViolated(EllipticWError, ValueError):
    pass


class HypothesisViolated(EllipticWError, ValueError):
    pass


class PoleOrderMisclassified(EllipticWError, ValueError):
    pass


class SectorOutOfRange(EllipticWError, ValueError):
    pass


class IndexOutOfRange(EllipticWError, ValueError):
    pass
