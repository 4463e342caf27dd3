"""Exception hierarchy shared by all catbreeder modules."""


class CatBreederError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(CatBreederError, ValueError):
    pass


class ZeroStateError(CatBreederError):
    """A superposition cancelled to (numerically) the zero vector."""


class ZeroProbabilityError(CatBreederError):
    """A herald outcome whose probability is below the zero threshold."""

    def __init__(self, probability: float, m: int | None = None):
        self.probability = probability
        self.m = m
        where = "" if m is None else f" for m={m}"
        super().__init__(f"herald probability{where} is {probability:.3e}")


class ContractViolationError(CatBreederError):
    """An operation received a state that breaks its precondition."""


class NoPeakError(CatBreederError):
    pass


class AdequacyError(CatBreederError):
    """Fock cutoff too small: the neglected tail carries too much weight."""

    def __init__(self, tail_mass: float, cutoff: int):
        self.tail_mass = tail_mass
        self.cutoff = cutoff
        super().__init__(f"cutoff {cutoff} inadequate: tail mass {tail_mass:.3e}")


class InfeasibleError(CatBreederError):
    def __init__(self, message: str, best_alpha3: float | None = None):
        self.best_alpha3 = best_alpha3
        super().__init__(message)
