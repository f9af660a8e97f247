"""Exceptions shared across the package."""


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


class MassMismatch(ValueError):
    """Stochastic-order comparison of measures with different total mass.

    Comparability requires equal normalization; silently answering "not
    dominated" would mask caller bugs, so this is an error.
    """


class AtomBudgetExceeded(RuntimeError):
    """An intermediate convolution grew past the atom cap.

    Signals non-lattice support blowup in convolution powers.
    """
