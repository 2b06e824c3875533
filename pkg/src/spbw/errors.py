"""Typed errors shared by the whole kernel.

Two families: ``InputError`` means the caller handed us invalid data or asked
for something out of range; ``DefectError`` means an internal consistency
check failed, i.e. the kernel (or the mathematics it encodes) is broken.  The
CLI maps the families to distinct exit codes.
"""


class KernelError(Exception):
    """Base class for every typed error raised by this package."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(KernelError):
    """Invalid input data or an out-of-range request."""


class DefectError(KernelError):
    """Internal consistency failure; never expected on valid builds."""


# ring construction / validation
class TableNotARing(InputError): pass
class UnsupportedSize(InputError): pass
class DuplicateVariable(InputError): pass
class NotAdditive(InputError): pass
class NotMultiplicative(InputError): pass
class NotUnital(InputError): pass
class LeibnizViolation(InputError): pass
class NotBijective(InputError): pass
class PolynomialBackendUnsupported(InputError): pass
class BadParameter(InputError): pass

# extension construction / rewriting
class NonInjectiveSigma(InputError): pass
class ZeroDij(InputError): pass
class AssociativityFailure(InputError): pass
class RewriteFuelExhausted(InputError): pass

# modules and searches
class ModuleAxiomFailure(InputError): pass
class ModuleTooLarge(InputError): pass
class SearchSpaceTooLarge(InputError): pass
class ZeroModule(InputError): pass
class NoLiftFound(InputError): pass
class NotFoundAtBound(InputError): pass
class HypothesisNotCertified(InputError): pass

# defects
class EquivalenceBroken(DefectError): pass
class OracleMismatch(DefectError): pass
class AssertionFailed(DefectError): pass
