class NVGridError(Exception):
    """Common base for every error raised by nvgrid"""


class ParseError(NVGridError):
    """Malformed block, pattern, element, point or word text"""


class PatternError(NVGridError):
    """Blocks do not form a valid tree-generated dyadic partition"""


class Overlap(PatternError):
    """Two blocks intersect"""


class Gap(PatternError):
    """Blocks do not cover the unit cube"""


class NotTreeGenerated(PatternError):
    """Exact cover with no crossing-free midline cut at some step (dim >= 3 only)"""


class DimMismatch(NVGridError):
    """Objects of different dimensions were combined"""


class CountMismatch(NVGridError):
    """Source and target have different numbers of blocks"""


class NegativeIndex(NVGridError):
    """Index shift produced a negative generator index"""


class UnsupportedFamily(NVGridError):
    """Generator family has no configured interpretation"""


class DimUnsupported(NVGridError):
    """Operation is only defined for dimension 2"""


class CapExceeded(NVGridError):
    """Enumeration size above the configured cap"""


class InvalidParameter(NVGridError):
    """Numeric parameter outside its allowed range"""


class RuleError(NVGridError):
    """Problems with the finite-generator rewriting table"""


class NoRuleConfigured(RuleError):
    """Letter outside the finite set with no rule to rewrite it"""


class RuleVerificationFailed(RuleError):
    """Configured rule does not hold in the group"""


class ContractViolation(NVGridError):
    """Internal consistency check failed, always a bug"""
