"""Exception taxonomy. Every error carries a stable machine code for CLI reports."""


class ValuantError(Exception):
    code = "error"


class FieldMismatch(ValuantError):
    code = "field-mismatch"


class DivisionByZeroPoly(ValuantError):
    code = "division-by-zero-poly"


class DivisionByZero(ValuantError):
    code = "division-by-zero"


class TowerMismatch(ValuantError):
    code = "tower-mismatch"


class ReducibleMinimalPolynomial(ValuantError):
    """A tower level's defining polynomial turned out reducible (zero divisor hit)."""

    code = "reducible-minimal-polynomial"


class NotUnibranched(ValuantError):
    code = "not-unibranched"


class Inseparable(ValuantError):
    code = "inseparable"


class TooFewPoints(ValuantError):
    code = "too-few-points"


class SupportPolynomial(ValuantError):
    """The valuation is infinite on this polynomial (it lies in the support)."""

    code = "support-polynomial"


class NoFiniteDerivativeValue(ValuantError):
    code = "no-finite-derivative-value"


class NotSquareFree(ValuantError):
    code = "not-square-free"


class ResidueFieldUnsupported(ValuantError):
    code = "residue-field-unsupported"


class IterationCap(ValuantError):
    code = "iteration-cap"


class NotASubgroup(ValuantError):
    code = "not-a-subgroup"


class GeneratorNotPure(ValuantError):
    code = "generator-not-pure"


class NotDistinguishedPair(ValuantError):
    code = "not-distinguished-pair"


class ParseError(ValuantError):
    code = "parse-error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + loc)


class UndefinedSymbol(ParseError):
    code = "undefined-symbol"


class NonMonicMinPoly(ParseError):
    code = "non-monic-min-poly"
