from __future__ import annotations

import enum
from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from .arith.rational import as_rational, format_rational


def _to_rational(value: Any) -> Fraction:
    try:
        return as_rational(value)
    except TypeError as exc:
        raise ValueError(str(exc)) from exc


RationalField = Annotated[Fraction, BeforeValidator(_to_rational), PlainSerializer(format_rational, return_type=str)]


class CoefficientMode(str, enum.Enum):
    NUMERIC = "numeric"
    SYMBOLIC = "symbolic"


class Construction(str, enum.Enum):
    ANCHORED = "anchored"
    EXTENDED = "extended"
    SQUARE = "square"
    GENERAL = "general"
    SERIES_ONLY = "series-only"


class Measure(str, enum.Enum):
    DEGREE = "degree"
    NEG_VALUATION = "-valuation"


class CheckKind(str, enum.Enum):
    FOUR_POINT = "four-point"
    ULTRAMETRIC = "ultrametric"
    PLUECKER = "pluecker"


class LeadingCoefficientType(str, enum.Enum):
    BALANCED = "balanced"
    CATERPILLAR = "caterpillar"
    ANCHORED = "anchored"


class ReportModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)


class Violation(ReportModel):
    """A witness that a max-attained-twice condition fails.

    ``indices`` are the (i, j, k, l) or (i, j, k) of the failing relation, ``common`` the
    shared index set of a Plücker relation and ``values`` the compared sums or distances.
    """

    kind: CheckKind
    indices: list[int]
    common: list[int] = Field(default_factory=list)
    values: list[RationalField]

    def describe(self) -> str:
        shared = f" with common set {{{','.join(map(str, self.common))}}}" if self.common else ""
        values = ", ".join(format_rational(value) for value in self.values)
        return f"{self.kind.value} fails at ({','.join(map(str, self.indices))}){shared}: values {values}"


class RunConfig(ReportModel):
    command: str
    inputs: list[str] = Field(default_factory=list)
    output: Optional[str] = None
    seed: int = 0
    m: Optional[int] = None
    n: Optional[int] = None
    mode: CoefficientMode = CoefficientMode.NUMERIC
    scale: Optional[int] = None
    retry_budget: int = 0
    workers: int = 1


class MinorRecord(ReportModel):
    subset: list[int]
    expected: RationalField
    computed: Optional[RationalField] = None
    measure: Measure = Measure.DEGREE
    leading_coeff: str = "0"
    leading_coeff_terms: int = 0
    passed: bool = Field(alias="pass")


class ReportSummary(ReportModel):
    minors: int
    passed: int
    failed: int
    all_passed: bool
    retries: int = 0


class VerificationReport(ReportModel):
    construction: Construction
    tree_digest: str
    tree: str
    seed: Optional[int] = None
    mode: CoefficientMode = CoefficientMode.NUMERIC
    factor: RationalField = Fraction(1)
    scale: int = 1
    anchor: Optional[int] = None
    attempts: int = 1
    minors: list[MinorRecord]
    summary: ReportSummary
    warnings: list[str] = Field(default_factory=list)
    run: Optional[RunConfig] = None


class FormulaCheckReport(ReportModel):
    type: LeadingCoefficientType
    tree: str
    degree: RationalField
    computed_terms: int
    readings: dict[str, bool]
    matched: Optional[str] = None
    sign: Optional[int] = None
    run: Optional[RunConfig] = None

    @property
    def passed(self) -> bool:
        return self.matched is not None


class SymbolicShapeReport(ReportModel):
    shape: str
    m: int
    heights: dict[str, RationalField]
    expected_degree: RationalField
    degree: Optional[RationalField] = None
    term_count: int
    homogeneous: bool
    dual_heights: dict[str, RationalField] = Field(default_factory=dict)
    dual_term_count: Optional[int] = None
    dual_agrees: Optional[bool] = None
    monomials: list[tuple[str, str]] = Field(default_factory=list)
    passed: bool = Field(alias="pass")


class NumericShapeRecord(ReportModel):
    shape: str
    m: int
    seed: int
    heights: dict[str, RationalField]
    assignment: dict[str, RationalField]
    expected_degree: RationalField
    degree: Optional[RationalField] = None
    leading_coeff: str = "0"
    passed: bool = Field(alias="pass")


class ShapeSweepReport(ReportModel):
    m: int
    mode: CoefficientMode
    shape_count: int
    symbolic: list[SymbolicShapeReport] = Field(default_factory=list)
    numeric: list[NumericShapeRecord] = Field(default_factory=list)
    term_counts: list[int] = Field(default_factory=list)
    all_passed: bool
    run: Optional[RunConfig] = None


class RootComparisonReport(ReportModel):
    tree: str
    subset: list[int]
    steiner_weight: RationalField
    root_inclusive_weight: RationalField
    degree_without_ones_row: Optional[RationalField] = None
    degree_with_ones_row: Optional[RationalField] = None
    counterexample: bool
    run: Optional[RunConfig] = None


class PrimeExampleReport(ReportModel):
    tree: str
    total_length: RationalField
    degree: Optional[RationalField] = None
    leading_coefficient: RationalField
    assignment: dict[str, RationalField]
    passed: bool = Field(alias="pass")
    run: Optional[RunConfig] = None


class ViolationReport(ReportModel):
    check: CheckKind
    m: Optional[int] = None
    passed: bool = Field(alias="pass")
    violation: Optional[Violation] = None
    warnings: list[str] = Field(default_factory=list)
    run: Optional[RunConfig] = None
