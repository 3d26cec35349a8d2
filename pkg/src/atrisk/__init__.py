"""Decision-tree analysis of coursework results to flag students at risk of failing."""

from .analytics import (
    AssessmentSummary,
    Pattern,
    PatternKind,
    RiskEntry,
    RiskReport,
    build_report,
    detect_patterns,
    parse_report,
    render_report,
    risk_list,
    summarize,
)
from .errors import (
    AtRiskError,
    CellError,
    ConfigError,
    DataError,
    DomainError,
    DuplicateAttributeError,
    MissingValueError,
    ModelFormatError,
    SchemaMismatchError,
)
from .induction import (
    Criterion,
    InductionParams,
    Internal,
    Leaf,
    Model,
    Prediction,
    Rule,
    TreeNode,
    apply_rules,
    classify,
    deserialize_model,
    extract_rules,
    induce_tree,
    load_model,
    select_attribute,
    serialize_model,
)
from .metrics import (
    AttributeScore,
    ClassCounts,
    class_counts,
    entropy,
    gain_ratio,
    information_gain,
    score_all,
    split_info,
)
from .schema import (
    FAIL,
    PASS,
    Attribute,
    AttributeSchema,
    CourseType,
    Dataset,
    Kind,
    Mode,
    StudentRecord,
    discretize_mark,
    format_csv,
    parse_csv,
    parse_schema,
    validate_dataset,
)

__version__ = "0.1.0"
