import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from atrisk import (
    FAIL,
    PASS,
    AttributeSchema,
    CellError,
    ConfigError,
    Dataset,
    DomainError,
    DuplicateAttributeError,
    MissingValueError,
    SchemaMismatchError,
    StudentRecord,
    discretize_mark,
    format_csv,
    parse_csv,
    parse_schema,
    validate_dataset,
)
from atrisk.schema import CourseType, Kind, format_schema

from conftest import ATTRS

RAW_CFG = """\
course_type = {course}
attribute.Quiz1.kind = quiz
attribute.Quiz2.kind = quiz
attribute.MidTerm.kind = midterm
attribute.Assignment1.kind = assignment1
attribute.Assignment2.kind = assignment2
"""


def test_with_practical_defaults():
    schema = parse_schema(RAW_CFG.format(course="with_practical"))
    assert dict(schema.thresholds) == {
        "Quiz1": 6,
        "Quiz2": 6,
        "MidTerm": 12,
        "Assignment1": 4.8,
        "Assignment2": 7.2,
    }
    assert schema.target_name == "Final"
    assert (schema.coursework_max, schema.final_max, schema.total_pass_mark) == (60, 40, 60)


def test_without_practical_defaults():
    schema = parse_schema(RAW_CFG.format(course="without_practical"))
    assert schema.thresholds["Assignment1"] == 6
    assert schema.thresholds["Assignment2"] == 6
    assert schema.thresholds["MidTerm"] == 12


def test_threshold_override_and_order():
    schema = parse_schema(RAW_CFG.format(course="with_practical") + "attribute.Quiz2.threshold = 5\n")
    assert schema.thresholds["Quiz2"] == 5
    assert schema.names == ("Quiz1", "Quiz2", "MidTerm", "Assignment1", "Assignment2")
    assert [a.position for a in schema.attributes] == [0, 1, 2, 3, 4]


def test_duplicate_attribute():
    cfg = "attribute.Quiz 1.kind = quiz\nattribute.Quiz 1.kind = quiz\n"
    with pytest.raises(DuplicateAttributeError) as err:
        parse_schema(cfg)
    assert err.value.line == 2


@pytest.mark.parametrize(
    "cfg, line",
    [
        ("course_type = with_practical\nnonsense\n", 2),
        ("colour = blue\n", 1),
        ("# c\n\nattribute.Q.kind = exam\n", 3),
        ("attribute.Q.threshold = six\n", 1),
        ("attribute.Q.weight = 3\n", 1),
        ("course_type = online\n", 1),
        ("target = Final\ntarget = Result\n", 2),
    ],
)
def test_malformed_config_reports_line(cfg, line):
    with pytest.raises(ConfigError) as err:
        parse_schema(cfg)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_target_may_not_be_predictor():
    with pytest.raises(ConfigError):
        parse_schema("target = Quiz\nattribute.Quiz.kind = quiz\n")


def test_fail_rate_threshold_range():
    with pytest.raises(ConfigError):
        parse_schema("attribute.Q.kind = quiz\npattern.fail_rate_threshold = 1.5\n")


def test_schema_config_round_trip(schema):
    assert parse_schema(format_schema(schema)) == schema


@pytest.mark.parametrize(
    "mark, threshold, expected",
    [
        (6.0, 6.0, PASS),
        (5.999, 6.0, FAIL),
        (11.9, 12.0, FAIL),
        (12.0, 12.0, PASS),
        (4.8, 4.8, PASS),
        (7.2, 7.2, PASS),
        (0.0, 6.0, FAIL),
    ],
)
def test_discretize(mark, threshold, expected):
    assert discretize_mark(mark, threshold) == expected


@pytest.mark.parametrize("mark", [-0.5, math.inf, math.nan])
def test_discretize_domain(mark):
    with pytest.raises(DomainError):
        discretize_mark(mark, 6.0)


@given(
    st.floats(0, 100, allow_nan=False),
    st.floats(0, 100, allow_nan=False),
    st.floats(0, 100, allow_nan=False),
)
def test_discretize_monotone(a, b, threshold):
    hi, lo = max(a, b), min(a, b)
    if discretize_mark(lo, threshold) == PASS:
        assert discretize_mark(hi, threshold) == PASS


def test_table2_parse(table2):
    assert len(table2) == 20
    assert sum(r.target == PASS for r in table2) == 13
    assert [r.student_id for r in table2] == [str(i) for i in range(1, 21)]
    assert table2.records[6].values == {
        "Quiz 1": PASS,
        "Quiz 2": FAIL,
        "Mid-Term": PASS,
        "Assignment 1": PASS,
        "Assignment 2": PASS,
    }
    assert validate_dataset(table2, training=True) == []


def test_header_only(schema):
    header = "student_id," + ",".join(ATTRS) + ",Final\n"
    assert len(parse_csv(header, schema)) == 0


def test_raw_marks_boundaries():
    schema = parse_schema(RAW_CFG.format(course="with_practical"))
    text = "student_id,Quiz1,Quiz2,MidTerm,Assignment1,Assignment2\nS01,6,5.9,12,4.8,7.2\n"
    (rec,) = parse_csv(text, schema, "raw_marks").records
    assert rec.student_id == "S01"
    assert rec.target is None
    assert rec.values == {
        "Quiz1": PASS,
        "Quiz2": FAIL,
        "MidTerm": PASS,
        "Assignment1": PASS,
        "Assignment2": PASS,
    }


def test_case_insensitive_categories(schema):
    text = "student_id," + ",".join(ATTRS) + ",Final\nA,pass,FAIL,Pass,pAsS,fail,PASS\n"
    (rec,) = parse_csv(text, schema).records
    assert rec.values["Quiz 2"] == FAIL and rec.target == PASS


def test_missing_column_named(schema):
    cols = [a for a in ATTRS if a != "Quiz 2"]
    text = "student_id," + ",".join(cols) + "\nA," + ",".join(["Pass"] * len(cols)) + "\n"
    with pytest.raises(SchemaMismatchError) as err:
        parse_csv(text, schema)
    assert err.value.column == "Quiz 2"
    assert "Quiz 2" in str(err.value)


def test_non_numeric_raw_cell():
    schema = parse_schema(RAW_CFG.format(course="with_practical"))
    text = "student_id,Quiz1,Quiz2,MidTerm,Assignment1,Assignment2\nS01,6,abc,12,4.8,7.2\n"
    with pytest.raises(CellError) as err:
        parse_csv(text, schema, "raw_marks")
    assert (err.value.row, err.value.column) == (2, "Quiz2")


def test_negative_raw_cell():
    schema = parse_schema(RAW_CFG.format(course="with_practical"))
    text = "student_id,Quiz1,Quiz2,MidTerm,Assignment1,Assignment2\nS01,6,-1,12,4.8,7.2\n"
    with pytest.raises(CellError):
        parse_csv(text, schema, "raw_marks")


def test_empty_cell_is_missing_value(schema):
    text = "student_id," + ",".join(ATTRS) + "\nA,Pass,,Pass,Pass,Pass\n"
    with pytest.raises(MissingValueError) as err:
        parse_csv(text, schema)
    assert err.value.column == "Quiz 2"


def test_bad_category(schema):
    text = "student_id," + ",".join(ATTRS) + "\nA,Pass,Merit,Pass,Pass,Pass\n"
    with pytest.raises(CellError):
        parse_csv(text, schema)


def test_raw_mode_needs_thresholds():
    schema = parse_schema("attribute.Project.kind = other\n")
    with pytest.raises(SchemaMismatchError):
        parse_csv("student_id,Project\nA,3\n", schema, "raw_marks")
    assert len(parse_csv("student_id,Project\nA,Pass\n", schema)) == 1


def test_validate_missing_attribute(table2):
    recs = list(table2.records)
    values = dict(recs[4].values)
    del values["Quiz 2"]
    recs[4] = StudentRecord(recs[4].student_id, values, recs[4].target)
    problems = validate_dataset(Dataset(table2.schema, recs))
    assert len(problems) == 1
    assert "record 4" in problems[0] and "Quiz 2" in problems[0]


def test_validate_unlabeled_in_training(table2):
    recs = list(table2.records)
    recs[0] = StudentRecord(recs[0].student_id, recs[0].values)
    data = Dataset(table2.schema, recs)
    assert validate_dataset(data) == []
    (problem,) = validate_dataset(data, training=True)
    assert "unlabeled record" in problem and "record 0" in problem


def test_csv_round_trip(table2):
    again = parse_csv(format_csv(table2), table2.schema)
    assert again == table2


@given(
    st.lists(
        st.tuples(st.lists(st.sampled_from([PASS, FAIL]), min_size=5, max_size=5), st.sampled_from([PASS, FAIL, None])),
        max_size=15,
    )
)
def test_csv_round_trip_property(rows):
    schema = AttributeSchema.build([(a, Kind.OTHER) for a in ATTRS], CourseType.WITH_PRACTICAL)
    data = Dataset(
        schema,
        [StudentRecord(f"s{i}", dict(zip(ATTRS, vals)), target) for i, (vals, target) in enumerate(rows)],
    )
    assert parse_csv(format_csv(data), schema) == data
