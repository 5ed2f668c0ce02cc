from .render import (
    EXPECTED_HEADER,
    KEY_COLUMNS,
    SERIES_COLUMNS,
    STYLES,
    ComparisonTable,
    SchemaError,
    SeriesStyle,
    load_table,
    render,
)

__all__ = [
    "EXPECTED_HEADER",
    "KEY_COLUMNS",
    "SERIES_COLUMNS",
    "STYLES",
    "ComparisonTable",
    "SchemaError",
    "SeriesStyle",
    "load_table",
    "render",
]
