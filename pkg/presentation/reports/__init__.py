# Report builders
from .report_builders import REPORT_SCHEMA, SCHEMA_PATH, ReportBuilder, TextReportRenderer, load_report_schema

__all__ = ["REPORT_SCHEMA", "SCHEMA_PATH", "ReportBuilder", "TextReportRenderer", "load_report_schema"]
