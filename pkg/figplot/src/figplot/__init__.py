from .render import COLUMNS, SchemaError, build_figure, read_table, render

__all__ = ["COLUMNS", "SchemaError", "build_figure", "read_table", "render"]
