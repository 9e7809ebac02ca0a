"""
Output persistence for CLI runs
"""

from .files import OutputStore, render_csv, render_json, render_table

__all__ = ["OutputStore", "render_csv", "render_json", "render_table"]
