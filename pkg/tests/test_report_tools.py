"""
Tests for JSON and CSV artifact rendering.
"""
import json

import pytest

from report_tools import OutputFormat, payload_rows, render, render_csv, render_json, write_artifact
from schemas import SWEEP_COLUMNS, ElementsPayload, SweepRow


def sweep_row(**overrides):
    values = dict(
        ring="Z/4", psi="id", D_psi=2, sigma_term=1, I_psi=3, bound=3, equality=True, complete=True
    )
    values.update(overrides)
    return SweepRow(**values)


class TestRenderJson:
    """Canonical JSON text."""

    def test_sorted_and_indented(self):
        text = render_json({"b": 1, "a": [1, 2]})
        assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'

    def test_models_are_dumped(self):
        payload = ElementsPayload(ring_spec="Z/6", order=6, count=2, elements=[1, 5])
        assert json.loads(render_json(payload)) == {"ring_spec": "Z/6", "order": 6, "count": 2, "elements": [1, 5]}

    def test_lists_of_models(self):
        rows = json.loads(render_json([sweep_row(), sweep_row(psi="full")]))
        assert [row["psi"] for row in rows] == ["id", "full"]

    def test_unicode_kept(self):
        assert "Ψ" in render_json({"label": "Ψ"})


class TestRenderCsv:
    """Tables through pandas."""

    def test_sweep_columns(self):
        text = render_csv([sweep_row(runtime_ms=1.5)], SWEEP_COLUMNS)
        header, line = text.splitlines()
        assert header == ",".join(SWEEP_COLUMNS)
        assert line == "Z/4,id,2,1,3,3,True,1.5,True"

    def test_default_columns_sorted(self):
        assert render_csv({"b": 1, "a": 2}).splitlines()[0] == "a,b"

    def test_nested_values_become_json_cells(self):
        (row,) = payload_rows({"witness": [2, 3], "ring": "Z/4"})
        assert row["witness"] == "[2,3]"

    def test_missing_values_left_blank(self):
        text = render_csv([sweep_row(I_psi=None, equality=None, complete=False)], SWEEP_COLUMNS)
        assert text.splitlines()[1] == "Z/4,id,2,1,,3,,,False"


class TestRender:
    """Format dispatch and output."""

    def test_dispatch(self):
        assert render({"a": 1}, OutputFormat.JSON) == render_json({"a": 1})
        assert render({"a": 1}, "csv") == "a\n1\n"

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render({"a": 1}, "xml")

    def test_write_to_file(self, tmp_path):
        out = tmp_path / "nested" / "result.json"
        result = write_artifact('{"a": 1}\n', out)
        assert out.read_text() == '{"a": 1}\n'
        assert result == {"destination": str(out), "size_bytes": 9}

    def test_write_to_stdout(self, capsys):
        result = write_artifact("x\n")
        assert capsys.readouterr().out == "x\n"
        assert result["destination"] == "<stdout>"
