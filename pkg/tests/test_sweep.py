"""
Tests for sweep families and sweep execution.
"""
import pytest

from cache import ResultCache
from config import AppConfig, SearchConfig
from exceptions import ConfigurationError
from sweep import SweepFamily, SweepInstance, compute_row, expand_descriptors, run_instance, run_sweep, summarize


@pytest.fixture
def family_file(tmp_path):
    def write(text):
        path = tmp_path / "family.yaml"
        path.write_text(text)
        return path
    return write


class TestSweepFamily:
    """Loading and expanding families."""

    def test_from_yaml(self, family_file):
        path = family_file(
            'rings: ["Z/4", "GF(4)"]\n'
            'psi: ["id", "full"]\n'
            'instances:\n'
            '  - {ring: "Z/4 x Z/4", psi: "swap(0,1)"}\n'
        )
        family = SweepFamily.from_yaml(path)
        assert family.rings == ["Z/4", "GF(4)"]
        assert family.psi == ["id", "full"]
        assert family.instances == [SweepInstance("Z/4 x Z/4", "swap(0,1)")]

    def test_max_order(self, family_file):
        family = SweepFamily.from_yaml(family_file("max_order: 4\n"))
        assert "Z/2 x Z/2" in family.rings
        assert family.psi == ["id", "full", "cyclic"]

    def test_max_order_override(self, family_file):
        family = SweepFamily.from_yaml(family_file("max_order: 64\n"), max_order=3)
        assert family.rings == ["Z/2", "Z/3"]

    @pytest.mark.parametrize(
        "text",
        ["- just a list\n", "max_order: 1\n", "rings: Z/4\n", "instances:\n  - {ring: Z/4}\n", "rings: [\n"],
    )
    def test_malformed(self, family_file, text):
        with pytest.raises(ConfigurationError):
            SweepFamily.from_yaml(family_file(text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            SweepFamily.from_yaml(tmp_path / "absent.yaml")

    def test_equal_subgroups_listed_once(self):
        """Z/4 has trivial Aut, so full and every cyclic subgroup coincide with id."""
        family = SweepFamily(rings=["Z/4", "Z / 4", "GF(4)"])
        assert family.expand() == [
            SweepInstance("Z/4", "id"),
            SweepInstance("GF(4)", "id"),
            SweepInstance("GF(4)", "full"),
        ]

    def test_cyclic_expansion(self):
        descriptors = expand_descriptors("GF(4) x GF(4)", ["cyclic"])
        assert len(descriptors) == 7
        assert all(d.startswith("cyclic(") for d in descriptors)

    def test_unparsable_ring_kept_for_reporting(self):
        assert SweepFamily(rings=["Z/0"]).expand() == [SweepInstance("Z/0", "id")]

    def test_default_family(self):
        instances = SweepFamily.default(4).expand()
        assert SweepInstance("Z/2 x Z/2", "full") in instances
        assert SweepInstance("Z/4", "full") not in instances


class TestSweepRows:
    """Single instances."""

    def test_compute_row(self):
        row = compute_row(SweepInstance("Z/4", "id"), AppConfig.from_env(), claims=True)
        assert (row.D_psi, row.sigma_term, row.I_psi, row.bound) == (2, 1, 3, 3)
        assert row.equality is True
        assert row.predicted_equality is True
        assert row.claims_failed == []

    def test_large_ring_skips_search(self):
        config = AppConfig(search=SearchConfig(max_order=4))
        row = compute_row(SweepInstance("Z/8", "id"), config)
        assert row.bound == 5
        assert row.I_psi is None
        assert row.equality is None
        assert not row.complete

    def test_error_row(self):
        row = run_instance(SweepInstance("Z/4", "swap(0,1)"))
        assert row["error"]
        assert row["complete"] is False
        assert row["D_psi"] is None

    def test_rows_are_cached(self):
        instance = SweepInstance("Z/6", "id")
        first = run_instance(instance)
        assert ResultCache.from_config().stats()["total_entries"] == 1
        assert run_instance(instance) == first

    def test_timing(self):
        row = run_instance(SweepInstance("Z/4", "id"), timing=True)
        assert row["runtime_ms"] >= 0
        assert ResultCache.from_config().stats()["total_entries"] == 0


class TestRunSweep:
    """Whole sweeps."""

    INSTANCES = [
        SweepInstance("Z/4", "id"),
        SweepInstance("Z/6", "id"),
        SweepInstance("Z/2 x Z/2", "full"),
        SweepInstance("Z/0", "id"),
    ]

    def test_rows_in_instance_order(self):
        rows = run_sweep(self.INSTANCES, show_progress=False)
        assert [(r.ring, r.psi) for r in rows] == [(i.ring, i.psi) for i in self.INSTANCES]
        assert all(r.runtime_ms is None for r in rows)

    def test_worker_pool_keeps_order(self):
        serial = run_sweep(self.INSTANCES, workers=1, use_cache=False, show_progress=False)
        parallel = run_sweep(self.INSTANCES, workers=2, use_cache=False, show_progress=False)
        assert [r.model_dump() for r in parallel] == [r.model_dump() for r in serial]

    def test_summary(self):
        rows = run_sweep(self.INSTANCES, show_progress=False)
        summary = summarize(rows)
        assert summary["instances"] == 4
        assert summary["errors"] == 1
        assert summary["violations"] == 0
        assert summary["equality"] + summary["strict"] + summary["incomplete"] + summary["errors"] == 4
