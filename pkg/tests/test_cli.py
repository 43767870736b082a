import tempfile
import unittest

from pathlib import Path

from config.translations import FREQUENCY_ALIASES
from scripts.cli import run
from utils.io import _from_csv, read_json, table_schema


GOLDEN = FREQUENCY_ALIASES["golden"]


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def subdir(self, name: str) -> Path:
        path = self.out / name
        path.mkdir()
        return path


class TestSpectrum(CliTestCase):
    def test_single_site(self):
        code = run(["spectrum", "--window", "0:0", "--theta", "0", "--out", str(self.out)])
        self.assertEqual(code, 0)
        lines = (self.out / "eigenvalues.csv").read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines, ["# schema: amo-lab/eigenvalues/v1", "index,energy", "0,4.0"])

    def test_byte_identical_reruns(self):
        first, second = self.subdir("a"), self.subdir("b")
        for target in (first, second):
            self.assertEqual(run(["spectrum", "--window", "30", "--dump-eig", "--out", str(target)]), 0)
        for name in ("eigenvalues.csv", "eigenvectors.csv"):
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())

    def test_lapack_window(self):
        self.assertEqual(run(["spectrum", "--window", "200", "--backend", "lapack", "--out", str(self.out)]), 0)
        table = _from_csv(self.out / "eigenvalues.csv")
        self.assertEqual(len(table), 401)
        self.assertTrue(table["energy"].between(-6.0, 6.0).all())
        self.assertTrue(table["energy"].is_monotonic_increasing)

    def test_manifest(self):
        run(["spectrum", "--window", "5", "--seed", "9", "--out", str(self.out)])
        manifest = read_json(self.out / "spectrum_manifest.json")
        self.assertEqual(manifest["schema"], "amo-lab/manifest/v1")
        self.assertEqual(manifest["command"], "spectrum")
        self.assertEqual(manifest["seed"], 9)
        self.assertEqual(manifest["outputs"], ["eigenvalues.csv"])
        self.assertEqual(manifest["resolved"]["dimension"], 11)
        self.assertNotIn("out", manifest["config"])

    def test_config_replay(self):
        first, second = self.subdir("a"), self.subdir("b")
        run(["spectrum", "--window", "-7:12", "--lambda", "1.5", "--theta", "0.11", "--out", str(first)])
        code = run(["--config", str(first / "spectrum_manifest.json"), "spectrum", "--out", str(second)])
        self.assertEqual(code, 0)
        self.assertEqual((first / "eigenvalues.csv").read_bytes(), (second / "eigenvalues.csv").read_bytes())
        self.assertEqual(read_json(first / "spectrum_manifest.json")["config"],
                         read_json(second / "spectrum_manifest.json")["config"])


class TestExitCodes(CliTestCase):
    def test_missing_output_directory(self):
        self.assertEqual(run(["spectrum", "--window", "3", "--out", str(self.out / "missing")]), 2)

    def test_invalid_configuration(self):
        out = str(self.out)
        self.assertEqual(run(["resonances", "-K", "0", "--out", out]), 1)
        self.assertEqual(run(["spectrum", "--alpha", "1.5", "--out", out]), 1)
        self.assertEqual(run(["spectrum", "--seed", "-1", "--out", out]), 1)
        self.assertEqual(run(["spectrum", "--window", "3:9", "--out", out]), 1)
        self.assertEqual(run(["spectrum", "--lambda", "0", "--out", out]), 1)

    def test_broken_config_file(self):
        path = self.out / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        self.assertEqual(run(["--config", str(path), "spectrum", "--out", str(self.out)]), 1)


class TestResonances(CliTestCase):
    def test_planted_resonance(self):
        theta = (7 * GOLDEN % 1.0) / 2.0
        code = run(["resonances", "--theta", repr(theta), "--eta", "0.5", "-K", "50", "--out", str(self.out)])
        self.assertEqual(code, 0)
        self.assertEqual(table_schema(self.out / "resonances.csv"), "amo-lab/resonances/v1")
        ks = _from_csv(self.out / "resonances.csv")["k"].tolist()
        self.assertIn(0, ks)
        self.assertIn(7, ks)
        self.assertTrue((self.out / "windows.csv").exists())


class TestGamma(CliTestCase):
    def test_planted_rate(self):
        code = run(["gamma", "--synthetic-rate", "0.7", "--window", "100", "--phases", "4", "--k-list", "10:40:5",
                    "--out", str(self.out)])
        self.assertEqual(code, 0)
        summary = read_json(self.out / "gamma_summary.json")
        self.assertAlmostEqual(summary["fit"]["gamma_hat"], 0.7, delta=0.02)
        self.assertFalse(summary["poor_fit"])
        self.assertNotIn("comparator", summary)
        table = _from_csv(self.out / "gamma_table.csv")
        self.assertEqual(table["k"].tolist(), [10, 15, 20, 25, 30, 35, 40])
        self.assertTrue((table["count"] == 4).all())

    def test_subcritical_flags_poor_fit(self):
        code = run(["gamma", "--lambda", "0.5", "--window", "200", "--phases", "16", "--k-list", "10:40:5",
                    "--backend", "lapack", "--out", str(self.out)])
        self.assertEqual(code, 0)
        summary = read_json(self.out / "gamma_summary.json")
        self.assertTrue(summary["poor_fit"])
        self.assertIn("lyapunov", summary["comparator"])

    def test_short_k_list(self):
        self.assertEqual(run(["gamma", "--k-list", "1,2,3", "--window", "20", "--out", str(self.out)]), 1)

    def test_defaults_cover_k_list(self):
        self.assertEqual(run(["gamma", "--phases", "2", "--out", str(self.out)]), 0)
        summary = read_json(self.out / "gamma_summary.json")
        self.assertEqual(summary["fit"]["k_range"], [10, 60])
        table = _from_csv(self.out / "gamma_table.csv")
        self.assertEqual(table["k"].tolist(), list(range(10, 61, 5)))
        manifest = read_json(self.out / "gamma_manifest.json")
        self.assertEqual(manifest["config"]["window"], "200")


class TestVerify(CliTestCase):
    def test_clean_run(self):
        code = run(["verify", "--window", "40", "--backend", "lapack", "--pair-count", "8", "--t-count", "200",
                    "--phases", "4", "--out", str(self.out)])
        self.assertEqual(code, 0)
        self.assertTrue(read_json(self.out / "verify.json")["passed"])
        self.assertTrue(read_json(self.out / "verify_manifest.json")["resolved"]["passed"])

    def test_fault_injection(self):
        code = run(["verify", "--window", "40", "--pairs", "0:5,-3:10", "--t-count", "200", "--phases", "2",
                    "--inject-fault", "--out", str(self.out)])
        self.assertEqual(code, 3)
        report = read_json(self.out / "verify.json")
        self.assertFalse(report["passed"])
        self.assertTrue(any(f.startswith("eigen_quality") for f in report["failures"]))
        self.assertTrue((self.out / "verify_manifest.json").exists())

    def test_empty_pairs(self):
        self.assertEqual(run(["verify", "--window", "20", "--pairs", "", "--out", str(self.out)]), 1)


if __name__ == '__main__':
    unittest.main()
