import json
import math
import tempfile
import unittest

from pathlib import Path

import pandas as pd

from config.config import DEFAULTS
from config.dotdict import DotDict
from config.logger import Logger
from config.profiler import Profiler
from config.schema import SCHEMAS, validate_config
from utils.errors import ConfigError, DomainError, OutputError
from utils.format import parse_alpha, parse_int_list, parse_pairs, parse_window
from utils.io import _from_csv, _to_csv, build_manifest, ensure_output_dir, read_json, table_schema, write_json


def _spectrum_config(**overrides) -> dict:
    config = {"alpha": "golden", "seed": 1, "profile": False, "lam": 2.0, "window": "10", "backend": "ql",
              "theta": 0.3, "dump_eig": False}
    config.update(overrides)
    return config


class TestParsers(unittest.TestCase):
    def test_alpha(self):
        self.assertAlmostEqual(parse_alpha("golden"), (math.sqrt(5) - 1) / 2, places=15)
        self.assertAlmostEqual(parse_alpha(" SQRT2 "), math.sqrt(2) - 1, places=15)
        self.assertEqual(parse_alpha(0.25), 0.25)
        for bad in ("pi", "0", "1", "-0.3", "nan"):
            with self.assertRaises(DomainError, msg=bad):
                parse_alpha(bad)

    def test_window(self):
        self.assertEqual(parse_window("100"), (-100, 100))
        self.assertEqual(parse_window(" -5:8 "), (-5, 8))
        self.assertEqual(parse_window("0"), (0, 0))
        for bad in ("3:9", "-9:-3", "a:b", "1:2:3"):
            with self.assertRaises(DomainError, msg=bad):
                parse_window(bad)

    def test_int_list(self):
        self.assertEqual(parse_int_list("10:60:5"), list(range(10, 61, 5)))
        self.assertEqual(parse_int_list("0:3"), [0, 1, 2, 3])
        self.assertEqual(parse_int_list("4, -2,7,"), [4, -2, 7])
        for bad in ("1:5:0", "a,b", "1:2:3:4"):
            with self.assertRaises(DomainError, msg=bad):
                parse_int_list(bad)

    def test_int_list_step_error_not_wrapped(self):
        with self.assertRaises(DomainError) as caught:
            parse_int_list("10:60:0")
        self.assertEqual(str(caught.exception), "step must be positive in '10:60:0'")
        self.assertIsNone(caught.exception.__cause__)
        with self.assertRaises(DomainError) as caught:
            parse_int_list("10:x")
        self.assertIsInstance(caught.exception.__cause__, ValueError)

    def test_pairs(self):
        self.assertEqual(parse_pairs("0:10, -5:5"), [(0, 10), (-5, 5)])
        self.assertEqual(parse_pairs(""), [])
        with self.assertRaises(DomainError):
            parse_pairs("0:1:2")


class TestSchema(unittest.TestCase):
    def test_valid_config_returned(self):
        config = _spectrum_config()
        self.assertIs(validate_config("spectrum", config), config)

    def test_every_violation_reported(self):
        with self.assertRaises(ConfigError) as caught:
            validate_config("spectrum", _spectrum_config(lam=-1.0, seed=-4, backend="arpack"))
        message = str(caught.exception)
        for field in ("lam", "seed", "backend"):
            self.assertIn(field, message)

    def test_missing_and_unknown_keys(self):
        config = _spectrum_config(extra=1)
        del config["theta"]
        with self.assertRaises(ConfigError):
            validate_config("spectrum", config)
        with self.assertRaises(ConfigError):
            validate_config("plot", {})

    def test_resonances_has_no_operator_fields(self):
        self.assertNotIn("lam", SCHEMAS["resonances"]["properties"])
        self.assertIn("horizon", SCHEMAS["resonances"]["required"])


class TestIO(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_csv_schema_row(self):
        path = _to_csv(pd.DataFrame({"k": [1, 2], "mean": [0.5, 0.25]}), self.out / "t.csv", "gamma_table")
        self.assertEqual(table_schema(path), "amo-lab/gamma_table/v1")
        self.assertEqual(_from_csv(path)["mean"].tolist(), [0.5, 0.25])

    def test_output_directory(self):
        self.assertEqual(ensure_output_dir(self.out), self.out)
        with self.assertRaises(OutputError):
            ensure_output_dir(self.out / "nope")
        with self.assertRaises(OutputError):
            _to_csv(pd.DataFrame({"a": [1]}), self.out / "nope" / "a.csv", "a")

    def test_json_sorted(self):
        path = write_json({"b": 1, "a": [1.5, Path("x")]}, self.out / "d.json")
        text = path.read_text(encoding="utf-8")
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(read_json(path), {"a": [1.5, "x"], "b": 1})
        self.assertEqual(json.loads(text)["b"], 1)

    def test_manifest_fields(self):
        manifest = build_manifest("gamma", {"seed": 3}, {"k_list": [1]}, [self.out / "gamma_table.csv"], {})
        self.assertEqual(manifest["outputs"], ["gamma_table.csv"])
        self.assertEqual(manifest["seed"], 3)
        self.assertEqual(manifest["schema"], "amo-lab/manifest/v1")


class TestProfilerAndLogger(unittest.TestCase):
    def test_profile_dump(self):
        with tempfile.TemporaryDirectory() as tmp:
            prof = Profiler("unit", directory=Path(tmp) / "profiling")
            prof.enable()
            sum(range(1000))
            prof.disable()
            path = prof.save_show_profile()
            self.assertEqual(path.name, "unit_profiling.prof")
            self.assertTrue(path.exists())

    def test_logger_levels(self):
        log = Logger("tests.utils")
        self.assertEqual(log.get_name(), "tests.utils")
        log.info({"event": "unit", "value": 1})
        log.debug("hidden unless debug")
        log.warning(["a", "b"])


class TestDotDict(unittest.TestCase):
    def test_attribute_access(self):
        self.assertEqual(DEFAULTS.phases, DEFAULTS["phases"])
        self.assertIsNone(DEFAULTS.not_a_key)

    def test_attribute_assignment(self):
        d = DotDict({"lam": 2.0})
        d.seed = 7
        self.assertEqual(d["seed"], 7)
        del d.lam
        self.assertNotIn("lam", d)


if __name__ == '__main__':
    unittest.main()
