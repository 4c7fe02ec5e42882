import csv
import json
from fractions import Fraction

import pytest

from moranspectra.cli import main
from moranspectra.config import (
    ConfigError,
    HadamardSpec,
    LevelSpec,
    SystemConfig,
    WordSpec,
    format_config,
    parse_config,
)
from moranspectra.digitsets import GenericDigitSet, canonical_digits, scaled_canonical
from moranspectra.lattice import Mat2

CONST_2I = """\
period:
  matrix: 2 0 0 2
  digits: canonical
"""

WORD_23 = """\
period:
  matrix: 2 0 0 2
word:
  sigma_preperiod: 2
  sigma_period: 3
  t_values: 1 3 5
"""

HADAMARD_OK = """\
hadamard:
  matrix: 2 0 0 2
  digits: canonical
  companions: 0,0 1,0 0,1 1,1
"""


def write(tmp_path, text, name="cfg.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestParse:
    def test_system_config(self):
        cfg = parse_config(CONST_2I)
        sysm = cfg.system()
        assert sysm.period == ((Mat2.scalar(2), canonical_digits()),)

    def test_word_config(self):
        cfg = parse_config(WORD_23)
        word = cfg.tword()
        assert word.preperiod == (2,) and word.period == (3,)
        sysm = cfg.system()
        assert sysm.level(1)[1] == scaled_canonical(3)
        assert sysm.level(5)[1] == scaled_canonical(5)

    def test_digit_variants(self):
        cfg = parse_config(
            "period:\n"
            "  matrix: 4 0 0 4\n"
            "  digits: structured 1 2 0 1\n"
            "  matrix: 4 0 0 4\n"
            "  digits: generic 0,0 1,0 0,1 -1,-1\n"
        )
        assert len(cfg.period) == 2
        assert cfg.period[0].digits.alpha == (1, 2)
        assert isinstance(cfg.period[1].digits, GenericDigitSet)

    def test_positioned_errors(self):
        with pytest.raises(ConfigError) as err:
            parse_config("period:\n  matrix: 2 0\n")
        assert err.value.line == 2
        with pytest.raises(ConfigError) as err:
            parse_config("bogus:\n")
        assert err.value.line == 1
        with pytest.raises(ConfigError) as err:
            parse_config("period:\n  matrix: 2 0 0 2\n  digits: scaled 2\n")
        assert err.value.line == 3
        with pytest.raises(ConfigError) as err:
            parse_config("word:\n  t_values: 1 3\n")
        assert err.value.line == 1

    def test_comments_and_blanks(self):
        cfg = parse_config("# header\n\nperiod:\n  matrix: 2 0 0 2  # M\n  digits: canonical\n")
        assert len(cfg.period) == 1


ROUND_TRIP_CONFIGS = [
    SystemConfig(period=[LevelSpec(Mat2.scalar(2), canonical_digits())]),
    SystemConfig(
        preperiod=[LevelSpec(Mat2(2, 2, 0, 2), scaled_canonical(9))],
        period=[LevelSpec(Mat2.scalar(2), scaled_canonical(3))],
    ),
    SystemConfig(
        period=[LevelSpec(Mat2.scalar(2), None)],
        word=WordSpec((2,), (3,), (1, 3, 5)),
    ),
    SystemConfig(
        period=[
            LevelSpec(
                Mat2.scalar(12),
                GenericDigitSet(((0, 0), (1, 0), (0, 1), (-1, -1))),
            )
        ],
        hadamard=HadamardSpec(
            Mat2.scalar(2),
            canonical_digits(),
            ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(3, 2))),
        ),
    ),
    SystemConfig(
        period=[LevelSpec(Mat2(4, 0, 0, 4), scaled_canonical(-3))],
    ),
]


@pytest.mark.parametrize("cfg", ROUND_TRIP_CONFIGS)
def test_round_trip(cfg):
    assert parse_config(format_config(cfg)) == cfg


class TestExitCodes:
    def test_validate_ok(self, tmp_path, capsys):
        assert main(["validate", write(tmp_path, CONST_2I)]) == 0
        out = capsys.readouterr().out
        assert "iota: 0.5" in out

    def test_validate_invalid(self, tmp_path, capsys):
        bad = "period:\n  matrix: 1 0 0 3\n  digits: canonical\n"
        assert main(["validate", write(tmp_path, bad)]) == 2
        assert "NotExpanding at level 1" in capsys.readouterr().out

    def test_parse_error_exit_3(self, tmp_path, capsys):
        assert main(["validate", write(tmp_path, "period:\n  matrix: x\n")]) == 3
        assert main(["validate", str(tmp_path / "missing.txt")]) == 3

    def test_empty_period_parse_error(self, tmp_path):
        assert main(["classify", write(tmp_path, "preperiod:\n  matrix: 2 0 0 2\n  digits: canonical\n")]) == 3
        assert main(["validate", write(tmp_path, "period:\n")]) == 3

    def test_classify_check(self, tmp_path):
        assert main(["classify", write(tmp_path, WORD_23), "--check"]) == 1
        assert main(["classify", write(tmp_path, CONST_2I), "--check"]) == 0

    def test_cap_exit_4(self, tmp_path):
        assert main(["emit", write(tmp_path, CONST_2I), "--depth", "9", "--grid", "2",
                     "--out", str(tmp_path), "--cap", "100"]) == 4

    def test_hadamard_mismatch_exit_2(self, tmp_path):
        bad = HADAMARD_OK.replace(" 1,1", "")
        assert main(["hadamard", write(tmp_path, bad)]) == 2


class TestCommands:
    def test_hadamard(self, tmp_path, capsys):
        assert main(["hadamard", write(tmp_path, HADAMARD_OK)]) == 0
        assert "hadamard: True" in capsys.readouterr().out

    def test_zero_certificate(self, tmp_path, capsys):
        assert main(["zero", write(tmp_path, CONST_2I), "--xi", "1,1"]) == 0
        out = capsys.readouterr().out
        assert "'level': 1" in out and "1/2" in out

    def test_zero_requires_rational(self, tmp_path):
        assert main(["zero", write(tmp_path, CONST_2I), "--xi", "0.5,0.5"]) == 2

    def test_fourier(self, tmp_path, capsys):
        assert main(["fourier", write(tmp_path, CONST_2I), "--xi", "0.3,0.7",
                     "--eps", "1e-8"]) == 0
        out = capsys.readouterr().out
        assert "bound" in out

    def test_spectrum_tower_csv(self, tmp_path, capsys):
        out_csv = tmp_path / "pts.csv"
        assert main(["spectrum", write(tmp_path, CONST_2I), "--kind", "tower",
                     "--depth", "2", "--out", str(out_csv)]) == 0
        rows = list(csv.reader(out_csv.open()))
        assert rows[0] == ["x", "y"]
        assert len(rows) == 17
        assert "orthogonal: True" in capsys.readouterr().out

    def test_spectrum_lattice_completeness(self, tmp_path, capsys):
        assert main(["spectrum", write(tmp_path, CONST_2I), "--kind", "lattice",
                     "--box", "3", "--xi", "0,0"]) == 0
        out = capsys.readouterr().out
        assert "completeness_sum: 0.99" in out or "completeness_sum: 1.0" in out

    def test_oracle(self, tmp_path, capsys):
        assert main(["oracle", write(tmp_path, CONST_2I), "--level", "2"]) == 0
        assert "unitary: True" in capsys.readouterr().out

    def test_emit_files(self, tmp_path, capsys):
        outdir = tmp_path / "out"
        assert main(["emit", write(tmp_path, CONST_2I), "--depth", "5",
                     "--grid", "5", "--out", str(outdir)]) == 0
        rows = list(csv.reader((outdir / "attractor.csv").open()))
        assert rows[0] == ["x", "y"]
        assert len(rows) == 1025  # header + 4^5
        grid = list(csv.reader((outdir / "fourier_grid.csv").open()))
        assert grid[0] == ["x", "y", "absval"]
        assert len(grid) == 26


class TestDeterminism:
    def test_report_blocks_identical(self, tmp_path, capsys):
        path = write(tmp_path, WORD_23)
        main(["classify", path])
        first = capsys.readouterr().out
        main(["classify", path])
        second = capsys.readouterr().out

        def block(text):
            for line in text.splitlines():
                if line.startswith("{"):
                    return json.loads(line)
            raise AssertionError("no JSON block")

        assert block(first) == block(second)
