import csv
import io
import json
import math

import pytest

from nucs.cli import EXIT_COMPUTE, EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, ComputeError, UsageError, execute, main, parse
from nucs.systems import ABMonopole, CoulombRing, Hartmann, RingOscillator, SpectrumEntry


def run(argv):
    out = io.StringIO()
    code = execute(parse(argv.split()), out)
    return code, out.getvalue()


class TestParse:
    def test_hartmann(self):
        cmd = parse("spectrum --system hartmann --eta 1 --sigma 1 --m 1 --n 0..2 --ntilde 0..2 --format json".split())
        assert cmd.subcommand == "spectrum"
        assert cmd.params == Hartmann(1.0, 1.0)
        assert cmd.n == (0, 1, 2) and cmd.ntilde == (0, 1, 2) and cmd.m == (1,)
        assert cmd.fmt == "json"

    def test_comma_list(self):
        assert parse("spectrum --system coulomb-ring --Z 1 --n 0,2,4".split()).n == (0, 2, 4)

    def test_trace(self):
        cmd = parse("trace --system oscillator --A 1 --l 0 --E 2.1213203".split())
        assert cmd.subcommand == "trace"
        assert cmd.params == RingOscillator(1.0)
        assert cmd.extra["E"] == 2.1213203

    def test_ab_from_effective(self):
        cmd = parse("spectrum --system ab-monopole --Z 1 --q 0.5 --m-tilde 1".split())
        assert cmd.params == ABMonopole.from_effective(1.0, 0.5, 1.0)

    @pytest.mark.parametrize(
        "argv, flag",
        [
            ("spectrum --system coulomb-ring --Z 1 --B 1 --C 5 --m 0", "--C"),
            ("spectrum --system coulomb-ring --Z -1", "--Z"),
            ("spectrum --system hartmann --eta 1", "--sigma"),
            ("spectrum --system oscillator --A 1 --n 3..1", "--n"),
            ("spectrum --system coulomb-ring --Z 1 --n x", "--n"),
            ("spectrum --system nope --Z 1", "--system"),
        ],
    )
    def test_usage_errors_name_the_flag(self, argv, flag):
        with pytest.raises(UsageError) as info:
            parse(argv.split())
        assert flag in str(info.value)

    def test_reality_message(self):
        with pytest.raises(UsageError, match=r"\(m\^2\+B\)\^2 >= C\^2"):
            parse("spectrum --system coulomb-ring --Z 1 --B 1 --C 5 --m 0".split())


class TestExitCodes:
    def test_usage(self, capsys):
        assert main("spectrum --system coulomb-ring --Z 1 --B 1 --C 5 --m 0".split()) == EXIT_USAGE
        captured = capsys.readouterr()
        assert captured.out == "" and "--C" in captured.err

    def test_compute(self, capsys):
        # a box of radius 2 cannot hold the 1s state
        assert main("verify --system coulomb-ring --Z 1 --points 200 --r-max 2".split()) == EXIT_COMPUTE
        captured = capsys.readouterr()
        assert captured.out == "" and "GridTooSmall" in captured.err

    def test_compute_error_is_raised_by_execute(self):
        cmd = parse("verify --system coulomb-ring --Z 1 --points 200 --r-max 2".split())
        with pytest.raises(ComputeError):
            execute(cmd, io.StringIO())

    def test_verify_pass(self, capsys):
        assert main("verify --system coulomb-ring --Z 1 --n 0..1 --tol 1e-3".split()) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True
        for row, exact in zip(payload["rows"], (-0.5, -0.125)):
            for key in ("closed_form", "nu_rootfind", "fd_oracle"):
                assert row[key] == pytest.approx(exact, rel=1e-3)

    def test_verify_tolerance_failure(self, capsys):
        assert main("verify --system coulomb-ring --Z 1 --n 0 --tol 1e-12".split()) == EXIT_TOLERANCE
        assert "1e-12" in capsys.readouterr().err


class TestSpectrum:
    def test_oscillator_csv(self):
        code, text = run("spectrum --system oscillator --A 1 --n 0..1 --ntilde 0 --m 0 --format csv")
        assert code == EXIT_OK
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["system", "n", "ntilde", "m", "l_eff", "energy", "method", "single_valued"]
        assert len(rows) == 3
        energies = [float(r[5]) for r in rows[1:]]
        assert energies == pytest.approx([3.0 / math.sqrt(2.0), 7.0 / math.sqrt(2.0)], rel=1e-14)
        assert energies == pytest.approx([2.1213203, 4.9497475], abs=1e-7)
        assert rows[1][7] == "true"

    def test_hartmann_json(self):
        code, text = run("spectrum --system hartmann --eta 1 --sigma 1 --m 1 --n 0..2 --ntilde 0..2")
        payload = json.loads(text)
        assert code == EXIT_OK
        assert set(payload) == {"system", "units", "entries"}
        assert payload["system"] == {"kind": "hartmann", "eta": 1.0, "sigma": 1.0}
        assert len(payload["entries"]) == 9
        first = payload["entries"][0]
        assert (first["n"], first["ntilde"]) == (0, 0)
        assert first["energy"] == pytest.approx(-1.0 / (2.0 * (1.0 + math.sqrt(2.0)) ** 2), rel=1e-14)

    @pytest.mark.parametrize(
        "argv",
        [
            "spectrum --system hartmann --eta 1 --sigma 1 --m 1 --n 0..2 --ntilde 0..2",
            "spectrum --system ab-monopole --Z 1 --q 0.5 --m-tilde 1 --n 0..3",
            "spectrum --system coulomb-ring --Z 2 --B 0.5 --C -1 --m 1..3 --n 0..1 --ntilde 0..1",
        ],
    )
    def test_json_round_trip(self, argv):
        _, text = run(argv)
        for raw in json.loads(text)["entries"]:
            entry = SpectrumEntry.from_dict(raw)
            assert entry.to_dict() == raw

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_deterministic(self, fmt):
        argv = f"spectrum --system coulomb-ring --Z 1 --B 1 --C 1 --m 0..2 --n 0..2 --ntilde 0..2 --format {fmt}"
        assert run(argv)[1] == run(argv)[1]

    def test_unit_scaling(self):
        _, a = run("spectrum --system coulomb-ring --Z 1 --format csv")
        _, b = run("spectrum --system coulomb-ring --Z 1 --mu 2 --format csv")
        ea = float(a.splitlines()[1].split(",")[5])
        eb = float(b.splitlines()[1].split(",")[5])
        assert eb == pytest.approx(2.0 * ea, rel=1e-14)


class TestTrace:
    def test_coulomb_radial(self):
        code, text = run("trace --system coulomb-ring --Z 1 --part radial --l 0 --E -0.5")
        payload = json.loads(text)
        assert code == EXIT_OK
        assert len(payload["branches"]) == 4
        chosen = payload["selected"]
        assert (chosen["pi_c0"], chosen["pi_c1"]) == pytest.approx((0.0, -1.0), abs=1e-12)
        assert (chosen["tau_c0"], chosen["tau_c1"]) == pytest.approx((2.0, -2.0), abs=1e-12)
        assert sum(row["selected"] for row in payload["branches"]) == 1

    def test_oscillator_csv(self):
        code, text = run("trace --system oscillator --A 1 --l 0 --E 2.1213203 --format csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == EXIT_OK and len(rows) == 4
        chosen = [r for r in rows if r["selected"] == "true"]
        assert len(chosen) == 1
        assert float(chosen[0]["pi_c0"]) == pytest.approx(1.0)
        assert float(chosen[0]["tau_slope"]) < 0.0

    def test_angular_uses_effective_l_by_default(self):
        _, text = run("trace --system coulomb-ring --Z 1 --B 1 --C 1 --m 1 --part angular")
        payload = json.loads(text)
        # on the closed-form l the selected lambda vanishes for ntilde = 0
        assert payload["selected"]["lambda"] == pytest.approx(0.0, abs=1e-12)


class TestWavefunction:
    def test_samples(self):
        code, text = run("wavefunction --system coulomb-ring --Z 1 --r 0..4 --samples 5 --format csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == EXIT_OK and len(rows) == 5
        r = [float(row["r"]) for row in rows]
        assert r == [0.0, 1.0, 2.0, 3.0, 4.0]
        # 1s radial part 2 exp(-r)
        for row in rows[1:]:
            assert float(row["radial_value"]) == pytest.approx(2.0 * math.exp(-float(row["r"])), rel=1e-12)

    def test_json_metadata(self):
        _, text = run("wavefunction --system oscillator --A 1 --n 1 --r 1 --samples 1")
        payload = json.loads(text)
        assert payload["state"]["energy"] == pytest.approx(7.0 / math.sqrt(2.0))
        assert len(payload["samples"]) == 1
