import csv
import io
import json
import subprocess
import sys

import pytest

from ffmoments.cli import run

CONTEXT = ["q", "modulus", "D", "subcommand", "paper_ref"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_summatory_example():
    code, out, _ = call("summatory", "--q", "3", "--fn", "d_over_norm", "--x", "5")
    assert code == 0
    r = rows(out)[0]
    assert r["brute"] == r["closed"] == "21/1"
    assert r["agree"] == "true"


def test_moment_json():
    code, out, _ = call("moment", "--q", "2", "--modulus", "1,1,0,1", "--order", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data[0]["order"] == 4 and data[0]["modulus"] == 11 and data[0]["D"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("field", "--q", "9"),
        ("enumerate", "--q", "2", "--deg", "3", "--irreducible"),
        ("factor", "--q", "3", "--poly", "2,0,1,1"),
        ("pi", "--q", "4", "--n", "3"),
        ("chars", "--q", "3", "--modulus", "1,0,1"),
        ("lvalues", "--q", "2", "--modulus", "deg:4"),
        ("epsilon", "--q", "5", "--modulus", "deg:2"),
        ("shortsum", "--q", "3", "--modulus", "deg:3", "--pi", "corrected"),
        ("moment", "--q", "3", "--modulus", "deg:3", "--order", "2"),
        ("fourth-decompose", "--q", "2", "--modulus", "deg:2", "--enumerate", "yes"),
        ("lowerbound", "--q", "2", "--modulus", "deg:5", "--k", "1"),
        ("constants", "--k", "2"),
        ("dkseries", "--q", "2", "--k", "2", "--n", "5"),
        ("psi", "--q", "2", "--x", "6", "--z", "2"),
        ("phi-sifted", "--q", "2", "--K", "1,1,0,1", "--A", "1", "--x", "7", "--z", "3", "--z-min", "2"),
        ("selberg", "--q", "3", "--z", "3", "--z-min", "1"),
        ("divprog", "--q", "2", "--K", "1,1,1", "--x", "8"),
        ("smoothtail", "--q", "2", "--z", "8"),
    ],
)
def test_subcommands_succeed_with_context_columns(argv):
    code, out, err = call(*argv)
    assert code == 0, err
    table = rows(out)
    assert table
    assert list(table[0])[:5] == CONTEXT
    assert all(r["subcommand"] == argv[0] for r in table)


def test_complex_and_rational_encoding():
    code, out, _ = call("lvalues", "--q", "3", "--modulus", "1,0,1")
    header = list(rows(out)[0])
    assert any(h.endswith("_re") for h in header) and any(h.endswith("_im") for h in header)
    code, out, _ = call("selberg", "--q", "2", "--z", "3")
    assert "/" in rows(out)[0]["S"]


@pytest.mark.parametrize(
    "argv,flag",
    [
        (("moment", "--q", "2", "--modulus", "1,0,1"), "modulus"),
        (("moment", "--q", "6", "--modulus", "deg:3"), "--q"),
        (("moment", "--q", "2", "--modulus", "deg:3", "--order", "3"), "--order"),
        (("selberg", "--q", "2"), "--z"),
        (("lowerbound", "--q", "2", "--modulus", "deg:3", "--threads", "0", "--k", "1"), "--threads"),
        (("nonsense",), "nonsense"),
    ],
)
def test_usage_errors_exit_1_and_name_the_flag(argv, flag):
    code, out, err = call(*argv)
    assert code == 1
    assert flag in err


def test_constraint_violation_exits_1():
    code, _, err = call("divprog", "--q", "2", "--K", "1,1,0,1", "--x", "6")
    assert code == 1 and "deg K" in err


def test_broken_identity_exits_2_and_names_it():
    code, _, err = call("shortsum", "--q", "3", "--modulus", "1,0,1")
    assert code == 2 and "short-sum" in err
    code, _, err = call("fourth-decompose", "--q", "2", "--modulus", "deg:4")
    assert code == 2 and "diagonal" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("moment", "--q", "2", "--modulus", "deg:8", "--order", "4"),
        ("epsilon", "--q", "3", "--modulus", "deg:4"),
        ("psi", "--q", "3", "--x", "6", "--x-min", "1", "--z", "2"),
        ("divprog", "--q", "2", "--K", "1,1,1", "--x", "9"),
    ],
)
def test_output_identical_across_runs_and_threads(argv):
    outs = {call(*argv, "--threads", str(t))[1] for t in (1, 1, 3)}
    assert len(outs) == 1


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "ffmoments", "pi", "--q", "2", "--n", "4"], capture_output=True, text=True
    )
    assert p.returncode == 0
    assert rows(p.stdout)[0]["subcommand"] == "pi"
