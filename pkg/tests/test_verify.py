import json

import pytest
from conftest import assert_digits, oracle

from harmcert.numcore import DomainError, ctx_new
from harmcert.verify import (
    CAPS,
    METHOD_CLASSES,
    ReplayFailure,
    catalog,
    get_record,
    replay_proof,
    select,
    self_test,
    verify_all,
    verify_one,
)
from harmcert.verify import replay as R
from harmcert.verify.cli import main
from harmcert.verify.expr import OPERATIONS
from harmcert.verify.registry import LHS_OPERATIONS


# -- registry ----------------------------------------------------------------


def test_catalog_shape():
    records = catalog()
    assert len(records) >= 28
    assert len({r.id for r in records}) == len(records)
    assert all(r.method in METHOD_CLASSES for r in records)
    assert self_test() == []


def test_record_classes():
    sun2 = get_record("sun2")
    assert sun2.rate_class == "geometric(1/2)" and sun2.precision_cap == 1000
    assert get_record("sun1").method == "alternating_acceleration"
    assert get_record("sun1").precision_cap == 30
    choi = get_record("choi_chen")
    assert choi.method == "positive_unit" and choi.precision_cap == 10
    assert get_record("lemniscate_A").precision_cap == CAPS["quadrature"]
    with pytest.raises(KeyError):
        get_record("no_such_id")


def test_descriptors_use_only_known_operations():
    for r in catalog():
        assert r.rhs.operations() <= OPERATIONS, r.id
        assert r.lhs.operation in LHS_OPERATIONS | {"agm"}, r.id


def test_select():
    geometric = select("geometric")
    assert geometric and all(r.method == "geometric" for r in geometric)
    assert [r.id for r in select("lemniscate")] == sorted(r.id for r in select("lemniscate"))
    assert len(select("alternating")) == 3
    assert select("zzz") == []


# -- runner ------------------------------------------------------------------


def test_verify_sun2():
    r = verify_one("sun2", 50)
    assert r.passed and r.digits_agreed >= 50 and r.terms_or_nodes <= 600
    assert len(r.lhs.lstrip("-").replace(".", "").lstrip("0")) == 52  # effective + 2 digits


def test_verify_quadrature_record():
    r = verify_one("lemniscate_A", 30)
    assert r.passed and r.effective_digits == 30 and r.terms_or_nodes > 0


def test_verify_positive_unit_cap():
    r = verify_one("choi_chen", 50)
    assert r.effective_digits == 10 and r.passed and r.requested_digits == 50


def test_verify_rejects_bad_input():
    with pytest.raises(ValueError):
        verify_one("sun2", 0)
    with pytest.raises(KeyError):
        verify_one("nope", 10)


def _strip_seconds(report: dict) -> dict:
    for r in report["results"]:
        r.pop("seconds")
    return report


def test_report_determinism():
    a = verify_all(30, "lemniscate").to_dict()
    b = verify_all(30, "lemniscate", workers=2).to_dict()
    assert json.dumps(_strip_seconds(a)) == json.dumps(_strip_seconds(b))
    assert a["schema_version"] == 1 and a["summary"]["failed"] == 0
    fields = {"id", "description", "paper_anchor", "method", "terms_or_nodes", "lhs", "rhs",
              "digits_agreed", "effective_digits", "pass", "requested_digits", "error"}
    assert set(a["results"][0]) == fields


@pytest.mark.parametrize("rid", ["sun2", "tauraso", "bailey_base", "gf_binomsq_32"])
def test_raising_digits_keeps_geometric_passes(rid):
    for d in (15, 40, 90):
        assert verify_one(rid, d).passed, (rid, d)


# -- replay ------------------------------------------------------------------


@pytest.fixture(scope="module")
def replay25():
    return replay_proof(25)


def test_replay_all_steps(replay25):
    assert len(replay25) == R.step_count() == 14
    assert all(s.passed for s in replay25)
    assert [s.label for s in replay25] == list(R.ROMAN)
    assert [s.structural for s in replay25].count(True) == 2


def test_replay_main_desired_value(replay25):
    step = replay25[12]
    assert step.label == "xiii"
    assert abs(float(step.lhs) - 0.09566) < 2e-5  # 0.0956499 to seven places
    ctx = ctx_new(25)
    assert_digits(ctx.mp.mpf(step.lhs), oracle("main_desired", ctx), 25)
    assert all(float(s.residual) < 1e-25 for s in replay25)
    report = R.replay_report(25, replay25)
    assert report["summary"] == {"total": 14, "completed": 14, "passed": 14}


def test_replay_failure_halts(monkeypatch):
    class Bad:
        def __init__(self, env):
            mp = env.mp
            self.lhs, self.rhs, self.residual = mp.one, mp.mpf(2), mp.one

    steps = list(R.STEPS)
    steps[2] = ("broken link", Bad, False)
    monkeypatch.setattr(R, "STEPS", tuple(steps))
    with pytest.raises(ReplayFailure) as info:
        replay_proof(10)
    assert info.value.step.index == 3 and len(info.value.completed) == 3
    assert "step 3 (iii)" in str(info.value) and "residual" in str(info.value)
    assert len(replay_proof(10, halt=False)) == 14


def test_replay_digit_limit():
    with pytest.raises(DomainError):
        replay_proof(31)


# -- CLI exit codes ----------------------------------------------------------


def test_cli_list(capsys):
    assert main(["list"]) == 0
    assert "sun2" in capsys.readouterr().out


def test_cli_verify(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["verify", "--id", "sun2", "--digits", "30", "--json", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["results"][0]["pass"] and data["summary"]["passed"] == 1
    assert main(["verify", "--id", "unknown", "--digits", "30"]) == 2


def test_cli_mismatch(monkeypatch):
    from harmcert.verify import cli

    def fake(rid, digits, method):
        r = verify_one("bailey_base", 10)
        r.passed = False
        return r

    monkeypatch.setattr(cli, "verify_one", fake)
    assert main(["verify", "--id", "bailey_base", "--digits", "10"]) == 1


def test_cli_usage_errors():
    for argv in (["verify", "--digits", "10"], ["verify", "--id", "sun2", "--digits", "0"], ["bogus"],
                 ["eval", "pfq", "--upper", "1/2,x", "--lower", "1", "--arg", "1/2", "--digits", "10"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


def test_cli_verify_all_and_replay(tmp_path):
    assert main(["verify-all", "--digits", "20", "--filter", "lemniscate"]) == 0
    path = tmp_path / "replay.json"
    assert main(["replay", "--digits", "12", "--json", str(path)]) == 0
    assert json.loads(path.read_text())["summary"]["passed"] == 14
    assert main(["replay", "--digits", "31"]) == 2


def test_cli_eval(capsys):
    argv = ["eval", "pfq", "--upper", "1/2,1/2", "--lower", "1", "--arg", "1/4", "--digits", "20"]
    assert main(argv) == 0
    ctx = ctx_new(20)
    printed = ctx.mp.mpf(capsys.readouterr().out.strip())
    assert_digits(printed, oracle("hyp2f1_half_half_1_quarter", ctx), 19)
    # a divergent series is an evaluation error
    assert main(["eval", "pfq", "--upper", "1,1", "--lower", "1", "--arg", "1", "--digits", "10"]) == 2
