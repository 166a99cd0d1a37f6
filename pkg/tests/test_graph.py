from hashlab.graph import DEFAULT_OPTIONS, BOUNDS_EXPECTED, _check, bounds_checks, run_reproduction, witness_checks

LIGHT = {
    "bounds_L": (2, 4),
    "gp_n_max": 3,
    "certain_search": False,
    "unary_L": (1,),
    "perfect_L": 3,
    "binomial_L": 3,
}


def test_check_record():
    assert _check("x", 1, 1) == {"check": "x", "expected": "1", "measured": "1", "passed": True}
    assert _check("y", ">= 0.94", "0.95", True)["passed"] is True
    assert _check("z", 2, 3)["passed"] is False


def test_bounds_checks_cover_published_rows():
    checks = bounds_checks({"bounds_L": sorted(BOUNDS_EXPECTED)})
    assert [c["check"] for c in checks] == ["bounds L=2", "bounds L=4", "bounds L=8", "bounds L=16"]
    assert all(c["passed"] for c in checks)


def test_witness_checks_pass():
    checks = witness_checks({**DEFAULT_OPTIONS, **LIGHT})
    names = [c["check"] for c in checks]
    assert "hT separation L=2" in names
    assert "tau pair p=7 n=7" in names
    assert all(c["passed"] for c in checks)


def test_reproduction_runs_every_stage():
    state = run_reproduction(LIGHT)
    assert state["status"] == "Complete"
    assert state["error"] is None
    names = [c["check"] for c in state["checks"]]
    assert names[:2] == ["bounds L=2", "bounds L=4"]
    assert {"gp n=1", "gp n=2", "gp n=3"} <= set(names)
    assert "pearson eps_au L=2 len<=4" in names
    assert "shift-tabulated low bits" in names
    assert all(c["passed"] for c in state["checks"])


def test_reproduction_stops_at_the_failing_stage():
    state = run_reproduction({**LIGHT, "bounds_L": (0,)})
    assert state["status"] == "Failed"
    assert state["error"].startswith("bounds:")
    assert state["checks"] == []
