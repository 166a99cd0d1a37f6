from config.lab_config import DEFAULT_PAIR_BUDGET, DEFAULT_SEED, get_lab_config
from utils import progress_utils


def test_lab_config_defaults(monkeypatch):
    for name in ("HASHLAB_SEED", "HASHLAB_PAIR_BUDGET", "HASHLAB_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    config = get_lab_config()
    assert config["seed"] == DEFAULT_SEED
    assert config["pair_budget"] == DEFAULT_PAIR_BUDGET
    assert config["workers"] == 1


def test_lab_config_environment_overrides(monkeypatch):
    monkeypatch.setenv("HASHLAB_SEED", "0x10")
    monkeypatch.setenv("HASHLAB_WORKERS", "0")
    monkeypatch.setenv("HASHLAB_BUDGET", "lots")
    config = get_lab_config()
    assert config["seed"] == 16
    assert config["workers"] == 1
    assert config["budget"] == 10**9


def test_progress_listeners():
    received = []
    unsubscribe = progress_utils.subscribe(received.append)
    try:
        progress_utils.notify_started("scan", 4)
        message = progress_utils.notify_progress("scan", 1, 4)
        progress_utils.notify_complete("scan", {"rows": 4})
    finally:
        unsubscribe()
    assert [m["type"] for m in received] == ["started", "progress", "complete"]
    assert message["progress_percent"] == 25
    assert received[-1]["summary"] == {"rows": 4}
    progress_utils.notify_progress("scan", 2, 4)
    assert len(received) == 3


def test_failing_listener_does_not_stop_delivery():
    received = []

    def broken(message):
        raise RuntimeError("listener down")

    first = progress_utils.subscribe(broken)
    second = progress_utils.subscribe(received.append)
    try:
        progress_utils.notify_progress("scan", 0, 0)
    finally:
        first()
        second()
    assert received[0]["progress_percent"] == 0
