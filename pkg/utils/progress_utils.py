"""
Progress events for long enumerations (exact reports, max-collision scans,
certain-collision searches). Events are logged; listeners can subscribe to
receive them as dictionaries, e.g. the dashboard's progress bar.
"""
from datetime import datetime
import threading

from utils.log_utils import get_logger

logger = get_logger("progress")

_listeners = []
_lock = threading.Lock()


def subscribe(callback):
    """Register callback(message: dict); returns an unsubscribe function."""
    with _lock:
        _listeners.append(callback)

    def unsubscribe():
        with _lock:
            if callback in _listeners:
                _listeners.remove(callback)

    return unsubscribe


def broadcast(message_type, data):
    """Deliver one event to every listener. Listener failures are logged, not raised."""
    message = {
        "type": message_type,
        "timestamp": datetime.now().isoformat(),
        **data,
    }
    with _lock:
        listeners = list(_listeners)
    for listener in listeners:
        try:
            listener(message)
        except Exception as e:
            logger.error(f"Progress listener failed: {e}")
    return message


def notify_started(task, total):
    logger.info(f"{task}: started ({total} units)")
    return broadcast("started", {"task": task, "total": total, "done": 0, "progress_percent": 0})


def notify_progress(task, done, total):
    percent = (done / total * 100) if total > 0 else 0
    logger.debug(f"{task}: {done}/{total} ({percent:.0f}%)")
    return broadcast(
        "progress",
        {"task": task, "total": total, "done": done, "progress_percent": percent},
    )


def notify_complete(task, summary=None):
    logger.info(f"{task}: complete")
    return broadcast("complete", {"task": task, "summary": summary or {}, "progress_percent": 100})
