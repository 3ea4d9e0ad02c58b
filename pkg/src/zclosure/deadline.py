"""Soft wall-clock deadline shared by the long-running kernels.

The closure driver arms the deadline from its time budget; hot loops in the
exact-arithmetic kernels call checkpoint(), which is a cheap comparison
until the deadline passes and a BudgetExhaustedError afterwards.

checkpoint() alone cannot interrupt a long call into a third-party library
(a single polynomial factorization can run for minutes), so arming from the
main thread also schedules a SIGALRM whose handler raises the same error
from whatever Python bytecode is executing at the time. Off the main
thread, or where setitimer is unavailable, only the checkpoints apply.
"""

import signal
import threading
import time

from .errors import BudgetExhaustedError

_deadline = None
_prev_handler = None


def _can_use_alarm():
    return (
        hasattr(signal, "setitimer")
        and threading.current_thread() is threading.main_thread()
    )


def _on_alarm(signum, frame):
    if _deadline is None:
        return
    remaining = _deadline - time.monotonic()
    if remaining > 0:
        signal.setitimer(signal.ITIMER_REAL, remaining + 0.05)
        return
    raise BudgetExhaustedError("time budget exceeded")


def arm(seconds):
    """Arm (or, with None, disarm) the deadline `seconds` from now."""
    global _deadline, _prev_handler
    if seconds is None:
        disarm()
        return
    _deadline = time.monotonic() + seconds
    if _can_use_alarm():
        _prev_handler = signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, seconds + 0.05)


def disarm():
    global _deadline, _prev_handler
    _deadline = None
    if _can_use_alarm():
        signal.setitimer(signal.ITIMER_REAL, 0)
        if _prev_handler is not None:
            signal.signal(signal.SIGALRM, _prev_handler)
            _prev_handler = None


def checkpoint():
    if _deadline is not None and time.monotonic() > _deadline:
        raise BudgetExhaustedError("time budget exceeded")
