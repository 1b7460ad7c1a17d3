import functools
import threading


def singleton(cls):
    """
    Class decorator returning one shared instance per distinct constructor call.

    Calling the decorated class again with the same arguments returns the cached
    instance; calling it with different arguments replaces the cached one. Guarded
    by a lock so joblib's threading backend never builds two instances.
    """
    lock = threading.Lock()
    state: dict = {}

    @functools.wraps(cls)
    def wrapper(*args, **kwargs):
        key = (args, tuple(sorted(kwargs.items())))
        with lock:
            if state.get("key") != key or "instance" not in state:
                state["key"] = key
                state["instance"] = cls(*args, **kwargs)
            return state["instance"]

    def reset():
        with lock:
            state.clear()

    wrapper.reset = reset
    return wrapper
