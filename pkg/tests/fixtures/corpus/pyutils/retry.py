import functools
import logging
import time

log = logging.getLogger(__name__)


def retry(attempts=3, delay=0.5, exceptions=(Exception,)):
    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            last = None
            for attempt in range(1, attempts + 1):
                try:
                    return fn(*args, **kwargs)
                except exceptions as exc:
                    last = exc
                    log.warning("attempt %d/%d failed: %s", attempt, attempts, exc)
                    if attempt < attempts:
                        time.sleep(delay * attempt)
            raise last

        return wrapper

    return decorator
