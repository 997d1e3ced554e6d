import time
import uuid


def request_id_middleware(handler):
    def wrapped(request):
        request.setdefault("headers", {})
        rid = request["headers"].get("X-Request-Id") or uuid.uuid4().hex
        request["request_id"] = rid
        response = handler(request)
        response.setdefault("headers", {})["X-Request-Id"] = rid
        return response

    return wrapped


def timing_middleware(handler, clock=time.perf_counter):
    def wrapped(request):
        start = clock()
        try:
            return handler(request)
        finally:
            elapsed = (clock() - start) * 1000
            request["elapsed_ms"] = round(elapsed, 3)

    return wrapped
