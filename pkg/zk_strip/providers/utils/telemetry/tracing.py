# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import base64
import logging
import threading
import time
import uuid
from functools import wraps
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, Field

log = logging.getLogger(__name__)


def generate_short_uuid(len: int = 12):
    full_uuid = uuid.uuid4()
    uuid_bytes = full_uuid.bytes
    encoded = base64.urlsafe_b64encode(uuid_bytes)
    return encoded.rstrip(b"=").decode("ascii")[:len]


class Span(BaseModel):
    span_id: str
    trace_id: str
    name: str
    start: float
    parent_span_id: Optional[str] = None
    attributes: Dict[str, Any] = Field(default_factory=dict)


class TraceContext:
    def __init__(self, trace_id: str):
        self.trace_id = trace_id
        self.spans: List[Span] = []

    def push_span(self, name: str, attributes: Dict[str, Any] = None):
        current_span = self.get_current_span()
        span = Span(
            span_id=generate_short_uuid(),
            trace_id=self.trace_id,
            name=name,
            start=time.perf_counter(),
            parent_span_id=current_span.span_id if current_span else None,
            attributes=attributes or {},
        )
        self.spans.append(span)
        log.debug(f"[{span.trace_id}/{span.span_id}] start {name}")
        return span

    def pop_span(self, ok: bool = True):
        span = self.spans.pop()
        elapsed = time.perf_counter() - span.start
        level = logging.INFO if span.parent_span_id is None else logging.DEBUG
        status = "ok" if ok else "error"
        extra = "".join(f" {k}={v}" for k, v in span.attributes.items())
        log.log(
            level,
            f"[{span.trace_id}/{span.span_id}] {span.name} {status} in {elapsed:.3f}s{extra}",
        )

    def get_current_span(self):
        return self.spans[-1] if self.spans else None


# one trace per thread so concurrent sweep runs do not interleave their spans
_LOCAL = threading.local()


def _current_context() -> TraceContext:
    context = getattr(_LOCAL, "context", None)
    if context is None:
        context = TraceContext(generate_short_uuid(8))
        _LOCAL.context = context
    return context


def setup_logging(level: int = logging.INFO):
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )
    logging.getLogger("zk_strip").setLevel(level)


class SpanContextManager:
    def __init__(self, name: str, attributes: Dict[str, Any] = None):
        self.name = name
        self.attributes = attributes

    def __enter__(self):
        _current_context().push_span(self.name, self.attributes)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        _current_context().pop_span(ok=exc_type is None)

    def __call__(self, func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with SpanContextManager(self.name, self.attributes):
                return func(*args, **kwargs)

        return wrapper


def span(name: str, attributes: Dict[str, Any] = None):
    return SpanContextManager(name, attributes)
