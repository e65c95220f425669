"""Operational surface: CLI lifecycle, HTTP API, annotation persistence."""

from .config import ENV_PREFIX, ServiceConfig, load_service_config
from .store import (
    SOURCES,
    VERDICTS,
    AnnotationEvent,
    AnnotationStore,
    export_supervised,
    make_event,
)
from .responses import SCORE_DIGITS, match_response, requirements_response
from .http import ServiceState, create_app, load_state
from .cli import build_parser, main

__all__ = [
    "ENV_PREFIX",
    "ServiceConfig",
    "load_service_config",
    "SOURCES",
    "VERDICTS",
    "AnnotationEvent",
    "AnnotationStore",
    "export_supervised",
    "make_event",
    "SCORE_DIGITS",
    "match_response",
    "requirements_response",
    "ServiceState",
    "create_app",
    "load_state",
    "build_parser",
    "main",
]
