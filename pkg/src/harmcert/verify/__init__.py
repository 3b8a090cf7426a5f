"""Identity catalog, verification runner, proof replay and CLI."""

from .registry import CAPS, METHOD_CLASSES, IdentityRecord, catalog, get_record, self_test
from .replay import ReplayFailure, StepResult, replay_proof
from .runner import RunReport, VerificationResult, select, verify_all, verify_one

__all__ = [
    "CAPS",
    "METHOD_CLASSES",
    "IdentityRecord",
    "ReplayFailure",
    "RunReport",
    "StepResult",
    "VerificationResult",
    "catalog",
    "get_record",
    "replay_proof",
    "select",
    "self_test",
    "verify_all",
    "verify_one",
]
