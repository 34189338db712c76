# solver/cli.py
"""
Helpers shared by the management commands: reading drawing documents and
turning library errors into CommandError exit codes.

Exit codes: 2 invalid input, 3 internal verification failure, 4 oracle bound.
"""
import json
import logging
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from graphs.serializers import load_drawing

logger = logging.getLogger(__name__)

INVALID_INPUT = 2
VERIFICATION_FAILED = 3
ORACLE_BOUND = 4


def error_text(exc) -> str:
    if isinstance(exc, ValidationError):
        return '; '.join(exc.messages)
    return str(exc)


def read_document(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CommandError(f"Cannot read {path}: {exc}", returncode=INVALID_INPUT)
    except json.JSONDecodeError as exc:
        raise CommandError(f"{path} is not valid JSON: {exc}", returncode=INVALID_INPUT)


def read_drawing(path, check=True):
    document = read_document(path)
    try:
        return load_drawing(document, check=check)
    except ValidationError as exc:
        logger.warning(f"Rejected drawing {path}: {error_text(exc)}")
        raise CommandError(error_text(exc), returncode=INVALID_INPUT)


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)
