"""JSON loading with schema validation for tree and network documents."""
import json
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import SymquantError


class SchemaError(SymquantError):
    """Document violates its schema; ``path`` is the JSON path of the bad field."""

    def __init__(self, message, path):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_schema(name):
    return json.loads(resources.files("symquant").joinpath("data", f"{name}.schema.json").read_text())


def validate(doc, name):
    validator = jsonschema.Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, err.json_path)
    return doc


def read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SymquantError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymquantError(f"{path}: invalid JSON ({exc})") from exc


def bundled(name):
    """Parsed copy of a document shipped in ``symquant/data``."""
    return json.loads(resources.files("symquant").joinpath("data", name).read_text())
