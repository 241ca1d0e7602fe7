"""Contact-set files on disk."""
from __future__ import annotations

import json
from pathlib import Path

from .contact_model import problem_from_dict, problem_to_dict
from .errors import ValidationError


def load_problem(path):
    """Read a contact-set JSON file as ``(contacts, robot, accel, com_bounds)``.

    Syntax errors are reported with line and column; schema errors with the
    offending field path.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    try:
        label = data.get("label", path.stem) if isinstance(data, dict) else path.stem
        return problem_from_dict(data, label=label)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_problem(path, contacts, robot, accel=None, com_bounds=None):
    Path(path).write_text(json.dumps(problem_to_dict(contacts, robot, accel, com_bounds), indent=1))


def write_corpus(directory, corpus):
    """Write ``generate_corpus`` output as one JSON file per scene; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, cs, robot, accel, bounds in corpus:
        p = directory / f"{name}.json"
        save_problem(p, cs, robot, accel, bounds)
        paths.append(p)
    return paths
