"""Shared registry for acceptance-criterion verdict lines.

Tests append lines here; the conftest terminal-summary hook prints them
after the run so they are visible regardless of output capture.
"""

VERDICTS: list[str] = []


def record(line: str) -> None:
    VERDICTS.append(line)
