"""Verification reports: YAML documents with a fixed field order."""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

VERDICTS = ("verified", "refuted", "inconclusive", "error")
EXIT_CODES = {"verified": 0, "refuted": 1, "inconclusive": 2, "error": 3}
FIELDS = ("task", "verdict", "summary", "certificates", "tower", "budgets", "timings", "message")


@dataclass
class Report:
    task: str
    verdict: str
    summary: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    tower: dict | None = None
    budgets: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    message: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def as_dict(self):
        return {k: _plain(getattr(self, k)) for k in FIELDS}

    def to_yaml(self) -> str:
        # non-ASCII is escaped: unicode line breaks (NEL, LS) do not survive plain output
        return yaml.safe_dump(self.as_dict(), sort_keys=False, default_flow_style=False, width=100)

    @classmethod
    def from_yaml(cls, text):
        data = yaml.safe_load(text)
        if not isinstance(data, dict) or "verdict" not in data:
            raise ValueError("not a report document")
        return cls(**{k: data.get(k, _DEFAULTS[k]) for k in FIELDS})

    def deterministic_view(self):
        """Everything except timings, for reproducibility comparisons."""
        d = self.as_dict()
        d.pop("timings")
        _strip_runtime(d)
        return d

    def to_text(self) -> str:
        lines = [f"task: {self.task}", f"verdict: {self.verdict}"]
        for k, v in self.summary.items():
            lines.append(f"  {k}: {v}")
        if self.message:
            lines.append(f"message: {self.message}")
        for k, v in self.timings.items():
            lines.append(f"time {k}: {v}")
        return "\n".join(lines) + "\n"


_DEFAULTS = {"task": "", "verdict": "error", "summary": {}, "certificates": [], "tower": None,
             "budgets": {}, "timings": {}, "message": ""}


def _strip_runtime(d):
    if isinstance(d, dict):
        for k in [k for k in d if k in ("runtime_s", "timings")]:
            d.pop(k)
        for v in d.values():
            _strip_runtime(v)
    elif isinstance(d, list):
        for v in d:
            _strip_runtime(v)


def _plain(v):
    """Only YAML-safe scalars, lists and string-keyed dicts."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)


def finalize(task, verdict, checks=(), **fields):
    """Build a report; a 'verified' verdict survives only if every check
    re-runs successfully right now."""
    if verdict == "verified":
        for check in checks:
            if not check():
                verdict = "error"
                fields["message"] = "a certificate failed to re-verify during serialization"
                break
    return Report(task, verdict, **fields)
