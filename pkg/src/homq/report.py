"""Verification reports: named checks with pass/fail/skipped status and
structured witnesses, ordered deterministically so serialized reports are
stable byte-for-byte.
"""

import json
import time


class Check:
    __slots__ = ("name", "status", "witness", "degree", "wall_time")

    def __init__(self, name, status, witness=None, degree=None, wall_time=None):
        self.name = name
        self.status = status
        self.witness = witness
        self.degree = degree
        self.wall_time = wall_time

    def to_json(self, timings=False):
        out = {"name": self.name, "status": self.status, "degree": self.degree,
               "wall_time": round(self.wall_time, 6)
               if (timings and self.wall_time is not None) else None}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __repr__(self):
        return f"<Check {self.name}: {self.status}>"


class Report:
    def __init__(self, title=""):
        self.title = title
        self.checks = []

    def add(self, name, status, witness=None, degree=None, wall_time=None):
        self.checks.append(Check(name, status, witness, degree, wall_time))
        return self

    def extend(self, other):
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self):
        return all(c.status != "fail" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == "fail"]

    def _sorted(self):
        return sorted(self.checks,
                      key=lambda c: (c.name,
                                     json.dumps(c.witness, sort_keys=True)
                                     if c.witness is not None else ""))

    def to_json(self, timings=False):
        out = {"checks": [c.to_json(timings) for c in self._sorted()],
               "passed": self.passed}
        if self.title:
            out["title"] = self.title
        return out

    def lines(self):
        out = []
        for c in self._sorted():
            deg = f" @deg {c.degree}" if c.degree is not None else ""
            out.append(f"[{c.status.upper():4s}] {c.name}{deg}")
        return out

    def __repr__(self):
        n = len(self.checks)
        bad = len(self.failures())
        state = "pass" if self.passed else f"{bad} failing"
        return f"<Report {self.title or 'checks'}: {n} checks, {state}>"


class timed:
    """Context manager feeding wall time into a report entry."""

    def __init__(self):
        self.seconds = None

    def __enter__(self):
        self._t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.seconds = time.monotonic() - self._t0
        return False
