"""Validation reports and machine-readable certificates.

A Report is an ordered list of (key, status, witness) entries; a Certificate
wraps a report with tool metadata and renders to a canonical sorted-key text
form, so byte-identical inputs yield byte-identical certificates.
"""

from __future__ import annotations

PASS = "pass"
FAIL = "fail"
INFO = "info"
NOT_CHECKED = "not-checked"


class Entry:
    __slots__ = ("key", "status", "witness")

    def __init__(self, key: str, status: str, witness: str = ""):
        self.key = key
        self.status = status
        self.witness = witness

    def __repr__(self):
        w = " (%s)" % self.witness if self.witness else ""
        return "%s: %s%s" % (self.key, self.status, w)


class Report:
    def __init__(self):
        self.entries = []

    def add(self, key: str, status: str, witness: str = ""):
        self.entries.append(Entry(key, status, witness))

    def ok(self, key: str, witness: str = ""):
        self.add(key, PASS, witness)

    def fail(self, key: str, witness: str = ""):
        self.add(key, FAIL, witness)

    def info(self, key: str, witness: str = ""):
        self.add(key, INFO, witness)

    def not_checked(self, key: str, witness: str = ""):
        self.add(key, NOT_CHECKED, witness)

    def merge(self, other: "Report", prefix: str = ""):
        for e in other.entries:
            key = prefix + e.key if prefix else e.key
            self.entries.append(Entry(key, e.status, e.witness))

    def has_failures(self, prefix: str = "") -> bool:
        return any(e.status == FAIL and e.key.startswith(prefix) for e in self.entries)

    @property
    def ok_all(self) -> bool:
        return not self.has_failures()

    def failures(self):
        return [e for e in self.entries if e.status == FAIL]

    def summary(self) -> str:
        n_fail = len(self.failures())
        n = len(self.entries)
        return "%d checks, %d failed" % (n, n_fail)

    def __repr__(self):
        return "Report(%s)" % self.summary()


TOOL_VERSION = "0.1.0"


class Certificate:
    """Flat key/value record, rendered with lexicographically sorted keys."""

    def __init__(self, command: str, digest: str = "", semantics: str = ""):
        self.fields = {
            "meta.tool": "rclkit",
            "meta.version": TOOL_VERSION,
            "meta.command": command,
        }
        if digest:
            self.fields["meta.input-digest"] = digest
        if semantics:
            self.fields["meta.r3-semantics"] = semantics
        self._unchecked = []

    def set(self, key: str, value: str):
        self.fields[key] = str(value)

    def add_report(self, rep: Report, prefix: str = "check."):
        for e in rep.entries:
            self.fields[prefix + e.key + ".status"] = e.status
            if e.witness:
                self.fields[prefix + e.key + ".witness"] = e.witness
            if e.status == NOT_CHECKED:
                self._unchecked.append(prefix + e.key)

    def finalize(self, rep: Report):
        self.add_report(rep)
        self.fields["result.failed-checks"] = str(len(rep.failures()))
        self.fields["result.verdict"] = PASS if rep.ok_all else FAIL
        if self._unchecked:
            self.fields["result.unchecked"] = ",".join(sorted(self._unchecked))

    @property
    def passed(self) -> bool:
        return self.fields.get("result.verdict") == PASS

    def render(self) -> str:
        lines = []
        for key in sorted(self.fields):
            value = self.fields[key].replace("\n", " ")
            lines.append("%s = %s" % (key, value))
        return "\n".join(lines) + "\n"

    def render_text(self) -> str:
        """Human summary: failures and verdict first, then the detail."""
        out = []
        verdict = self.fields.get("result.verdict", "?")
        out.append("[%s] %s" % (verdict.upper(), self.fields.get("meta.command", "")))
        for key in sorted(self.fields):
            if key.endswith(".status") and self.fields[key] == FAIL:
                wkey = key[:-len(".status")] + ".witness"
                w = self.fields.get(wkey, "")
                out.append("  FAIL %s%s" % (key[:-len(".status")], (": " + w) if w else ""))
        out.append("  (%s checks recorded)" % sum(1 for k in self.fields if k.endswith(".status")))
        return "\n".join(out) + "\n"
