"""Report plumbing shared by the verification sweeps."""

from dataclasses import dataclass


@dataclass
class CheckRow:
    check: str
    passed: bool
    bound: object = None
    observed: object = None
    witness: object = None
    note: str = ""

    def to_json(self, render):
        return {
            "check": self.check,
            "pass": bool(self.passed),
            "bound": render(self.bound),
            "observed_max": render(self.observed),
            "witness_tuple": render(self.witness),
            "note": self.note,
        }
