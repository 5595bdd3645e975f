"""Condition reports produced by the partition checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class ConditionResult:
    number: int
    name: str
    status: str
    max_deviation: float = 0.0
    witness: tuple[float, ...] | None = None
    values: tuple[float, ...] = ()
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_line(self) -> str:
        witness = "-" if self.witness is None else "(" + ", ".join(f"{w:.17g}" for w in self.witness) + ")"
        line = f"{self.number} {self.name} {self.status} max_dev={self.max_deviation:.17g} witness={witness}"
        if self.values:
            line += " values=(" + ", ".join(f"{v:.17g}" for v in self.values) + ")"
        if self.detail:
            line += f" # {self.detail}"
        return line


@dataclass(frozen=True)
class ConditionReport:
    """One entry per checked condition; ``definition`` is ``"1d"`` or ``"nd"``."""

    definition: str
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def failures(self) -> list[int]:
        return [r.number for r in self.results if r.status == FAIL]

    def __getitem__(self, key: int | str) -> ConditionResult:
        for r in self.results:
            if r.number == key or r.name == key:
                return r
        raise KeyError(key)

    def __len__(self) -> int:
        return len(self.results)

    def __iter__(self):
        return iter(self.results)

    @property
    def max_deviation(self) -> float:
        return max((r.max_deviation for r in self.results), default=0.0)

    def to_text(self) -> str:
        head = f"# definition={self.definition} status={'pass' if self.passed else 'fail'}"
        return "\n".join([head] + [r.to_line() for r in self.results]) + "\n"


@dataclass
class Check:
    """Running maximum of a deviation, with the point where it was reached.

    Chunks of samples are fed through :meth:`update`; partial checks from
    independent chunks combine with :meth:`merge` (max is associative).
    """

    number: int
    name: str
    tolerance: float
    max_deviation: float = 0.0
    witness: tuple[float, ...] | None = None
    values: tuple[float, ...] = ()
    skipped: bool = False
    detail: str = ""
    _seen: bool = field(default=False, repr=False)

    def update(self, deviation, points, values=()) -> None:
        deviation = np.asarray(deviation, dtype=float).ravel()
        if deviation.size == 0:
            return
        self._seen = True
        # nan deviations count as infinitely bad
        dev = np.maximum(np.where(np.isnan(deviation), np.inf, deviation), 0.0)
        i = int(np.argmax(dev))
        if self.witness is None or dev[i] > self.max_deviation:
            self.max_deviation = float(dev[i])
            pts = np.asarray(points, dtype=float)
            pts = pts.reshape(deviation.size, -1)
            self.witness = tuple(float(v) for v in pts[i])
            self.values = tuple(float(np.asarray(v, dtype=float).ravel()[i]) for v in values)

    def merge(self, other: "Check") -> "Check":
        best = self if self.max_deviation >= other.max_deviation else other
        return Check(
            self.number,
            self.name,
            self.tolerance,
            best.max_deviation,
            best.witness,
            best.values,
            self.skipped and other.skipped,
            self.detail or other.detail,
            self._seen or other._seen,
        )

    def result(self) -> ConditionResult:
        if self.skipped:
            return ConditionResult(self.number, self.name, SKIPPED, detail=self.detail)
        failed = self.max_deviation > self.tolerance
        return ConditionResult(
            self.number,
            self.name,
            FAIL if failed else PASS,
            self.max_deviation,
            self.witness if failed else None,
            self.values if failed else (),
            self.detail,
        )
