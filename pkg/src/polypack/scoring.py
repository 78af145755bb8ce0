"""Squared-ratio contest scoring and leaderboard aggregation.

A team's score on an instance is (team best / overall best)^2, kept as an
exact rational so ranking never suffers float ordering artifacts.  Ties on
the total are broken by the earliest moment a team's running total first
reached its final value, all instance scores being computed against the
final per-instance bests.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Iterable, Optional


class ValueExceedsBest(ValueError):
    """team_value > best_value; the caller must recompute the best first."""


class UnknownInstance(ValueError):
    """A record references an instance that is not part of the corpus."""


def instance_score(team_value: int, best_value: int) -> Fraction:
    """(team/best)^2 as an exact rational; 0 when nobody packed anything."""
    if team_value < 0 or best_value < 0:
        raise ValueError("values must be non-negative")
    if team_value > best_value:
        raise ValueExceedsBest(f"{team_value} > best {best_value}")
    if best_value == 0:
        return Fraction(0)
    return Fraction(team_value * team_value, best_value * best_value)


@dataclass(frozen=True)
class SubmissionRecord:
    team: str
    instance: str
    value: int
    timestamp: datetime

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("record value must be non-negative")


@dataclass(frozen=True)
class TeamStanding:
    team: str
    total: Fraction
    achieved_at: datetime
    scores: dict  # instance -> Fraction


@dataclass(frozen=True)
class Leaderboard:
    instances: tuple[str, ...]
    best_values: dict  # instance -> int
    standings: tuple[TeamStanding, ...]  # ranked best first

    def ranking(self) -> list[str]:
        return [s.team for s in self.standings]

    def to_json_obj(self) -> dict:
        return {
            "type": "cgshop2024_leaderboard",
            "instances": list(self.instances),
            "best_values": {k: self.best_values[k] for k in self.instances},
            "standings": [
                {
                    "rank": i + 1,
                    "team": s.team,
                    "total": float(s.total),
                    "total_display": f"{float(s.total):.2f}",
                    "achieved_at": s.achieved_at.isoformat(),
                    "scores": {k: float(v) for k, v in sorted(s.scores.items())},
                }
                for i, s in enumerate(self.standings)
            ],
        }


def build_leaderboard(records: Iterable[SubmissionRecord],
                      instances: Iterable[str]) -> Leaderboard:
    instances = tuple(instances)
    known = set(instances)
    records = list(records)
    for rec in records:
        if rec.instance not in known:
            raise UnknownInstance(rec.instance)

    best: dict[str, int] = {name: 0 for name in instances}
    team_best: dict[str, dict[str, int]] = {}
    for rec in records:
        best[rec.instance] = max(best[rec.instance], rec.value)
        per = team_best.setdefault(rec.team, {})
        per[rec.instance] = max(per.get(rec.instance, 0), rec.value)

    standings = []
    for team in sorted(team_best):
        per = team_best[team]
        scores = {name: instance_score(per.get(name, 0), best[name])
                  for name in instances}
        total = sum(scores.values(), Fraction(0))
        standings.append(TeamStanding(
            team, total, _achieved_at(records, team, best, total), scores))
    standings.sort(key=lambda s: (-s.total, s.achieved_at, s.team))
    return Leaderboard(instances, best, tuple(standings))


def _achieved_at(records, team, best, final_total: Fraction) -> datetime:
    """Earliest time the team's running total (scored against the final
    bests) first equals its final total."""
    own = sorted((r for r in records if r.team == team),
                 key=lambda r: (r.timestamp, r.instance, r.value))
    if final_total == 0:
        return own[0].timestamp
    running: dict[str, int] = {}
    total = Fraction(0)
    for rec in own:
        prev = running.get(rec.instance, 0)
        if rec.value > prev:
            running[rec.instance] = rec.value
            total += instance_score(rec.value, best[rec.instance]) \
                - instance_score(prev, best[rec.instance])
        if total == final_total:
            return rec.timestamp
    return own[-1].timestamp


def read_records_csv(data) -> list[SubmissionRecord]:
    """CSV columns: team, instance, value, iso8601_timestamp (header row
    optional)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    out = []
    for row in csv.reader(io.StringIO(data)):
        if not row or row[0].strip().lower() == "team":
            continue
        if len(row) != 4:
            raise ValueError(f"expected 4 columns, got {row!r}")
        team, instance, value, stamp = (c.strip() for c in row)
        out.append(SubmissionRecord(team, instance, int(value),
                                    datetime.fromisoformat(stamp)))
    return out


def render_table(board: Leaderboard) -> str:
    lines = [f"{'rank':>4}  {'team':<24} {'score':>8}  achieved"]
    for i, s in enumerate(board.standings):
        lines.append(f"{i + 1:>4}  {s.team:<24} {float(s.total):>8.2f}  "
                     f"{s.achieved_at.isoformat()}")
    return "\n".join(lines)
