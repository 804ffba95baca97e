"""Follower-churn analytics over snapshot series.

Covers follow/unfollow event extraction, per-bucket unfollow counts and
their normalized entropy, Pearson correlation, the continuous power-law
MLE, dip detection and the aggregate anatomy report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset
from .types import SnapshotSeries

DAY = 86400


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class FollowEvents:
    time: int
    unfollowed: frozenset[str]
    followed: frozenset[str]
    refollowed: frozenset[str]


@dataclass(frozen=True)
class UnfollowCountSeries:
    follower: str
    bucket: int
    counts: tuple[int, ...]


def diff_snapshots(prev: frozenset[str], next_: frozenset[str], time: int = 0,
                   history: frozenset[str] = frozenset()) -> FollowEvents:
    """Set-difference between consecutive snapshots.

    ``history`` is the caller-maintained set of ids ever seen as followers
    before this transition; new followers already in it are refollows.
    """
    unfollowed = frozenset(prev - next_)
    followed = frozenset(next_ - prev)
    return FollowEvents(
        time=time,
        unfollowed=unfollowed,
        followed=followed,
        refollowed=frozenset(followed & history),
    )


def iter_events(series: SnapshotSeries):
    """Yield FollowEvents for every consecutive snapshot pair."""
    history: set[str] = set(series.snapshots[0][1])
    prev = series.snapshots[0][1]
    for t, cur in series.snapshots[1:]:
        ev = diff_snapshots(prev, cur, time=t, history=frozenset(history))
        history |= cur
        prev = cur
        yield ev


def _bucket_origin(series: SnapshotSeries, bucket: int) -> int:
    # bucket boundaries sit at multiples of the bucket duration (UTC
    # calendar days for the default), not at the first snapshot time
    return (series.snapshots[0][0] // bucket) * bucket


def _bucket_count(series: SnapshotSeries, bucket: int) -> int:
    origin = _bucket_origin(series, bucket)
    last = series.snapshots[-1][0]
    return max(1, (last - origin) // bucket + 1)


def unfollow_counts(series: SnapshotSeries, follower: str, bucket: int = DAY) -> UnfollowCountSeries:
    """Per-bucket count of this follower's present-to-absent transitions.

    Buckets span the series from first to last snapshot time; bucket 0
    starts at the first snapshot time. A transition is timed at the
    snapshot where the follower is first absent.
    """
    present_ever = any(follower in ids for _, ids in series.snapshots)
    if not present_ever:
        raise AnalysisError(f"'{follower}' is not a follower in series of '{series.target}'")
    origin = _bucket_origin(series, bucket)
    n_buckets = _bucket_count(series, bucket)
    counts = [0] * n_buckets
    prev_in = follower in series.snapshots[0][1]
    for t, ids in series.snapshots[1:]:
        now_in = follower in ids
        if prev_in and not now_in:
            counts[(t - origin) // bucket] += 1
        prev_in = now_in
    return UnfollowCountSeries(follower=follower, bucket=bucket, counts=tuple(counts))


def aggregate_unfollow_counts(series: SnapshotSeries, bucket: int = DAY) -> tuple[int, ...]:
    """Total unfollow events (any follower leaving) per bucket."""
    origin = _bucket_origin(series, bucket)
    counts = [0] * _bucket_count(series, bucket)
    prev = series.snapshots[0][1]
    for t, cur in series.snapshots[1:]:
        lost = len(prev - cur)
        if lost:
            counts[(t - origin) // bucket] += lost
        prev = cur
    return tuple(counts)


def entropy_of_counts(counts) -> float:
    """Normalized Shannon entropy of a count vector, in [0, 1].

    Normalizer is log(T) (the maximum attainable entropy over T buckets),
    so the uniform vector scores exactly 1.0 and a single-bucket vector
    exactly 0.0. Zero totals and T = 1 score 0.0 by convention. Invariant
    under uniform scaling of the counts.
    """
    counts = list(counts)
    t = len(counts)
    if t < 1:
        raise AnalysisError("empty count series")
    if any(c < 0 for c in counts):
        raise AnalysisError("negative count")
    total = sum(counts)
    if t == 1 or total == 0:
        return 0.0
    nonzero = [c for c in counts if c > 0]
    if len(nonzero) == 1:
        return 0.0
    # boundary cases are exact by construction, not by floating luck
    if len(nonzero) == t and all(c == counts[0] for c in counts):
        return 1.0
    h = -math.fsum(p * math.log(p) for p in (c / total for c in nonzero))
    return min(max(h / math.log(t), 0.0), 1.0)


def unfollow_entropy(counts: UnfollowCountSeries) -> float:
    return entropy_of_counts(counts.counts)


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise AnalysisError("pearson needs two equal-length series of length >= 2")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise AnalysisError("undefined correlation: zero variance")
    return float(np.corrcoef(x, y)[0, 1])


def fit_power_law(values, xmin: float | None = None) -> tuple[float, float]:
    """Continuous maximum-likelihood power-law fit.

    Returns (alpha, sigma) with alpha = 1 + n / sum(ln(x_i / xmin)) over
    the n values >= xmin, and sigma = (alpha - 1) / sqrt(n). Defaults xmin
    to the smallest positive value.
    """
    vals = np.asarray([v for v in values if v > 0], dtype=np.float64)
    if xmin is None:
        if len(vals) == 0:
            raise AnalysisError("no positive values")
        xmin = float(vals.min())
    if xmin <= 0:
        raise AnalysisError("xmin must be positive")
    tail = vals[vals >= xmin]
    n = len(tail)
    if n < 2:
        raise AnalysisError("fewer than 2 values >= xmin")
    log_sum = float(np.sum(np.log(tail / xmin)))
    if log_sum == 0.0:
        raise AnalysisError("degenerate sample: all values equal xmin")
    alpha = 1.0 + n / log_sum
    sigma = (alpha - 1.0) / math.sqrt(n)
    return alpha, sigma


@dataclass(frozen=True)
class Dip:
    start_time: int
    depth: int
    recovery_time: int | None


@dataclass(frozen=True)
class DipReport:
    target: str
    dips: tuple[Dip, ...]
    refollow_ratio: float
    count_hour_pcc: float | None

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "dips": [
                {"start_time": d.start_time, "depth": d.depth,
                 "recovery_time": d.recovery_time}
                for d in self.dips
            ],
            "refollow_ratio": self.refollow_ratio,
            "count_hour_pcc": self.count_hour_pcc,
        }


def fluctuation_report(series: SnapshotSeries) -> DipReport:
    """Dips in follower count, refollow ratio and count-vs-hour PCC.

    A dip is any strict decrease between consecutive snapshots; it
    recovers at the first later snapshot whose count reaches the pre-dip
    level. The refollow ratio is |gained ids previously seen| / |all ids
    gained after the first snapshot| (0 when nothing was gained).
    """
    if len(series.snapshots) < 2:
        raise AnalysisError("need at least 2 snapshots")
    counts = [len(ids) for _, ids in series.snapshots]
    times = series.times()

    dips: list[Dip] = []
    for i in range(1, len(counts)):
        if counts[i] < counts[i - 1]:
            recovery = None
            for j in range(i + 1, len(counts)):
                if counts[j] >= counts[i - 1]:
                    recovery = times[j]
                    break
            dips.append(Dip(start_time=times[i], depth=counts[i - 1] - counts[i],
                            recovery_time=recovery))

    gained = 0
    regained = 0
    for ev in iter_events(series):
        gained += len(ev.followed)
        regained += len(ev.refollowed)
    refollow_ratio = regained / gained if gained else 0.0

    hours = [(t // 3600) % 24 for t in times]
    try:
        pcc = pearson(counts, hours)
    except AnalysisError:
        pcc = None
    return DipReport(target=series.target, dips=tuple(dips),
                     refollow_ratio=refollow_ratio, count_hour_pcc=pcc)


def cdf_table(values) -> list[tuple[float, float]]:
    """Empirical CDF as (value, cumulative fraction) rows, ascending."""
    vals = sorted(values)
    n = len(vals)
    if n == 0:
        return []
    out = []
    for i, v in enumerate(vals, start=1):
        if i == n or vals[i] != v:
            out.append((float(v), i / n))
    return out


# Reported values from the original market study, carried in report
# headers for side-by-side comparison only; nothing asserts against them.
REFERENCE_VALUES = {
    "power_law_alpha": 1.8209,
    "power_law_sigma": 0.029,
    "pct_followers_reputation_below_20": 0.90,
    "pct_tweeting_within_200_days": 0.26,
    "pct_under_half_original_tweets": 0.38,
    "pct_spanish_tweeters": 0.52,
}


@dataclass(frozen=True)
class AnatomyReport:
    distributions: dict[str, list[tuple[float, float]]]
    counts: dict[str, int]
    power_law: tuple[float, float] | None
    dip_reports: dict[str, DipReport] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "references": REFERENCE_VALUES,
            "counts": self.counts,
            "power_law": (
                {"alpha": self.power_law[0], "sigma": self.power_law[1]}
                if self.power_law else None
            ),
            "distributions": {
                name: [{"value": v, "cum_fraction": f} for v, f in rows]
                for name, rows in sorted(self.distributions.items())
            },
            "dip_reports": {t: r.to_json() for t, r in sorted(self.dip_reports.items())},
        }


def _lang_sets(d: Dataset) -> dict[str, frozenset[str]]:
    return {aid: frozenset(t.lang for t in ts) for aid, ts in d.tweets.items()}


def anatomy_report(d: Dataset, targets: list[str] | None = None,
                   now: int | None = None, bucket: int = DAY) -> AnatomyReport:
    """Aggregate distributions over the whole dataset.

    ``targets`` restricts the per-target dip reports and per-follower
    entropy distribution; defaults to every account with a snapshot
    series. ``now`` anchors days-since-last-tweet (defaults to the latest
    timestamp seen in the dataset).
    """
    if targets is None:
        targets = sorted(d.snapshots)
    if now is None:
        stamps = [t.created_at for ts in d.tweets.values() for t in ts]
        stamps += [s for series in d.snapshots.values() for s in series.times()]
        now = max(stamps, default=0)

    lang_sets = _lang_sets(d)
    followers_of: dict[str, set[str]] = {}
    for aid, fr in d.friends.items():
        for f in fr:
            followers_of.setdefault(f, set()).add(aid)

    days_since_last = []
    retweet_fraction = []
    reputation = []
    ff_ratio = []
    langs_per_account = []
    overlap_friends = []
    overlap_followers = []
    for aid, p in d.accounts.items():
        ts = d.tweets.get(aid, ())
        if ts:
            days_since_last.append((now - max(t.created_at for t in ts)) / DAY)
            retweet_fraction.append(sum(t.is_retweet for t in ts) / len(ts))
            langs_per_account.append(len(lang_sets[aid]))
        if p.reputation is not None:
            reputation.append(p.reputation)
        if p.friends_count > 0:
            ff_ratio.append(p.followers_count / p.friends_count)
        user_langs = lang_sets.get(aid, frozenset())
        if user_langs:
            fr_sets = [lang_sets[f] for f in d.friends.get(aid, frozenset()) if f in lang_sets]
            if fr_sets:
                overlap_friends.append(
                    sum(1 for s in fr_sets if s & user_langs) / len(fr_sets))
            fo_sets = [lang_sets[f] for f in followers_of.get(aid, set()) if f in lang_sets]
            if fo_sets:
                overlap_followers.append(
                    sum(1 for s in fo_sets if s & user_langs) / len(fo_sets))

    lang_counter: dict[str, int] = {}
    for ts in d.tweets.values():
        for t in ts:
            lang_counter[t.lang] = lang_counter.get(t.lang, 0) + 1

    follower_entropies = []
    dip_reports = {}
    for target in targets:
        series = d.snapshots.get(target)
        if series is None:
            continue
        if len(series.snapshots) >= 2:
            dip_reports[target] = fluctuation_report(series)
        ever = set()
        for _, ids in series.snapshots:
            ever |= ids
        for follower in sorted(ever):
            ucs = unfollow_counts(series, follower, bucket=bucket)
            follower_entropies.append(unfollow_entropy(ucs))

    try:
        pl = fit_power_law([r for r in ff_ratio if r > 0])
    except AnalysisError:
        pl = None

    distributions = {
        "days_since_last_tweet": cdf_table(days_since_last),
        "retweet_fraction": cdf_table(retweet_fraction),
        "reputation": cdf_table(reputation),
        "follower_friend_ratio": cdf_table(ff_ratio),
        "languages_per_account": cdf_table(langs_per_account),
        "language_overlap_friends": cdf_table(overlap_friends),
        "language_overlap_followers": cdf_table(overlap_followers),
        "unfollow_entropy": cdf_table(follower_entropies),
    }
    counts = {
        "accounts": len(d.accounts),
        "accounts_with_tweets": len(d.tweets),
        "suspended": sum(p.suspended for p in d.accounts.values()),
        "default_image": sum(p.default_image for p in d.accounts.values()),
        "missing_bio": sum(1 for p in d.accounts.values() if not p.bio),
    }
    counts.update({f"tweets_lang_{k}": v for k, v in sorted(lang_counter.items())})
    return AnatomyReport(distributions=distributions, counts=counts,
                         power_law=pl, dip_reports=dip_reports)
