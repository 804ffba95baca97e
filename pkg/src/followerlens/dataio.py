"""Dataset ingestion: line-delimited JSON files under a dataset root.

Layout::

    root/
      accounts.jsonl    one AccountProfile per line (required)
      tweets.jsonl      one TweetRecord per line (optional)
      snapshots.jsonl   one SnapshotSeries per line (optional)
      friends.jsonl     {"id": ..., "friends": [...]} per line (optional)

Parsing is strict: a malformed line aborts the load with the file name,
line number and offending field. Writing is deterministic (records sorted
by account id, fixed key order) so identical datasets produce
byte-identical files.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .types import (
    AccountProfile,
    SnapshotSeries,
    TweetRecord,
    validate_profile,
    validate_series,
    validate_tweet,
)

ACCOUNTS_FILE = "accounts.jsonl"
TWEETS_FILE = "tweets.jsonl"
SNAPSHOTS_FILE = "snapshots.jsonl"
FRIENDS_FILE = "friends.jsonl"


class DatasetError(Exception):
    """Parse or invariant failure; message carries file/line context."""


@dataclass(frozen=True)
class Dataset:
    accounts: dict[str, AccountProfile]
    tweets: dict[str, tuple[TweetRecord, ...]] = field(default_factory=dict)
    snapshots: dict[str, SnapshotSeries] = field(default_factory=dict)
    friends: dict[str, frozenset[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationFinding:
    kind: str
    subject: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[ValidationFinding, ...]

    @property
    def clean(self) -> bool:
        return not self.findings


def _fail(path, lineno, msg):
    raise DatasetError(f"{os.path.basename(path)}:{lineno}: {msg}")


def _parse_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                _fail(path, lineno, f"invalid JSON: {e.msg}")
            if not isinstance(obj, dict):
                _fail(path, lineno, "expected a JSON object")
            yield lineno, obj


def _get(obj, key, types, path, lineno, optional=False):
    if key not in obj or obj[key] is None:
        if optional:
            return None
        _fail(path, lineno, f"missing field '{key}'")
    v = obj[key]
    if not isinstance(v, types) or (types is int and isinstance(v, bool)):
        _fail(path, lineno, f"field '{key}' has wrong type")
    return v


def _parse_account(obj, path, lineno) -> AccountProfile:
    p = AccountProfile(
        id=_get(obj, "id", str, path, lineno),
        created_at=_get(obj, "created_at", int, path, lineno),
        statuses_count=_get(obj, "statuses_count", int, path, lineno),
        followers_count=_get(obj, "followers_count", int, path, lineno),
        friends_count=_get(obj, "friends_count", int, path, lineno),
        bio=_get(obj, "bio", str, path, lineno, optional=True),
        bio_url=_get(obj, "bio_url", str, path, lineno, optional=True),
        reputation=_get(obj, "reputation", (int, float), path, lineno, optional=True),
        suspended=bool(_get(obj, "suspended", bool, path, lineno)),
        default_image=bool(_get(obj, "default_image", bool, path, lineno)),
        label=_get(obj, "label", str, path, lineno, optional=True),
    )
    res = validate_profile(p)
    if not res.ok:
        _fail(path, lineno, "invalid account: " + "; ".join(res.violations))
    return p


def _parse_tweet(obj, path, lineno) -> TweetRecord:
    t = TweetRecord(
        tweet_id=_get(obj, "tweet_id", str, path, lineno),
        author=_get(obj, "author", str, path, lineno),
        created_at=_get(obj, "created_at", int, path, lineno),
        text=_get(obj, "text", str, path, lineno),
        lang=_get(obj, "lang", str, path, lineno),
        is_retweet=bool(_get(obj, "is_retweet", bool, path, lineno)),
        retweeted_author=_get(obj, "retweeted_author", str, path, lineno, optional=True),
        mentions=tuple(_get(obj, "mentions", list, path, lineno)),
        hashtags=tuple(_get(obj, "hashtags", list, path, lineno)),
        urls=tuple(_get(obj, "urls", list, path, lineno)),
    )
    res = validate_tweet(t)
    if not res.ok:
        _fail(path, lineno, "invalid tweet: " + "; ".join(res.violations))
    return t


def _parse_series(obj, path, lineno) -> SnapshotSeries:
    target = _get(obj, "target", str, path, lineno)
    raw = _get(obj, "snapshots", list, path, lineno)
    snaps = []
    for entry in raw:
        if (not isinstance(entry, list) or len(entry) != 2
                or not isinstance(entry[0], int) or not isinstance(entry[1], list)):
            _fail(path, lineno, "snapshot entries must be [time, [ids...]]")
        snaps.append((entry[0], frozenset(entry[1])))
    s = SnapshotSeries(target=target, snapshots=tuple(snaps))
    res = validate_series(s)
    if not res.ok:
        _fail(path, lineno, "invalid snapshot series: " + "; ".join(res.violations))
    return s


def load_dataset(root: str) -> Dataset:
    """Strictly parse a dataset root. Raises DatasetError on any defect."""
    accounts_path = os.path.join(root, ACCOUNTS_FILE)
    if not os.path.exists(accounts_path):
        raise DatasetError(f"missing accounts file: {accounts_path}")

    accounts: dict[str, AccountProfile] = {}
    seen_line: dict[str, int] = {}
    for lineno, obj in _parse_lines(accounts_path):
        p = _parse_account(obj, accounts_path, lineno)
        if p.id in accounts:
            _fail(accounts_path, lineno,
                  f"duplicate account id '{p.id}' (first seen on line {seen_line[p.id]})")
        accounts[p.id] = p
        seen_line[p.id] = lineno

    tweets: dict[str, list[TweetRecord]] = {}
    tweets_path = os.path.join(root, TWEETS_FILE)
    if os.path.exists(tweets_path):
        for lineno, obj in _parse_lines(tweets_path):
            t = _parse_tweet(obj, tweets_path, lineno)
            tweets.setdefault(t.author, []).append(t)

    snapshots: dict[str, SnapshotSeries] = {}
    snap_line: dict[str, int] = {}
    snapshots_path = os.path.join(root, SNAPSHOTS_FILE)
    if os.path.exists(snapshots_path):
        for lineno, obj in _parse_lines(snapshots_path):
            s = _parse_series(obj, snapshots_path, lineno)
            if s.target in snapshots:
                _fail(snapshots_path, lineno,
                      f"duplicate snapshot target '{s.target}' "
                      f"(first seen on line {snap_line[s.target]})")
            snapshots[s.target] = s
            snap_line[s.target] = lineno

    friends: dict[str, frozenset[str]] = {}
    friends_path = os.path.join(root, FRIENDS_FILE)
    if os.path.exists(friends_path):
        for lineno, obj in _parse_lines(friends_path):
            aid = _get(obj, "id", str, friends_path, lineno)
            fl = _get(obj, "friends", list, friends_path, lineno)
            if aid in friends:
                _fail(friends_path, lineno, f"duplicate friends entry for '{aid}'")
            friends[aid] = frozenset(fl)

    return Dataset(
        accounts=accounts,
        tweets={a: tuple(ts) for a, ts in tweets.items()},
        snapshots=snapshots,
        friends=friends,
    )


def validate_dataset(d: Dataset, snapshot_gap_threshold: int = 2 * 3600) -> ValidationReport:
    """Cross-record consistency report; never mutates or raises.

    Findings: dangling references (tweet authors / snapshot targets not in
    accounts), external friend ids, accounts with no tweet corpus, and
    snapshot gaps larger than ``snapshot_gap_threshold`` seconds.
    """
    findings: list[ValidationFinding] = []
    for author in sorted(d.tweets):
        if author not in d.accounts:
            findings.append(ValidationFinding(
                "dangling-reference", author, "tweet author not in accounts"))
    for target in sorted(d.snapshots):
        if target not in d.accounts:
            findings.append(ValidationFinding(
                "dangling-reference", target, "snapshot target not in accounts"))
    for aid in sorted(d.friends):
        if aid not in d.accounts:
            findings.append(ValidationFinding(
                "dangling-reference", aid, "friends entry for unknown account"))
        externals = sorted(f for f in d.friends[aid] if f not in d.accounts)
        if externals:
            findings.append(ValidationFinding(
                "external-friends", aid,
                f"{len(externals)} friend id(s) without a profile"))
    for aid in sorted(d.accounts):
        if not d.tweets.get(aid):
            findings.append(ValidationFinding("no-corpus", aid, "account has no tweets"))
    for target in sorted(d.snapshots):
        times = d.snapshots[target].times()
        for a, b in zip(times, times[1:]):
            if b - a > snapshot_gap_threshold:
                findings.append(ValidationFinding(
                    "snapshot-gap", target, f"gap of {b - a}s starting at {a}"))
    return ValidationReport(tuple(findings))


def _account_json(p: AccountProfile) -> dict:
    return {
        "id": p.id,
        "created_at": p.created_at,
        "statuses_count": p.statuses_count,
        "followers_count": p.followers_count,
        "friends_count": p.friends_count,
        "bio": p.bio,
        "bio_url": p.bio_url,
        "reputation": p.reputation,
        "suspended": p.suspended,
        "default_image": p.default_image,
        "label": p.label,
    }


def _tweet_json(t: TweetRecord) -> dict:
    return {
        "tweet_id": t.tweet_id,
        "author": t.author,
        "created_at": t.created_at,
        "text": t.text,
        "lang": t.lang,
        "is_retweet": t.is_retweet,
        "retweeted_author": t.retweeted_author,
        "mentions": list(t.mentions),
        "hashtags": list(t.hashtags),
        "urls": list(t.urls),
    }


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_dataset(d: Dataset, root: str) -> None:
    """Write all four files deterministically; rejects invalid datasets."""
    for target, series in d.snapshots.items():
        res = validate_series(series)
        if not res.ok:
            raise DatasetError(f"snapshot series for '{target}': " + "; ".join(res.violations))
    for aid, p in d.accounts.items():
        res = validate_profile(p)
        if not res.ok:
            raise DatasetError(f"account '{aid}': " + "; ".join(res.violations))

    os.makedirs(root, exist_ok=True)
    with open(os.path.join(root, ACCOUNTS_FILE), "w", encoding="utf-8") as fh:
        for aid in sorted(d.accounts):
            fh.write(_dump(_account_json(d.accounts[aid])) + "\n")
    with open(os.path.join(root, TWEETS_FILE), "w", encoding="utf-8") as fh:
        for aid in sorted(d.tweets):
            for t in sorted(d.tweets[aid], key=lambda t: (t.created_at, t.tweet_id)):
                fh.write(_dump(_tweet_json(t)) + "\n")
    with open(os.path.join(root, SNAPSHOTS_FILE), "w", encoding="utf-8") as fh:
        for target in sorted(d.snapshots):
            series = d.snapshots[target]
            obj = {
                "target": target,
                "snapshots": [[t, sorted(ids)] for t, ids in series.snapshots],
            }
            fh.write(_dump(obj) + "\n")
    with open(os.path.join(root, FRIENDS_FILE), "w", encoding="utf-8") as fh:
        for aid in sorted(d.friends):
            fh.write(_dump({"id": aid, "friends": sorted(d.friends[aid])}) + "\n")
