"""Extraction of the 18 detection features (sets A-D).

Set A: profile (bio, bio URL, post count, reputation).
Set B: network (follower/friends ratio, follower count).
Set C: content (per-tweet hashtag/spam-word/length/language/retweet/
mention statistics).
Set D: behaviour (unfollow entropy, engagement with friends, language
overlap with friends, recency and rate of posting).

Slots that cannot be computed for an account (no tweets, no snapshot
series, no friends with corpora) stay absent in the vector mask instead
of silently becoming zero.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from importlib import resources

from .churn import DAY, aggregate_unfollow_counts, entropy_of_counts
from .dataio import Dataset
from .types import (
    ALL_SETS,
    FEATURE_NAMES,
    N_FEATURES,
    SET_SLOTS,
    AccountProfile,
    FeatureVector,
    TweetRecord,
)

_TOKEN_RE = re.compile(r"[^0-9a-z]+")

RATIO_CAP = 1e6


class FeatureError(ValueError):
    pass


def default_spam_words() -> frozenset[str]:
    text = resources.files("followerlens.data").joinpath("spam_words.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_spam_words(path: str) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh if line.strip())


@dataclass(frozen=True)
class FeatureConfig:
    spam_word_list: frozenset[str] = field(default_factory=frozenset)
    default_reputation: float = 0.0
    now: int = 0
    bucket: int = DAY
    ratio_cap: float = RATIO_CAP


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN_RE.split(text.lower()) if t]


def count_spam_words(text: str, spam_words: frozenset[str]) -> int:
    """Whole-token spam-list hits; multi-word entries match as
    contiguous token sequences (non-overlapping, longest-first)."""
    tokens = tokenize(text)
    phrases = sorted((tuple(w.split()) for w in spam_words), key=len, reverse=True)
    hits = 0
    i = 0
    while i < len(tokens):
        matched = False
        for ph in phrases:
            k = len(ph)
            if tuple(tokens[i:i + k]) == ph:
                hits += 1
                i += k
                matched = True
                break
        if not matched:
            i += 1
    return hits


def profile_features(p: AccountProfile, cfg: FeatureConfig) -> list[float]:
    """Set A. An empty-string bio counts as absent."""
    rep = p.reputation if p.reputation is not None else cfg.default_reputation
    return [
        1.0 if p.bio else 0.0,
        1.0 if p.bio_url else 0.0,
        float(p.statuses_count),
        float(rep),
    ]


def network_features(p: AccountProfile, cfg: FeatureConfig) -> list[float]:
    """Set B. Ratio is 0 for 0/0 and capped when friends_count is 0."""
    if p.friends_count == 0:
        ratio = 0.0 if p.followers_count == 0 else cfg.ratio_cap
    else:
        ratio = p.followers_count / p.friends_count
    return [ratio, float(p.followers_count)]


def content_features(tweets: tuple[TweetRecord, ...], cfg: FeatureConfig) -> list[float] | None:
    """Set C, or None when the corpus is empty."""
    n = len(tweets)
    if n == 0:
        return None
    hashtags = sum(len(t.hashtags) for t in tweets)
    spam = sum(count_spam_words(t.text, cfg.spam_word_list) for t in tweets)
    length = sum(len(t.text) for t in tweets)
    langs = len({t.lang for t in tweets})
    retweets = sum(t.is_retweet for t in tweets)
    mentions = sum(len(t.mentions) for t in tweets)
    return [hashtags / n, spam / n, length / n, float(langs), retweets / n, mentions / n]


def retweet_engagement(tweets, friends: frozenset[str]) -> float:
    """Share of retweets aimed at friends times the fraction of friends
    ever retweeted. 0 when the user has no retweets or no friends."""
    rts = [t.retweeted_author for t in tweets if t.is_retweet]
    if not rts or not friends:
        return 0.0
    to_friends = sum(1 for a in rts if a in friends)
    friends_hit = len({a for a in rts if a in friends})
    return (to_friends / len(rts)) * (friends_hit / len(friends))


def mention_engagement(tweets, friends: frozenset[str]) -> float:
    """Same two-factor form as retweet_engagement, over @mentions."""
    ments = [m for t in tweets for m in t.mentions]
    if not ments or not friends:
        return 0.0
    to_friends = sum(1 for m in ments if m in friends)
    friends_hit = len({m for m in ments if m in friends})
    return (to_friends / len(ments)) * (friends_hit / len(friends))


def language_overlap(user_langs: frozenset[str], neighbor_lang_sets) -> float:
    """Fraction of neighbors sharing at least one language with the user."""
    neighbor_lang_sets = list(neighbor_lang_sets)
    if not user_langs:
        raise FeatureError("user has no languages")
    if not neighbor_lang_sets:
        raise FeatureError("no neighbors")
    shared = sum(1 for s in neighbor_lang_sets if s & user_langs)
    return shared / len(neighbor_lang_sets)


def behaviour_features(account: str, d: Dataset, cfg: FeatureConfig) -> list[float | None]:
    """Set D; individual slots may be None when not computable."""
    if account not in d.accounts:
        raise FeatureError(f"unknown account '{account}'")
    p = d.accounts[account]
    tweets = d.tweets.get(account, ())
    friends = d.friends.get(account, frozenset())

    series = d.snapshots.get(account)
    if series is None:
        entropy = None
    else:
        entropy = entropy_of_counts(aggregate_unfollow_counts(series, bucket=cfg.bucket))

    rt_eng = retweet_engagement(tweets, friends)
    at_eng = mention_engagement(tweets, friends)

    user_langs = frozenset(t.lang for t in tweets)
    friend_lang_sets = [
        frozenset(t.lang for t in d.tweets[f])
        for f in sorted(friends)
        if d.tweets.get(f)
    ]
    if user_langs and friend_lang_sets:
        overlap = language_overlap(user_langs, friend_lang_sets)
    else:
        overlap = None

    if tweets:
        since_last = float(cfg.now - max(t.created_at for t in tweets))
    else:
        since_last = None

    age_days = max((cfg.now - p.created_at) / DAY, 1.0)
    per_day = p.statuses_count / age_days

    return [entropy, rt_eng, at_eng, overlap, since_last, per_day]


def assemble_feature_vector(account: str, d: Dataset, cfg: FeatureConfig,
                            sets: str = ALL_SETS) -> FeatureVector:
    """Build the canonical 18-slot vector for the requested sets."""
    if account not in d.accounts:
        raise FeatureError(f"unknown account '{account}'")
    sets = "".join(s for s in ALL_SETS if s in sets.upper())
    if not sets:
        raise FeatureError("no feature sets requested")
    if "C" in sets and not cfg.spam_word_list:
        raise FeatureError("spam word list required for set C")
    p = d.accounts[account]
    values: list[float | None] = [None] * N_FEATURES
    if "A" in sets:
        values[SET_SLOTS["A"]] = profile_features(p, cfg)
    if "B" in sets:
        values[SET_SLOTS["B"]] = network_features(p, cfg)
    if "C" in sets:
        c = content_features(d.tweets.get(account, ()), cfg)
        if c is not None:
            values[SET_SLOTS["C"]] = c
    if "D" in sets:
        values[SET_SLOTS["D"]] = behaviour_features(account, d, cfg)
    return FeatureVector(account=account, values=tuple(values), sets=frozenset(sets))


def extract_all(d: Dataset, cfg: FeatureConfig, sets: str = ALL_SETS) -> list[FeatureVector]:
    return [assemble_feature_vector(aid, d, cfg, sets) for aid in sorted(d.accounts)]


CSV_HEADER = ["id", "label", "mask", *FEATURE_NAMES]


def write_features_csv(path: str, d: Dataset, vectors: list[FeatureVector]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for v in vectors:
            label = d.accounts[v.account].label or ""
            row = [v.account, label, v.mask_string()]
            row += ["" if x is None else repr(float(x)) for x in v.values]
            w.writerow(row)


def read_features_csv(path: str) -> list[tuple[str, str | None, FeatureVector]]:
    """Read rows back as (id, label, FeatureVector)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header != CSV_HEADER:
            raise FeatureError(f"unexpected feature CSV header in {path}")
        for row in r:
            if len(row) != len(CSV_HEADER):
                raise FeatureError(f"short row in {path}: {row[:3]}")
            aid, label, mask = row[0], row[1] or None, row[2]
            values = tuple(None if c == "" else float(c) for c in row[3:])
            out.append((aid, label, FeatureVector(
                account=aid, values=values, sets=frozenset(mask))))
    return out
