"""Core domain types shared by every other module.

All types are immutable value records; they validate on construction only
where cheap, everything else goes through :func:`validate_profile` /
dataset-level validation so that bad data is reported, not raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# Canonical feature order. Sets: A = profile, B = network, C = content,
# D = behaviour. Serialization, CSV columns and model masks all follow
# this order; never reorder.
FEATURE_NAMES: tuple[str, ...] = (
    # set A
    "bio_present",
    "bio_url_present",
    "statuses_count",
    "reputation",
    # set B
    "follower_friend_ratio",
    "followers_count",
    # set C
    "hashtags_per_tweet",
    "spam_words_per_tweet",
    "mean_tweet_length",
    "language_count",
    "retweets_per_tweet",
    "mentions_per_tweet",
    # set D
    "unfollow_entropy",
    "retweet_engagement",
    "mention_engagement",
    "language_overlap",
    "seconds_since_last_tweet",
    "tweets_per_day",
)

SET_SLOTS: dict[str, slice] = {
    "A": slice(0, 4),
    "B": slice(4, 6),
    "C": slice(6, 12),
    "D": slice(12, 18),
}

ALL_SETS = "ABCD"

N_FEATURES = len(FEATURE_NAMES)

LABEL_SUSPICIOUS = "suspicious"
LABEL_LEGITIMATE = "legitimate"


def feature_set_of(index: int) -> str:
    """Return the set letter ('A'..'D') owning a canonical slot index."""
    for name, sl in SET_SLOTS.items():
        if sl.start <= index < sl.stop:
            return name
    raise IndexError(index)


@dataclass(frozen=True)
class AccountProfile:
    """Static profile attributes of one account.

    ``reputation`` is an externally supplied influence score in [0, 100];
    when absent, feature extraction substitutes a configured default.
    """

    id: str
    created_at: int
    statuses_count: int = 0
    followers_count: int = 0
    friends_count: int = 0
    bio: str | None = None
    bio_url: str | None = None
    reputation: float | None = None
    suspended: bool = False
    default_image: bool = False
    label: str | None = None


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    author: str
    created_at: int
    text: str
    lang: str
    is_retweet: bool = False
    retweeted_author: str | None = None
    mentions: tuple[str, ...] = ()
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()


@dataclass(frozen=True)
class SnapshotSeries:
    """Timestamped follower-ID sets of one target account.

    ``snapshots`` is an ordered tuple of (epoch_seconds, frozenset of ids)
    with strictly increasing timestamps and at least one entry.
    """

    target: str
    snapshots: tuple[tuple[int, frozenset[str]], ...]

    def times(self) -> list[int]:
        return [t for t, _ in self.snapshots]


@dataclass(frozen=True)
class FeatureVector:
    """The 18-slot detection vector in canonical order.

    ``values[i]`` is None when the slot is not populated (set not
    requested, or not computable for this account); populated slots are
    finite floats, never NaN.
    """

    account: str
    values: tuple[float | None, ...]
    sets: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.values) != N_FEATURES:
            raise ValueError(f"feature vector needs {N_FEATURES} slots, got {len(self.values)}")

    def mask_string(self) -> str:
        return "".join(s for s in ALL_SETS if s in self.sets)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_profile(p: AccountProfile) -> ValidationResult:
    """Check every profile invariant; report the violated ones by field."""
    bad = []
    if not p.id:
        bad.append("id non-empty")
    if p.statuses_count < 0:
        bad.append("statuses_count >= 0")
    if p.followers_count < 0:
        bad.append("followers_count >= 0")
    if p.friends_count < 0:
        bad.append("friends_count >= 0")
    if p.reputation is not None and not (0.0 <= p.reputation <= 100.0):
        bad.append("reputation in [0,100]")
    if p.label is not None and p.label not in (LABEL_SUSPICIOUS, LABEL_LEGITIMATE):
        bad.append("label in {suspicious, legitimate}")
    return ValidationResult(tuple(bad))


def validate_tweet(t: TweetRecord) -> ValidationResult:
    bad = []
    if not t.tweet_id:
        bad.append("tweet_id non-empty")
    if not t.author:
        bad.append("author non-empty")
    if t.created_at <= 0:
        bad.append("created_at > 0")
    if not t.lang:
        bad.append("lang non-empty")
    if t.is_retweet != (t.retweeted_author is not None):
        bad.append("is_retweet iff retweeted_author present")
    return ValidationResult(tuple(bad))


def validate_series(s: SnapshotSeries) -> ValidationResult:
    bad = []
    if not s.target:
        bad.append("target non-empty")
    if len(s.snapshots) < 1:
        bad.append("at least 1 snapshot")
    times = s.times()
    if any(b <= a for a, b in zip(times, times[1:])):
        bad.append("snapshot times strictly increasing")
    return ValidationResult(tuple(bad))
