"""Synthetic labeled datasets for pipeline testing.

Generates suspicious and legitimate accounts whose raw data (profiles,
tweet corpora, friend lists with their own small corpora, and per-account
follower snapshot series) follow class-conditional distributions. A
ground-truth schedule of every follow/unfollow event is emitted alongside
the dataset so churn analytics can be checked event-by-event; classifiers
never see the schedule.

Generation is single-threaded off one seeded Generator, so a fixed config
always yields byte-identical files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .dataio import Dataset
from .types import (
    LABEL_LEGITIMATE,
    LABEL_SUSPICIOUS,
    AccountProfile,
    SnapshotSeries,
    TweetRecord,
)

DAY = 86400

# day-aligned epoch so hourly snapshots fill whole UTC-day buckets
BASE_TIME = 1_700_092_800

SPAM_DOMAIN = "malware.example"

LANG_POOL = ("en", "es", "fr", "de", "pt", "ru", "ar", "tr")

_WORDS = ("just", "another", "day", "great", "coffee", "game", "news", "life",
          "photo", "music", "love", "city", "work", "fun", "time", "home",
          "team", "book", "rain", "friend")

_SPAM_PHRASES = ("win money now", "free ipad", "lottery prize", "cash bonus")


@dataclass(frozen=True)
class ClassParams:
    """Class-conditional generator knobs for one label."""

    # profile (set A drivers)
    bio_prob: float = 0.8
    bio_url_prob: float = 0.4
    reputation_mean: float = 40.0
    reputation_sd: float = 10.0
    statuses_mean: float = 800.0
    age_days_mean: float = 1000.0
    age_days_sd: float = 150.0
    # network (set B drivers)
    followers_mean: float = 70.0
    friends_mean: float = 60.0
    # content (set C drivers)
    n_tweets_mean: float = 20.0
    hashtag_mean: float = 0.5
    spam_word_rate: float = 0.02
    tweet_words_mean: float = 8.0
    lang_count_probs: tuple[float, ...] = (0.7, 0.3)  # P(1 lang), P(2 langs), ...
    retweet_fraction: float = 0.2
    mention_rate: float = 0.5
    url_rate: float = 0.3
    spam_url_rate: float = 0.02
    # behaviour (set D drivers)
    inactivity_days_mean: float = 5.0
    tweet_span_days: float = 60.0
    friend_engagement_rate: float = 0.7
    friend_overlap_rate: float = 0.8
    churn_probability: float = 0.0
    rejoin_probability: float = 0.5
    # churn is active on a per-account subset of days: exactly churn_days
    # of them, or uniform in [churn_days_min, churn_days] when the lower
    # bound is set; None means every day
    churn_days: int | None = None
    churn_days_min: int | None = None


@dataclass(frozen=True)
class SimConfig:
    seed: int = 7
    n_suspicious: int = 200
    n_legitimate: int = 200
    snapshot_count: int = 192
    snapshot_interval: int = 3600
    n_followers: int = 15
    friends_per_account: int = 6
    base_time: int = BASE_TIME
    noise_feature: bool = False  # True: reputation is iid noise in both classes
    suspicious: ClassParams = ClassParams()
    legitimate: ClassParams = ClassParams()

    def __post_init__(self):
        if self.n_suspicious < 1 or self.n_legitimate < 1 or self.snapshot_count < 1:
            raise ValueError("counts must be >= 1")

    @property
    def now(self) -> int:
        return self.base_time + (self.snapshot_count - 1) * self.snapshot_interval


@dataclass(frozen=True)
class ScheduleEvent:
    target: str
    time: int
    event: str  # "follow" | "unfollow"
    follower: str


def _poisson_min1(rng, mean) -> int:
    return max(1, int(rng.poisson(mean)))


def _make_text(rng, p: ClassParams) -> str:
    n = max(3, int(rng.poisson(p.tweet_words_mean)))
    words = [str(_WORDS[i]) for i in rng.integers(0, len(_WORDS), size=n)]
    if rng.random() < p.spam_word_rate:
        words.insert(int(rng.integers(0, len(words) + 1)),
                     str(_SPAM_PHRASES[int(rng.integers(0, len(_SPAM_PHRASES)))]))
    return " ".join(words)


def _account_langs(rng, p: ClassParams) -> tuple[str, ...]:
    probs = np.asarray(p.lang_count_probs, dtype=np.float64)
    probs = probs / probs.sum()
    n = 1 + int(rng.choice(len(probs), p=probs))
    idx = rng.choice(len(LANG_POOL), size=min(n, len(LANG_POOL)), replace=False)
    return tuple(LANG_POOL[i] for i in sorted(idx))


def _friend_profile(aid: str, lang: str, cfg: SimConfig, rng) -> tuple[AccountProfile, list[TweetRecord]]:
    created = cfg.base_time - int(rng.integers(400, 1200)) * DAY
    profile = AccountProfile(
        id=aid,
        created_at=created,
        statuses_count=int(rng.poisson(300)),
        followers_count=int(rng.poisson(80)),
        friends_count=int(rng.poisson(80)),
        bio="profile bio" if rng.random() < 0.8 else None,
        reputation=float(np.clip(rng.normal(35, 10), 0, 100)),
    )
    tweets = []
    for j in range(2):
        t = cfg.base_time - int(rng.integers(1, 90 * DAY))
        tweets.append(TweetRecord(
            tweet_id=f"{aid}_t{j}",
            author=aid,
            created_at=t,
            text=" ".join(str(_WORDS[i]) for i in rng.integers(0, len(_WORDS), size=6)),
            lang=lang,
        ))
    tweets.sort(key=lambda t: (t.created_at, t.tweet_id))
    return profile, tweets


def _simulate_series(aid: str, cfg: SimConfig, p: ClassParams, rng
                     ) -> tuple[SnapshotSeries, list[ScheduleEvent]]:
    followers = [f"w_{aid}_{i}" for i in range(cfg.n_followers)]
    t0 = cfg.base_time
    total_days = max(1, ((cfg.snapshot_count - 1) * cfg.snapshot_interval) // DAY + 1)
    if p.churn_days is None:
        active_days = None
    else:
        k = p.churn_days if p.churn_days_min is None else int(
            rng.integers(p.churn_days_min, p.churn_days + 1))
        k = min(max(k, 1), total_days)
        active_days = set(int(d) for d in rng.choice(total_days, size=k, replace=False))

    present = np.ones(cfg.n_followers, dtype=bool)
    events = [ScheduleEvent(aid, t0, "follow", f) for f in followers]
    snaps = [(t0, frozenset(followers))]
    for step in range(1, cfg.snapshot_count):
        t = t0 + step * cfg.snapshot_interval
        day = (t - t0) // DAY
        active = active_days is None or day in active_days
        draws = rng.random(cfg.n_followers)
        for i in range(cfg.n_followers):
            if present[i]:
                if active and draws[i] < p.churn_probability:
                    present[i] = False
                    events.append(ScheduleEvent(aid, t, "unfollow", followers[i]))
            elif draws[i] < p.rejoin_probability:
                present[i] = True
                events.append(ScheduleEvent(aid, t, "follow", followers[i]))
        snaps.append((t, frozenset(f for i, f in enumerate(followers) if present[i])))
    return SnapshotSeries(target=aid, snapshots=tuple(snaps)), events


def _simulate_account(aid: str, label: str, cfg: SimConfig, p: ClassParams, rng):
    now = cfg.now
    inactivity = 1 + int(rng.geometric(1.0 / max(p.inactivity_days_mean, 1.0)))
    span = max(1, int(rng.poisson(p.tweet_span_days)))
    age = max(int(rng.normal(p.age_days_mean, p.age_days_sd)),
              inactivity + span + 30)
    created = now - age * DAY

    if cfg.noise_feature:
        reputation = float(rng.uniform(0, 100))
    else:
        reputation = float(np.clip(rng.normal(p.reputation_mean, p.reputation_sd), 0, 100))
    profile = AccountProfile(
        id=aid,
        created_at=created,
        statuses_count=int(rng.poisson(p.statuses_mean)),
        followers_count=int(rng.poisson(p.followers_mean)),
        friends_count=_poisson_min1(rng, p.friends_mean),
        bio="about me" if rng.random() < p.bio_prob else None,
        bio_url="http://me.example" if rng.random() < p.bio_url_prob else None,
        reputation=reputation,
        label=label,
    )

    langs = _account_langs(rng, p)
    friend_ids = []
    friend_records = []
    for k in range(cfg.friends_per_account):
        fid = f"f_{aid}_{k}"
        if rng.random() < p.friend_overlap_rate:
            flang = langs[int(rng.integers(0, len(langs)))]
        else:
            others = [l for l in LANG_POOL if l not in langs]
            flang = others[int(rng.integers(0, len(others)))] if others else langs[0]
        friend_records.append(_friend_profile(fid, flang, cfg, rng))
        friend_ids.append(fid)

    n_tweets = _poisson_min1(rng, p.n_tweets_mean)
    last_tweet = now - inactivity * DAY
    offsets = np.sort(rng.integers(0, max(span * DAY, 1), size=n_tweets - 1))[::-1] \
        if n_tweets > 1 else np.empty(0, dtype=int)
    times = [last_tweet - int(o) - 1 for o in offsets] + [last_tweet]
    tweets = []
    for j, t in enumerate(times):
        is_rt = rng.random() < p.retweet_fraction
        rt_author = None
        if is_rt:
            if rng.random() < p.friend_engagement_rate:
                rt_author = friend_ids[int(rng.integers(0, len(friend_ids)))]
            else:
                rt_author = f"ext_{int(rng.integers(0, 10_000))}"
        mentions = ()
        if rng.random() < p.mention_rate:
            if rng.random() < p.friend_engagement_rate:
                mentions = (friend_ids[int(rng.integers(0, len(friend_ids)))],)
            else:
                mentions = (f"ext_{int(rng.integers(0, 10_000))}",)
        hashtags = tuple(f"tag{int(h)}" for h in rng.integers(0, 50, size=rng.poisson(p.hashtag_mean)))
        urls = ()
        if rng.random() < p.url_rate:
            if rng.random() < p.spam_url_rate:
                urls = (f"http://{SPAM_DOMAIN}/p{int(rng.integers(0, 10_000))}",)
            else:
                urls = (f"http://ok.example/a{int(rng.integers(0, 10_000))}",)
        tweets.append(TweetRecord(
            tweet_id=f"{aid}_t{j:03d}",
            author=aid,
            created_at=int(t),
            text=_make_text(rng, p),
            lang=langs[int(rng.integers(0, len(langs)))],
            is_retweet=is_rt,
            retweeted_author=rt_author,
            mentions=mentions,
            hashtags=hashtags,
            urls=urls,
        ))
    tweets.sort(key=lambda t: (t.created_at, t.tweet_id))

    series, events = _simulate_series(aid, cfg, p, rng)
    return profile, tweets, frozenset(friend_ids), friend_records, series, events


def simulate_dataset(cfg: SimConfig) -> tuple[Dataset, list[ScheduleEvent]]:
    """Generate a labeled dataset plus its ground-truth event schedule."""
    rng = np.random.default_rng(cfg.seed)
    accounts: dict[str, AccountProfile] = {}
    tweets: dict[str, tuple[TweetRecord, ...]] = {}
    snapshots: dict[str, SnapshotSeries] = {}
    friends: dict[str, frozenset[str]] = {}
    schedule: list[ScheduleEvent] = []

    plan = [(LABEL_SUSPICIOUS, "s", cfg.n_suspicious, cfg.suspicious),
            (LABEL_LEGITIMATE, "l", cfg.n_legitimate, cfg.legitimate)]
    for label, prefix, count, params in plan:
        for i in range(count):
            aid = f"{prefix}{i:04d}"
            profile, ts, fr, friend_records, series, events = _simulate_account(
                aid, label, cfg, params, rng)
            accounts[aid] = profile
            tweets[aid] = tuple(ts)
            friends[aid] = fr
            snapshots[aid] = series
            schedule.extend(events)
            for fp, fts in friend_records:
                accounts[fp.id] = fp
                tweets[fp.id] = tuple(fts)

    d = Dataset(accounts=accounts, tweets=tweets, snapshots=snapshots, friends=friends)
    schedule.sort(key=lambda e: (e.target, e.time, e.event, e.follower))
    return d, schedule


def write_schedule(schedule: list[ScheduleEvent], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in schedule:
            fh.write(json.dumps(
                {"target": e.target, "time": e.time, "event": e.event,
                 "follower": e.follower},
                separators=(",", ":")) + "\n")


def read_schedule(path: str) -> list[ScheduleEvent]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                out.append(ScheduleEvent(obj["target"], obj["time"],
                                         obj["event"], obj["follower"]))
    return out


def group_schedule(schedule: list[ScheduleEvent]) -> dict[str, list[ScheduleEvent]]:
    """Events per target, time-ordered."""
    by_target: dict[str, list[ScheduleEvent]] = {}
    for e in schedule:
        by_target.setdefault(e.target, []).append(e)
    for events in by_target.values():
        events.sort(key=lambda e: e.time)
    return by_target


def replay_schedule(events: list[ScheduleEvent], times: list[int]) -> list[frozenset[str]]:
    """Reconstruct one target's follower set at each snapshot time from
    its time-ordered event list (see :func:`group_schedule`)."""
    present: set[str] = set()
    out = []
    i = 0
    for t in times:
        while i < len(events) and events[i].time <= t:
            if events[i].event == "follow":
                present.add(events[i].follower)
            else:
                present.discard(events[i].follower)
            i += 1
        out.append(frozenset(present))
    return out


def scenario_presets() -> dict[str, SimConfig]:
    """Named scenarios: fully separable, behaviour-only, and heavy overlap."""
    suspicious_all = ClassParams(
        bio_prob=0.1, bio_url_prob=0.05,
        reputation_mean=10.0, reputation_sd=5.0,
        statuses_mean=60.0, age_days_mean=900.0,
        followers_mean=8.0, friends_mean=400.0,
        n_tweets_mean=20.0, hashtag_mean=3.0, spam_word_rate=0.5,
        tweet_words_mean=5.0, lang_count_probs=(0.05, 0.15, 0.3, 0.3, 0.2),
        retweet_fraction=0.8, mention_rate=0.3, url_rate=0.6, spam_url_rate=0.3,
        inactivity_days_mean=300.0, tweet_span_days=200.0,
        friend_engagement_rate=0.05, friend_overlap_rate=0.15,
        churn_probability=0.04, rejoin_probability=0.5, churn_days=None,
    )
    legit_all = ClassParams(
        bio_prob=0.9, bio_url_prob=0.5,
        reputation_mean=45.0, reputation_sd=12.0,
        statuses_mean=900.0, age_days_mean=1000.0,
        followers_mean=80.0, friends_mean=70.0,
        n_tweets_mean=20.0, hashtag_mean=0.4, spam_word_rate=0.01,
        tweet_words_mean=10.0, lang_count_probs=(0.75, 0.25),
        retweet_fraction=0.15, mention_rate=0.6, url_rate=0.25, spam_url_rate=0.01,
        inactivity_days_mean=3.0, tweet_span_days=45.0,
        friend_engagement_rate=0.75, friend_overlap_rate=0.9,
        churn_probability=0.001, rejoin_probability=0.5, churn_days=1,
    )
    separable = SimConfig(suspicious=suspicious_all, legitimate=legit_all)

    # classes share every set A-C generator; only set D drivers differ
    common = ClassParams(
        bio_prob=0.7, bio_url_prob=0.3,
        reputation_mean=35.0, reputation_sd=12.0,
        statuses_mean=500.0, age_days_mean=1000.0,
        followers_mean=60.0, friends_mean=60.0,
        n_tweets_mean=20.0, hashtag_mean=1.0, spam_word_rate=0.1,
        tweet_words_mean=8.0, lang_count_probs=(0.5, 0.3, 0.2),
        retweet_fraction=0.4, mention_rate=0.5, url_rate=0.3, spam_url_rate=0.05,
    )
    # moderate per-feature gaps so no single behaviour feature separates
    # alone; the classifier has to combine several of them
    behaviour_only = SimConfig(
        n_suspicious=250, n_legitimate=250,
        noise_feature=True,
        suspicious=replace(
            common,
            inactivity_days_mean=60.0,
            friend_engagement_rate=0.25, friend_overlap_rate=0.35,
            churn_probability=0.012, rejoin_probability=0.5,
            churn_days=8, churn_days_min=4,
        ),
        legitimate=replace(
            common,
            inactivity_days_mean=12.0,
            friend_engagement_rate=0.55, friend_overlap_rate=0.7,
            churn_probability=0.012, rejoin_probability=0.5,
            churn_days=5, churn_days_min=1,
        ),
    )

    hard = SimConfig(
        suspicious=replace(
            common,
            reputation_mean=30.0, hashtag_mean=1.2, spam_word_rate=0.12,
            inactivity_days_mean=40.0, friend_engagement_rate=0.4,
            friend_overlap_rate=0.5, churn_probability=0.01, churn_days=4,
        ),
        legitimate=replace(
            common,
            reputation_mean=36.0, hashtag_mean=0.9, spam_word_rate=0.08,
            inactivity_days_mean=20.0, friend_engagement_rate=0.55,
            friend_overlap_rate=0.65, churn_probability=0.006, churn_days=2,
        ),
    )
    return {"separable": separable, "behaviour-only": behaviour_only, "hard": hard}
