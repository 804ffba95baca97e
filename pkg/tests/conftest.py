import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from followerlens.dataio import Dataset
from followerlens.types import AccountProfile, SnapshotSeries, TweetRecord


def make_profile(aid="u1", **kw):
    defaults = dict(id=aid, created_at=1_000_000, statuses_count=10,
                    followers_count=5, friends_count=5)
    defaults.update(kw)
    return AccountProfile(**defaults)


def make_tweet(aid="u1", tid="t1", **kw):
    defaults = dict(tweet_id=tid, author=aid, created_at=1_500_000,
                    text="hello world", lang="en")
    defaults.update(kw)
    return TweetRecord(**defaults)


def make_series(aid="u1", sets=(("a", "b"), ("a",)), t0=1_700_092_800, step=3600):
    snaps = tuple((t0 + i * step, frozenset(s)) for i, s in enumerate(sets))
    return SnapshotSeries(target=aid, snapshots=snaps)


@pytest.fixture
def toy_dataset():
    """Two labeled accounts with hand-built tweets, friends and snapshots."""
    a = make_profile("alice", bio="hi", bio_url="http://a.example",
                     statuses_count=200, followers_count=10, friends_count=100,
                     reputation=40.0, label="legitimate")
    b = make_profile("bob", statuses_count=3, followers_count=2,
                     friends_count=50, label="suspicious")
    tweets = {
        "alice": (
            make_tweet("alice", "a1", created_at=1_700_000_000, text="win money now",
                       hashtags=("x",), mentions=("bob",)),
            make_tweet("alice", "a2", created_at=1_700_000_100, text="hello",
                       is_retweet=True, retweeted_author="bob",
                       urls=("http://ok.example/1",)),
        ),
        "bob": (
            make_tweet("bob", "b1", created_at=1_700_000_200, lang="es",
                       text="hola", urls=("http://bad.example/x",)),
        ),
    }
    snapshots = {"alice": make_series("alice", sets=(("f1", "f2"), ("f1",), ("f1", "f2")))}
    friends = {"alice": frozenset({"bob"}), "bob": frozenset({"alice"})}
    return Dataset(accounts={"alice": a, "bob": b}, tweets=tweets,
                   snapshots=snapshots, friends=friends)
