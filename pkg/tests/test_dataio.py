import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from followerlens.dataio import (
    Dataset,
    DatasetError,
    load_dataset,
    validate_dataset,
    write_dataset,
)
from followerlens.types import AccountProfile, SnapshotSeries, TweetRecord

from conftest import make_profile


def test_round_trip_toy(toy_dataset, tmp_path):
    root = str(tmp_path / "ds")
    write_dataset(toy_dataset, root)
    assert load_dataset(root) == toy_dataset


def test_write_is_deterministic(toy_dataset, tmp_path):
    r1, r2 = str(tmp_path / "a"), str(tmp_path / "b")
    write_dataset(toy_dataset, r1)
    write_dataset(toy_dataset, r2)
    for name in ("accounts.jsonl", "tweets.jsonl", "snapshots.jsonl", "friends.jsonl"):
        with open(f"{r1}/{name}", "rb") as f1, open(f"{r2}/{name}", "rb") as f2:
            assert f1.read() == f2.read()


def test_missing_accounts_file(tmp_path):
    with pytest.raises(DatasetError, match="missing accounts file"):
        load_dataset(str(tmp_path))


def _write_lines(path, lines):
    path.write_text("".join(json.dumps(obj) + "\n" for obj in lines))


def _account_obj(aid="u1", **kw):
    obj = dict(id=aid, created_at=1, statuses_count=1, followers_count=1,
               friends_count=1, suspended=False, default_image=False)
    obj.update(kw)
    return obj


def test_error_carries_file_and_line(tmp_path):
    _write_lines(tmp_path / "accounts.jsonl",
                 [_account_obj("a"), _account_obj("b", statuses_count=-2)])
    with pytest.raises(DatasetError, match=r"accounts\.jsonl:2: invalid account"):
        load_dataset(str(tmp_path))


def test_invalid_json_line(tmp_path):
    (tmp_path / "accounts.jsonl").write_text('{"id": "a"\n')
    with pytest.raises(DatasetError, match=r"accounts\.jsonl:1: invalid JSON"):
        load_dataset(str(tmp_path))


def test_duplicate_id_names_both_lines(tmp_path):
    _write_lines(tmp_path / "accounts.jsonl", [_account_obj("a"), _account_obj("a")])
    with pytest.raises(DatasetError, match="duplicate account id 'a' \\(first seen on line 1\\)"):
        load_dataset(str(tmp_path))


def test_wrong_type_field(tmp_path):
    _write_lines(tmp_path / "accounts.jsonl", [_account_obj("a", created_at="x")])
    with pytest.raises(DatasetError, match="field 'created_at' has wrong type"):
        load_dataset(str(tmp_path))


def test_blank_lines_skipped(tmp_path):
    (tmp_path / "accounts.jsonl").write_text(
        json.dumps(_account_obj("a")) + "\n\n" + json.dumps(_account_obj("b")) + "\n")
    d = load_dataset(str(tmp_path))
    assert set(d.accounts) == {"a", "b"}


def test_validate_dataset_findings(toy_dataset):
    # bob has friends pointing at alice (fine) but alice's snapshots list
    # follower ids without profiles -> not a finding; dangling tweet author is
    d = Dataset(
        accounts={"alice": toy_dataset.accounts["alice"]},
        tweets={"ghost": toy_dataset.tweets["bob"]},
        snapshots={"nobody": toy_dataset.snapshots["alice"]},
        friends={"alice": frozenset({"external"})},
    )
    report = validate_dataset(d)
    kinds = {(f.kind, f.subject) for f in report.findings}
    assert ("dangling-reference", "ghost") in kinds
    assert ("dangling-reference", "nobody") in kinds
    assert ("external-friends", "alice") in kinds
    assert ("no-corpus", "alice") in kinds
    assert not report.clean


def test_validate_snapshot_gap():
    series = SnapshotSeries(target="a", snapshots=(
        (0, frozenset()), (3600, frozenset()), (100_000, frozenset())))
    d = Dataset(accounts={"a": make_profile("a")},
                tweets={"a": (TweetRecord("t", "a", 5, "x", "en"),)},
                snapshots={"a": series})
    report = validate_dataset(d, snapshot_gap_threshold=7200)
    gaps = [f for f in report.findings if f.kind == "snapshot-gap"]
    assert len(gaps) == 1
    assert "96400s" in gaps[0].detail


def test_write_rejects_invalid(tmp_path):
    d = Dataset(accounts={"a": AccountProfile(id="a", created_at=1, statuses_count=-5)})
    with pytest.raises(DatasetError, match="statuses_count"):
        write_dataset(d, str(tmp_path / "x"))


_ids = st.text(alphabet="abcdefgh0123", min_size=1, max_size=6)


@st.composite
def datasets(draw):
    aids = draw(st.lists(_ids, min_size=1, max_size=4, unique=True))
    accounts = {}
    tweets = {}
    snapshots = {}
    friends = {}
    for aid in aids:
        accounts[aid] = AccountProfile(
            id=aid,
            created_at=draw(st.integers(1, 10**9)),
            statuses_count=draw(st.integers(0, 10**4)),
            followers_count=draw(st.integers(0, 10**4)),
            friends_count=draw(st.integers(0, 10**4)),
            bio=draw(st.none() | st.text(max_size=20)),
            bio_url=draw(st.none() | st.just("http://x.example")),
            reputation=draw(st.none() | st.floats(0, 100, allow_nan=False)),
            suspended=draw(st.booleans()),
            default_image=draw(st.booleans()),
            label=draw(st.sampled_from([None, "suspicious", "legitimate"])),
        )
        n_tweets = draw(st.integers(0, 3))
        ts = []
        for j in range(n_tweets):
            rt = draw(st.booleans())
            ts.append(TweetRecord(
                tweet_id=f"{aid}_t{j}",
                author=aid,
                created_at=draw(st.integers(1, 10**9)),
                text=draw(st.text(max_size=30)),
                lang=draw(st.sampled_from(["en", "es", "fr"])),
                is_retweet=rt,
                retweeted_author="z" if rt else None,
                mentions=tuple(draw(st.lists(_ids, max_size=2))),
                hashtags=tuple(draw(st.lists(_ids, max_size=2))),
                urls=tuple(draw(st.lists(st.just("http://u.example/p"), max_size=2))),
            ))
        if ts:
            ts.sort(key=lambda t: (t.created_at, t.tweet_id))
            tweets[aid] = tuple(ts)
        if draw(st.booleans()):
            times = sorted(draw(st.lists(st.integers(0, 10**6), min_size=1,
                                         max_size=4, unique=True)))
            snapshots[aid] = SnapshotSeries(target=aid, snapshots=tuple(
                (t, frozenset(draw(st.lists(_ids, max_size=3)))) for t in times))
        if draw(st.booleans()):
            friends[aid] = frozenset(draw(st.lists(_ids, max_size=3)))
    return Dataset(accounts=accounts, tweets=tweets, snapshots=snapshots, friends=friends)


@settings(max_examples=60, deadline=None)
@given(datasets())
def test_round_trip_property(tmp_path_factory, d):
    root = str(tmp_path_factory.mktemp("rt"))
    write_dataset(d, root)
    loaded = load_dataset(root)
    assert loaded == d
    # idempotence: writing the loaded dataset is byte-identical
    root2 = str(tmp_path_factory.mktemp("rt2"))
    write_dataset(loaded, root2)
    for name in ("accounts.jsonl", "tweets.jsonl", "snapshots.jsonl", "friends.jsonl"):
        with open(f"{root}/{name}", "rb") as f1, open(f"{root2}/{name}", "rb") as f2:
            assert f1.read() == f2.read()
