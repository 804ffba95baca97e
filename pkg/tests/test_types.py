import pytest

from followerlens.types import (
    ALL_SETS,
    FEATURE_NAMES,
    N_FEATURES,
    SET_SLOTS,
    FeatureVector,
    feature_set_of,
    validate_profile,
    validate_series,
    validate_tweet,
)

from conftest import make_profile, make_series, make_tweet


def test_feature_layout():
    assert N_FEATURES == 18
    assert len(FEATURE_NAMES) == len(set(FEATURE_NAMES)) == 18
    covered = []
    for s in ALL_SETS:
        sl = SET_SLOTS[s]
        covered.extend(range(sl.start, sl.stop))
    assert covered == list(range(18))
    assert FEATURE_NAMES[0] == "bio_present"
    assert FEATURE_NAMES[12] == "unfollow_entropy"


def test_feature_set_of():
    assert feature_set_of(0) == "A"
    assert feature_set_of(5) == "B"
    assert feature_set_of(11) == "C"
    assert feature_set_of(17) == "D"
    with pytest.raises(IndexError):
        feature_set_of(18)


def test_feature_vector_mask_and_length():
    v = FeatureVector(account="a", values=(None,) * 18, sets=frozenset("DA"))
    assert v.mask_string() == "AD"
    with pytest.raises(ValueError):
        FeatureVector(account="a", values=(1.0,) * 17)


def test_validate_profile():
    assert validate_profile(make_profile()).ok
    bad = make_profile(aid="", statuses_count=-1, reputation=120.0, label="bot")
    res = validate_profile(bad)
    assert not res.ok
    assert len(res.violations) == 4


def test_validate_tweet():
    assert validate_tweet(make_tweet()).ok
    res = validate_tweet(make_tweet(tid="", created_at=0))
    assert "tweet_id non-empty" in res.violations
    assert "created_at > 0" in res.violations
    # retweet flag must agree with the retweeted author field
    assert not validate_tweet(make_tweet(is_retweet=True)).ok
    assert not validate_tweet(make_tweet(retweeted_author="x")).ok
    assert validate_tweet(make_tweet(is_retweet=True, retweeted_author="x")).ok


def test_validate_series():
    assert validate_series(make_series()).ok
    from followerlens.types import SnapshotSeries
    res = validate_series(SnapshotSeries(target="t", snapshots=()))
    assert "at least 1 snapshot" in res.violations
    dec = SnapshotSeries(target="t", snapshots=((10, frozenset()), (10, frozenset())))
    assert not validate_series(dec).ok
