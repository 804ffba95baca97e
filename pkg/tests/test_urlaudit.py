from followerlens.dataio import Dataset
from followerlens.urlaudit import (
    CLEAN,
    FLAGGED,
    UNKNOWN,
    BlacklistProvider,
    LocalBlacklistProvider,
    StubProvider,
    audit_corpus,
    extract_urls,
    live_provider_stubs,
    lookup,
    normalize_url,
    spam_word_frequencies,
)

from conftest import make_profile, make_tweet


def test_normalize_url():
    assert normalize_url("HTTP://Evil.EXAMPLE/Path?q=1#frag") == \
        "http://evil.example/Path?q=1"
    assert normalize_url("  http://a.example/  ") == "http://a.example/"


def test_local_provider_exact_and_domain():
    p = LocalBlacklistProvider([
        "# comment line",
        "",
        "http://bad.example/page",
        "evil.example",
    ])
    assert p.lookup("HTTP://BAD.example/page#x") == FLAGGED
    assert p.lookup("http://bad.example/other") == CLEAN
    assert p.lookup("http://evil.example/anything") == FLAGGED
    assert p.lookup("http://sub.evil.example/") == FLAGGED
    assert p.lookup("http://notevil.example/") == CLEAN


def test_local_provider_from_file(tmp_path):
    f = tmp_path / "bl.txt"
    f.write_text("# banned\nmalware.example\n")
    p = LocalBlacklistProvider.from_file(str(f), name="custom")
    assert p.name == "custom"
    assert p.lookup("http://malware.example/x") == FLAGGED


def test_stub_providers_offline():
    for stub in live_provider_stubs():
        assert stub.lookup("http://anything.example") == UNKNOWN
        assert stub.endpoint


class _Boom(BlacklistProvider):
    name = "boom"

    def lookup(self, url):
        raise RuntimeError("service down")


def test_lookup_any_flag_and_failure_degrades():
    local = LocalBlacklistProvider(["evil.example"])
    verdicts, overall = lookup("http://evil.example/x",
                               [StubProvider("s", "e"), _Boom(), local])
    assert verdicts == {"s": UNKNOWN, "boom": UNKNOWN, "local-blacklist": FLAGGED}
    assert overall == FLAGGED
    _, overall2 = lookup("http://fine.example/", [StubProvider("s", "e"), _Boom()])
    assert overall2 == CLEAN


def _corpus_50():
    """Hand-built 50-tweet corpus with a fully enumerated expectation.

    Accounts a..e, 10 tweets each. Tweet j of account i:
      - j in {0,1,2}: a URL; for accounts a, b tweet 0 uses the flagged host.
      - others: no URL.
    """
    accounts = {}
    tweets = {}
    for i, aid in enumerate("abcde"):
        accounts[aid] = make_profile(aid)
        ts = []
        for j in range(10):
            urls = ()
            text = f"plain tweet number {j}"
            if j == 0 and aid in ("a", "b"):
                urls = (f"http://spam.example/{aid}",)
                text = "win free money money prize"
            elif j in (1, 2):
                urls = (f"http://ok.example/{aid}{j}",)
            ts.append(make_tweet(aid, f"{aid}_t{j}", text=text, urls=urls,
                                 created_at=1_000 + i * 100 + j))
        tweets[aid] = tuple(ts)
    return Dataset(accounts=accounts, tweets=tweets)


def test_audit_corpus_hand_enumerated():
    d = _corpus_50()
    assert sum(len(t) for t in d.tweets.values()) == 50
    provider = LocalBlacklistProvider(["spam.example"])
    report = audit_corpus(d, [provider])
    # URL tweets: 3 each for a, b (j=0,1,2) plus 2 each for c, d, e (j=1,2)
    assert report.tweets_with_urls == 12
    assert report.spam_tweets == 2
    assert report.unique_spam_urls == 2
    assert report.spamming_accounts == {"a", "b"}
    assert report.flagged_tweet_ids == {"a_t0", "b_t0"}
    assert report.spam_tweet_fraction == 2 / 12
    assert report.provider_flagged == {"local-blacklist": 2}
    j = report.to_json()
    assert j["spamming_accounts"] == ["a", "b"]


def test_word_frequencies_hand_enumerated():
    d = _corpus_50()
    report = audit_corpus(d, [LocalBlacklistProvider(["spam.example"])])
    freqs = spam_word_frequencies(d, report)
    # both flagged tweets say "win free money money prize"
    assert freqs == [("money", 4), ("free", 2), ("prize", 2), ("win", 2)]
    assert spam_word_frequencies(d, report, lang_filter="es") == []


def test_extract_urls_preserves_duplicates():
    t = make_tweet("a", "t1", urls=("http://x.example/1", "http://x.example/1"))
    assert extract_urls([t]) == [("http://x.example/1", "t1", "a"),
                                 ("http://x.example/1", "t1", "a")]


def test_url_cache_shares_verdicts():
    calls = []

    class Counting(BlacklistProvider):
        name = "counting"

        def lookup(self, url):
            calls.append(url)
            return CLEAN

    t1 = make_tweet("a", "t1", urls=("http://X.example/p",))
    t2 = make_tweet("a", "t2", urls=("http://x.example/p",))
    d = Dataset(accounts={"a": make_profile("a")}, tweets={"a": (t1, t2)})
    audit_corpus(d, [Counting()])
    assert len(calls) == 1  # normalized to the same URL, looked up once
