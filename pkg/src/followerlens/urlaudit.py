"""URL auditing against pluggable blacklist providers.

A provider maps a normalized URL to a verdict in {flagged, clean,
unknown}; the overall verdict is flagged iff any provider flags
(any-flag policy), and provider failures degrade to "unknown", never
abort the audit. The only concrete provider here is a local blacklist
file; the live-service adapters are offline stubs that record the
endpoint they would call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from urllib.parse import urlsplit, urlunsplit

from .dataio import Dataset
from .features import tokenize

FLAGGED = "flagged"
CLEAN = "clean"
UNKNOWN = "unknown"

DEFAULT_STOP_WORDS = frozenset(
    "a an and are at be by for from has he i in is it its of on or s t that "
    "the this to was we were will with you your".split()
)


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, strip the fragment. No redirect following."""
    parts = urlsplit(url.strip())
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(),
                       parts.path, parts.query, ""))


class BlacklistProvider:
    """Lookup contract: deterministic url -> verdict for fixed state."""

    name = "provider"

    def lookup(self, url: str) -> str:
        raise NotImplementedError


class LocalBlacklistProvider(BlacklistProvider):
    """Matches exact normalized URLs or domain suffixes from a local file.

    File format: one URL or bare domain per line; '#' starts a comment.
    A bare domain entry flags every URL on that host or a subdomain.
    """

    name = "local-blacklist"

    def __init__(self, entries, name: str | None = None):
        if name:
            self.name = name
        self.urls: set[str] = set()
        self.domains: set[str] = set()
        for raw in entries:
            entry = raw.strip()
            if not entry or entry.startswith("#"):
                continue
            if "://" in entry:
                self.urls.add(normalize_url(entry))
            else:
                self.domains.add(entry.lower())

    @classmethod
    def from_file(cls, path: str, name: str | None = None) -> "LocalBlacklistProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(fh, name=name)

    def lookup(self, url: str) -> str:
        norm = normalize_url(url)
        if norm in self.urls:
            return FLAGGED
        host = urlsplit(norm).hostname or ""
        for dom in self.domains:
            if host == dom or host.endswith("." + dom):
                return FLAGGED
        return CLEAN


class StubProvider(BlacklistProvider):
    """Offline stand-in for a live reputation service.

    Holds the documented endpoint but never calls it; every lookup is
    "unknown", which the any-flag policy treats as clean.
    """

    def __init__(self, name: str, endpoint: str):
        self.name = name
        self.endpoint = endpoint

    def lookup(self, url: str) -> str:
        return UNKNOWN


def live_provider_stubs() -> list[StubProvider]:
    return [
        StubProvider("phishtank", "https://checkurl.phishtank.com/checkurl/"),
        StubProvider("safebrowsing", "https://safebrowsing.googleapis.com/v4/threatMatches:find"),
        StubProvider("surbl", "dns://multi.surbl.org"),
        StubProvider("virustotal", "https://www.virustotal.com/api/v3/urls"),
    ]


def extract_urls(tweets) -> list[tuple[str, str, str]]:
    """(url, tweet_id, author) for every URL entry, duplicates preserved."""
    return [(u, t.tweet_id, t.author) for t in tweets for u in t.urls]


def lookup(url: str, providers: list[BlacklistProvider]) -> tuple[dict[str, str], str]:
    """Per-provider verdicts plus the any-flag overall verdict."""
    if not providers:
        raise ValueError("need at least one provider")
    verdicts = {}
    for p in providers:
        try:
            verdicts[p.name] = p.lookup(url)
        except Exception:
            verdicts[p.name] = UNKNOWN
    overall = FLAGGED if FLAGGED in verdicts.values() else CLEAN
    return verdicts, overall


@dataclass(frozen=True)
class SpamReport:
    provider_flagged: dict[str, int]
    tweets_with_urls: int
    spam_tweets: int
    unique_spam_urls: int
    spamming_accounts: frozenset[str]
    flagged_tweet_ids: frozenset[str] = field(default_factory=frozenset)

    @property
    def spam_tweet_fraction(self) -> float:
        return self.spam_tweets / self.tweets_with_urls if self.tweets_with_urls else 0.0

    def to_json(self) -> dict:
        return {
            "provider_flagged": dict(sorted(self.provider_flagged.items())),
            "tweets_with_urls": self.tweets_with_urls,
            "spam_tweets": self.spam_tweets,
            "unique_spam_urls": self.unique_spam_urls,
            "spam_tweet_fraction": self.spam_tweet_fraction,
            "spamming_accounts": sorted(self.spamming_accounts),
        }


def audit_corpus(d: Dataset, providers: list[BlacklistProvider]) -> SpamReport:
    """Audit every tweet URL in the dataset under the any-flag policy."""
    provider_flagged = {p.name: 0 for p in providers}
    url_cache: dict[str, tuple[dict[str, str], str]] = {}
    tweets_with_urls = 0
    spam_tweets = 0
    spam_urls: set[str] = set()
    spammers: set[str] = set()
    flagged_ids: set[str] = set()
    for author in sorted(d.tweets):
        for t in d.tweets[author]:
            if not t.urls:
                continue
            tweets_with_urls += 1
            tweet_flagged = False
            for url in t.urls:
                norm = normalize_url(url)
                if norm not in url_cache:
                    url_cache[norm] = lookup(url, providers)
                verdicts, overall = url_cache[norm]
                if overall == FLAGGED:
                    tweet_flagged = True
                    spam_urls.add(norm)
            if tweet_flagged:
                spam_tweets += 1
                spammers.add(author)
                flagged_ids.add(t.tweet_id)
    for verdicts, _ in url_cache.values():
        for name, v in verdicts.items():
            if v == FLAGGED:
                provider_flagged[name] += 1
    return SpamReport(
        provider_flagged=provider_flagged,
        tweets_with_urls=tweets_with_urls,
        spam_tweets=spam_tweets,
        unique_spam_urls=len(spam_urls),
        spamming_accounts=frozenset(spammers),
        flagged_tweet_ids=frozenset(flagged_ids),
    )


def spam_word_frequencies(d: Dataset, report: SpamReport,
                          lang_filter: str | None = None,
                          stop_words: frozenset[str] = DEFAULT_STOP_WORDS
                          ) -> list[tuple[str, int]]:
    """Token frequencies over flagged tweets, descending, ties lexicographic."""
    counts: dict[str, int] = {}
    for tweets in d.tweets.values():
        for t in tweets:
            if t.tweet_id not in report.flagged_tweet_ids:
                continue
            if lang_filter is not None and t.lang != lang_filter:
                continue
            for tok in tokenize(t.text):
                if tok not in stop_words:
                    counts[tok] = counts.get(tok, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
