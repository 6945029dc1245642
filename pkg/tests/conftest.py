import random
from datetime import date
from pathlib import Path

import pytest

from sourcescope.corpus import Article, Corpus, MediaType
from sourcescope.patterns import default_patterns

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_CORPUS = DATA_DIR / "golden_corpus.jsonl"
GOLDEN_GOLD = DATA_DIR / "golden_gold.jsonl"

# one "[PASS]/[FAIL] criterion ..." line per acceptance criterion,
# appended by tests/test_acceptance.py and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pattern_set():
    return default_patterns()


_FILLER = (
    "the report described local events in detail and officials offered further "
    "comment on the situation while residents waited for news from the council"
).split()

_SPECIAL_SENTENCES = (
    "She tweeted that the plan was ready.",
    '"We are done," he posted on Facebook.',
    "— Some Person (@someone) May 4, 2016",
    "He took to Twitter after the game.",
    'The mayor said the weather was "unusually calm" this week.',
    "Don't forget it wasn't over yet.",
    "In a Facebook post, the group warned members.",
    "pic.twitter.com/XyZ987 drew attention.",
    "“Enough,” she wrote on Facebook.",
)


def random_sentence(rng: random.Random) -> str:
    words = [rng.choice(_FILLER) for _ in range(rng.randint(6, 14))]
    words[0] = words[0].capitalize()
    return " ".join(words) + rng.choice([".", ".", ".", "!", "?"])


def random_body(rng: random.Random, n_sentences=None, special_rate=0.25) -> str:
    parts = []
    for _ in range(n_sentences if n_sentences is not None else rng.randint(1, 10)):
        if rng.random() < special_rate:
            parts.append(rng.choice(_SPECIAL_SENTENCES))
        else:
            parts.append(random_sentence(rng))
    sep = "\n\n" if rng.random() < 0.2 else " "
    return sep.join(parts)


def random_corpus(rng: random.Random, n_articles: int) -> Corpus:
    articles = []
    for i in range(n_articles):
        articles.append(
            Article(
                id=f"r{i:04d}",
                outlet=rng.choice(["Alpha Times", "Beta Buzz"]),
                media_type=rng.choice(list(MediaType)),
                published_at=date(rng.randint(2013, 2017), rng.randint(1, 12), rng.randint(1, 28)),
                headline=random_sentence(rng),
                body=random_body(rng),
                topic=rng.choice([None, "Politics", "Sports", "Health"]),
            )
        )
    return Corpus(articles=tuple(articles), source_path="random")
