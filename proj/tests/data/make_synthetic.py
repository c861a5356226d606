#!/usr/bin/env python3
"""Regenerates synthetic_reviews.csv, a 200-row review dump in the Kaggle layout.

Three games are review-bombed (high metascore, user scores mostly 0-1),
four are not. A few rows exercise the ingest edge cases: "tbd" scores,
one malformed score and a handful of Spanish reviews.

    python3 make_synthetic.py > synthetic_reviews.csv
"""

import csv
import random
import sys

rng = random.Random(20190401)

HEADER = [
    "Game Title",
    "Game Release Date",
    "Overall Metascore",
    "Overall User Rating",
    "Reviewer Type",
    "Rating Given By The Reviewer",
    "Review",
    "Review Date",
]

BOMB_SENTENCES = [
    "I want my money back because the company lied to all of us.",
    "Blizzard used to care about the players but now it is all about money.",
    "This is a cash grab and they should give everyone a refund.",
    "Activision ruined a classic and I will never spend another cent on them.",
    "The original was so much better than this garbage remaster.",
    "They made a promise to the fans and broke it, what a shame.",
    "Terrible decision by the company, the whole thing is a lie.",
    "Do not buy this, it is trash and the developers do not listen.",
    "My childhood game was destroyed for more money, disgusting.",
    "Rockstar keeps adding paid content instead of fixing the game.",
    "I had hope for this one but it is just another false promise.",
    "Zero out of ten until they remove the store and give us a refund.",
]

GOOD_SENTENCES = [
    "The story is great and the characters are easy to care about.",
    "I really enjoy the combat, it feels smooth and rewarding.",
    "Beautiful graphics and a wonderful soundtrack make this a joy.",
    "The levels are well designed and the puzzles are clever.",
    "I have played for forty hours and I am still having fun.",
    "The controls are tight and the boss fights are memorable.",
    "A fantastic sequel that improves on almost everything.",
    "The world is huge and there is always something new to explore.",
    "My friends and I have been playing the multiplayer every night.",
    "It runs well on my machine and the art style is lovely.",
]

MIXED_SENTENCES = [
    "The game is fine but the menus could be better.",
    "Some parts are slow, yet the ending was worth the wait.",
    "It is a decent game with a few annoying bugs.",
]

SPANISH = [
    "El juego es muy malo y los desarrolladores no escuchan a nadie.",
    "No compren este juego, es una estafa total para los jugadores.",
    "Una gran decepción, quiero que me devuelvan mi dinero ahora.",
]

CRITIC_SENTENCES = [
    "A polished and confident release that understands its audience.",
    "The campaign is ambitious and mostly delivers on its promise.",
    "An accomplished design with only minor pacing problems.",
]


def text(pool, n):
    return " ".join(rng.sample(pool, n))


def date(year, month, day):
    return f"{year:04d}-{month:02d}-{day:02d}"


def main():
    rows = []

    bombed = [
        ("Starfall Legends", 2019, 88),
        ("Crown of Embers", 2020, 90),
        ("Iron Tide Remastered", 2020, 86),
    ]
    normal = [
        ("Harbor Lights", 2018, 78),
        ("Quiet Meadow", 2019, 74),
        ("Neon Drift", 2020, 81),
        ("Copper Valley", 2021, 70),
    ]

    for title, year, meta in bombed:
        for i in range(3):
            rows.append([title, date(year, 3, 1), meta, "", "Critic", meta + rng.randint(-4, 4),
                         text(CRITIC_SENTENCES, 2), date(year, 3, 2 + i)])
        for i in range(36):
            if i % 9 == 8:
                score, review = rng.randint(7, 10), text(GOOD_SENTENCES, 2)
            elif i % 6 == 5:
                score, review = rng.randint(2, 6), text(MIXED_SENTENCES + BOMB_SENTENCES[:3], 2)
            else:
                score, review = rng.randint(0, 1), text(BOMB_SENTENCES, 2)
            rows.append([title, date(year, 3, 1), meta, "", "User", score, review, date(year, 4, 1 + i % 28)])
        rows.append([title, date(year, 3, 1), meta, "", "User", 0, rng.choice(SPANISH), date(year, 4, 3)])

    for title, year, meta in normal:
        for i in range(3):
            rows.append([title, date(year, 6, 1), meta, "", "Critic", meta + rng.randint(-5, 5),
                         text(CRITIC_SENTENCES, 2), date(year, 6, 2 + i)])
        for i in range(16):
            if i % 8 == 7:
                score, review = rng.randint(0, 2), text(MIXED_SENTENCES + BOMB_SENTENCES[6:8], 2)
            else:
                score, review = rng.randint(6, 10), text(GOOD_SENTENCES, 2)
            rows.append([title, date(year, 6, 1), meta, "", "User", score, review, date(year, 7, 1 + i % 28)])

    # Ingest edge cases.
    rows.append(["Quiet Meadow", date(2019, 6, 1), 74, "", "User", "tbd", "Not rated yet.", date(2019, 8, 1)])
    rows.append(["Neon Drift", date(2020, 6, 1), 81, "", "User", "tbd", "tbd", date(2020, 8, 1)])
    rows.append(["Harbor Lights", date(2018, 6, 1), 78, "", "User", "eleven", "Great fun.", date(2018, 8, 1)])
    rows.append(["Copper Valley", date(2021, 6, 1), 70, "", "User", 3, rng.choice(SPANISH), date(2021, 8, 1)])

    while len(rows) < 200:
        title, year, meta = normal[len(rows) % len(normal)]
        rows.append([title, date(year, 6, 1), meta, "", "User", rng.randint(6, 10), text(GOOD_SENTENCES, 2),
                     date(year, 9, 1 + len(rows) % 28)])

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(rows[:200])


if __name__ == "__main__":
    main()
