#!/usr/bin/env python3
"""Regenerates the bundled toy corpus and benchmarks under data/.

Output is deterministic; the checked-in files were produced with the
defaults below. Articles are short template news stories built from a
pool of people, teams, places and numbers; reference summaries restate
facts from their article. Benchmark summaries are either faithful
restatements or carry one swapped fact (a name, place or number taken
from outside the article).
"""

import argparse
import json
import random
from pathlib import Path

PEOPLE = [
    "Guus Hiddink", "Maria Lopez", "Daniel Okafor", "Sophie Turner", "Kenji Watanabe",
    "Amelia Clarke", "Rafael Souza", "Ingrid Larsen", "Tomasz Nowak", "Priya Raman",
    "Lucas Moreau", "Hannah Weber", "Omar Haddad", "Chloe Martin", "Victor Petrov",
    "Elena Rossi", "Samuel Greene", "Aisha Bello", "Martin Keller", "Julia Novak",
]
TEAMS = [
    "Chelsea", "Leeds United", "Hull City", "Real Madrid", "Valencia", "Fenerbahce",
    "Sunderland", "Ajax", "Porto", "Celtic", "Benfica", "Lyon",
]
PLACES = [
    "Tampa", "Florida", "Madrid", "Istanbul", "Glasgow", "Lisbon", "Amsterdam",
    "Georgia", "South Carolina", "Nairobi", "Melbourne", "Toronto",
]
ORGS = [
    "the National Hurricane Center", "the city council", "the university",
    "the Football Association", "the health ministry", "the transport authority",
]
THINGS = [
    "a new stadium", "a flood barrier", "a research centre", "a rail link",
    "a youth academy", "a public library",
]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def sports_story(rng):
    coach, rival = rng.sample(PEOPLE, 2)
    home, away = rng.sample(TEAMS, 2)
    city = rng.choice(PLACES)
    day = rng.choice(DAYS)
    goals_home, goals_away = rng.randint(2, 5), rng.randint(0, 1)
    crowd = rng.randint(18, 75) * 1000
    years = rng.randint(3, 25)
    article = (
        f"{home} beat {away} {goals_home}-{goals_away} on {day} in front of {crowd} fans in {city}. "
        f"The win was the first home victory for {coach} since the coach arrived from {away}. "
        f"{coach}, who has spent {years} years in management, praised the defence after the match. "
        f"{rival}, the {away} manager, said his players had lost their focus in the second half. "
        f"The result leaves {home} in third place with eight games left in the season."
    )
    summary = (
        f"{home} beat {away} {goals_home}-{goals_away} in {city} on {day}. "
        f"{coach} praised the defence after the first home victory."
    )
    facts = {"person": coach, "team": home, "place": city, "number": str(goals_home)}
    return article, summary, facts


def weather_story(rng):
    place, other = rng.sample(PLACES, 2)
    org = rng.choice(ORGS[:1] + ORGS[2:])
    speed = rng.randint(35, 95)
    dist = rng.randint(120, 480)
    day = rng.choice(DAYS)
    article = (
        f"A tropical storm formed on {day} about {dist} miles west of {place}, said {org}. "
        f"The storm had maximum sustained winds of {speed} mph and was moving north. "
        f"Officials in {place} opened shelters and closed schools as a precaution. "
        f"Forecasters expect the storm to reach {other} by the weekend. "
        f"Little change in strength is expected over the next 48 hours."
    )
    summary = (
        f"A tropical storm formed {dist} miles west of {place} on {day}. "
        f"The storm has winds of {speed} mph and is expected to reach {other}."
    )
    facts = {"person": org, "team": other, "place": place, "number": str(speed)}
    return article, summary, facts


def civic_story(rng):
    mayor, engineer = rng.sample(PEOPLE, 2)
    place = rng.choice(PLACES)
    thing = rng.choice(THINGS)
    cost = rng.randint(12, 480)
    year = rng.randint(2019, 2030)
    article = (
        f"{mayor} announced on Tuesday that {place} will build {thing} costing {cost} million dollars. "
        f"Construction is scheduled to finish in {year}, according to the council. "
        f"{engineer}, the chief engineer on the project, said the design had been approved last month. "
        f"Critics argued that the money should be spent on housing instead. "
        f"{mayor} insisted the project would create hundreds of local jobs."
    )
    summary = (
        f"{mayor} said {place} will build {thing} costing {cost} million dollars. "
        f"Work should finish in {year}, said {engineer}."
    )
    facts = {"person": mayor, "team": engineer, "place": place, "number": str(cost)}
    return article, summary, facts


STORIES = [sports_story, weather_story, civic_story]


def corrupt(summary, facts, rng, article):
    """Swaps one fact of the summary for a value that is absent from the article."""
    kinds = [k for k in ("person", "place", "number", "team") if facts[k] in summary]
    kind = rng.choice(kinds)
    old = facts[kind]
    pool = {"person": PEOPLE, "place": PLACES, "team": TEAMS + PEOPLE, "number": None}[kind]
    for _ in range(100):
        new = str(rng.randint(2, 999)) if pool is None else rng.choice(pool)
        if new != old and new not in article:
            return summary.replace(old, new, 1)
    raise RuntimeError("could not corrupt summary")


def make_pairs(n, rng, prefix):
    pairs = []
    for i in range(n):
        article, summary, facts = STORIES[i % len(STORIES)](rng)
        pairs.append({"id": f"{prefix}-{i:03d}", "article": article, "summary": summary, "_facts": facts})
    return pairs


def make_benchmark(n, rng, prefix, schema):
    records = []
    for i, p in enumerate(make_pairs(n, rng, prefix)):
        consistent = i % 2 == 0
        summary = p["summary"] if consistent else corrupt(p["summary"], p["_facts"], rng, p["article"])
        rec = {"id": p["id"], "article": p["article"], "summary": summary}
        if schema == "factcc-test":
            rec["label"] = "consistent" if consistent else "inconsistent"
        elif schema == "summeval":
            rec["judgments"] = [5, 5, 5] if consistent else sorted(rng.choices([1, 2, 3, 4, 5], k=3))
            if not consistent and min(rec["judgments"]) == 5:
                rec["judgments"][0] = 3
        else:
            rec["judgments"] = [1, 1, 1] if consistent else [1, 0, rng.choice([0, 1])]
        records.append(rec)
    return records


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps({k: v for k, v in r.items() if not k.startswith("_")}, ensure_ascii=False) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=20221)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    write_jsonl(out / "toy_corpus.jsonl", make_pairs(50, rng, "toy"))
    write_jsonl(out / "toy_validation.jsonl", make_benchmark(20, rng, "val", "factcc-test"))
    write_jsonl(out / "toy_benchmark.jsonl", make_benchmark(20, rng, "fct", "factcc-test"))
    write_jsonl(out / "toy_summeval.jsonl", make_benchmark(12, rng, "se", "summeval"))
    write_jsonl(out / "toy_qags.jsonl", make_benchmark(12, rng, "qg", "qags-cnndm"))


if __name__ == "__main__":
    main()
