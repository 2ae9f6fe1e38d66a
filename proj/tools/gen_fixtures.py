#!/usr/bin/env python3
# Copyright 2026 The lingctl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic test fixtures under tests/data.

The texts come from a small seeded grammar, so the files are stable across
runs and Python versions (random.Random with a fixed seed).
"""

import argparse
import json
import pathlib
import random

NOUNS = [
    "garden", "river", "teacher", "report", "city", "window", "system", "market", "child", "student",
    "computer", "problem", "answer", "story", "question", "table", "country", "family", "team", "plan",
    "house", "idea", "water", "light", "book", "letter", "road", "energy", "price", "method",
    "language", "picture", "morning", "village", "result", "company", "doctor", "bridge", "forest", "engine",
    "museum", "recipe", "budget", "festival", "library", "network", "ocean", "planet", "weather", "kitchen",
]
VERBS = [
    "build", "explain", "carry", "follow", "improve", "measure", "open", "change", "write", "describe",
    "reduce", "create", "protect", "visit", "support", "collect", "compare", "produce", "discover", "paint",
]
VERBS_PAST = [
    "built", "explained", "carried", "followed", "improved", "measured", "opened", "changed", "wrote", "described",
    "reduced", "created", "protected", "visited", "supported", "collected", "compared", "produced", "discovered",
    "painted",
]
ADJS = [
    "quiet", "bright", "simple", "careful", "large", "small", "green", "modern", "ancient", "useful",
    "strong", "gentle", "heavy", "rapid", "curious", "famous", "narrow", "honest", "cheerful", "complex",
]
ADVS = ["quickly", "often", "carefully", "rarely", "usually", "slowly", "finally", "really"]
DETS = ["the", "a", "every", "this", "that", "our", "their", "each"]
PREPS = ["in", "near", "across", "under", "behind", "with", "for", "from"]
NAMES = ["Maria", "Omar", "Chen", "Priya", "Lucas", "Amara", "Dr. Reyes", "Mr. Olsen"]
CONNECT = ["However,", "Meanwhile,", "Later,", "In the end,", "For example,", "Still,"]


def noun_phrase(rng):
    parts = [rng.choice(DETS)]
    if rng.random() < 0.5:
        parts.append(rng.choice(ADJS))
    if rng.random() < 0.1:
        parts.append(rng.choice(ADJS))
    parts.append(rng.choice(NOUNS))
    if rng.random() < 0.25:
        parts += [rng.choice(PREPS), rng.choice(DETS), rng.choice(NOUNS)]
    return " ".join(parts)


def sentence(rng):
    kind = rng.random()
    if kind < 0.12:
        subject = rng.choice(NAMES)
    else:
        subject = noun_phrase(rng)
    verb = rng.choice(VERBS_PAST)
    words = [subject]
    if rng.random() < 0.2:
        words.append(rng.choice(ADVS))
    words += [verb, noun_phrase(rng)]
    if rng.random() < 0.15:
        words.append(f"in {rng.randint(1850, 2024)}")
    if rng.random() < 0.1:
        words.append(f"for {rng.randint(2, 99)} days")
    text = " ".join(words)
    if rng.random() < 0.15:
        text = rng.choice(CONNECT) + " " + text[0].lower() + text[1:] if not text.startswith(("Dr.", "Mr.")) \
            else rng.choice(CONNECT) + " " + text
    if rng.random() < 0.08:
        text += ", and it was " + rng.choice(ADJS)
    if rng.random() < 0.05:
        text = "“" + text + "”"
    end = rng.choices([".", "!", "?", "…"], weights=[85, 6, 6, 3])[0]
    text = text[0].upper() + text[1:] + end
    return text


def paragraph(rng, sentences):
    return " ".join(sentence(rng) for _ in range(sentences))


def corpus(rng, n):
    rows = []
    for i in range(n):
        k = rng.choice([1, 1, 2, 3, 3, 4, 5, 6, 8, 10, 12])
        text = paragraph(rng, k)
        if rng.random() < 0.05:
            text += " It's the team’s well-known plan, e.g. a long-term one."
        rows.append({"id": f"c{i:04d}", "text": text})
    return rows


INSTRUCTIONS = [
    ("Describe the scene in a few sentences.", ""),
    ("Write a short story about the following topic.", "{noun}"),
    ("Explain how a {noun} works.", ""),
    ("Summarize the paragraph below.", "{para}"),
    ("Give advice to someone who wants to {verb} a {noun}.", ""),
    ("Compare a {noun} and a {noun2}.", ""),
    ("Rewrite the text so it sounds more {adj}.", "{para}"),
]


def instructions(rng, n):
    rows = []
    for i in range(n):
        template, inp = rng.choice(INSTRUCTIONS)
        fill = {
            "noun": rng.choice(NOUNS),
            "noun2": rng.choice(NOUNS),
            "verb": rng.choice(VERBS),
            "adj": rng.choice(ADJS),
            "para": paragraph(rng, 2),
        }
        output = paragraph(rng, rng.randint(2, 9))
        rows.append({
            "id": f"ex{i:03d}",
            "instruction": template.format(**fill),
            "input": inp.format(**fill),
            "output": output,
        })
    return rows


def dump_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"))
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    dump_jsonl(out / "corpus.jsonl", corpus(rng, 1000))
    dump_jsonl(out / "instructions.jsonl", instructions(rng, 100))


if __name__ == "__main__":
    main()
