#!/usr/bin/env python3
"""Regenerates tests/fixtures/lisbon_bank.json, the 120-clip desk fixture.

The output is deterministic; rerunning must leave the committed file unchanged.
"""
import json
import random
import sys

TOPICS = [
    "affordable housing", "social conditions", "rentals", "government",
    "families", "gentrification", "developers", "tourism", "transportation",
    "universities",
]

INTERVIEWEES = [
    ("i01", "Speaker 01", "government official"),
    ("i02", "Speaker 02", "government official"),
    ("i03", "Speaker 03", "resident displaced by gentrification"),
    ("i04", "Speaker 04", "resident displaced by gentrification"),
    ("i05", "Speaker 05", "community activist leader"),
    ("i06", "Speaker 06", "community activist leader"),
    ("i07", "Speaker 07", "journalist"),
    ("i08", "Speaker 08", "university scholar"),
    ("i09", "Speaker 09", "property developer"),
    ("i10", "Speaker 10", "short-term rental host"),
    ("i11", "Speaker 11", "tenant association member"),
    ("i12", "Speaker 12", "small business owner"),
    ("i13", "Speaker 13", "urban planner"),
    ("i14", "Speaker 14", "student"),
]

QUESTION_COUNT = 12
CLIP_COUNT = 120


def build(seed=2):
    rng = random.Random(seed)
    clips = []
    for n in range(CLIP_COUNT):
        speaker = INTERVIEWEES[n % len(INTERVIEWEES)][0]
        # Round-robin primary topic keeps every filter well stocked.
        primary = TOPICS[n % len(TOPICS)]
        extra = rng.sample([t for t in TOPICS if t != primary], rng.choice([0, 1, 1, 2, 2]))
        keywords = [primary] + extra
        if n == 0:
            duration = 18
        elif n == 1:
            duration = 74
        else:
            duration = rng.randint(18, 74)
        clip_id = "c%03d" % (n + 1)
        clips.append({
            "id": clip_id,
            "interviewee_id": speaker,
            "duration_s": duration,
            "keywords": keywords,
            "question_index": rng.randrange(QUESTION_COUNT),
            "media_uri": "media/lisbon/%s.mp4" % clip_id,
        })
    return {
        "topics": TOPICS,
        "interviewees": [
            {"id": i, "display_name": d, "role": r} for i, d, r in INTERVIEWEES
        ],
        "clips": clips,
        "source_notes": "Synthetic desk fixture shaped like the Lisbon clip bank: "
                        "14 interviewees, 10 filters, clips between 18 and 74 seconds.",
    }


if __name__ == "__main__":
    json.dump(build(), sys.stdout, indent=2)
    sys.stdout.write("\n")
