"""Regenerate the conlleval fixtures and their expected scores.

Expected values come from seqeval (default mode, a port of conlleval's
chunking rules). Run from this directory: python3 generate.py
"""
import random

from seqeval.metrics.sequence_labeling import f1_score, get_entities, precision_score, recall_score

HAND = [
    # orphan I- tags, adjacent same-type entities, type switches
    (["O", "I-PER", "O", "O", "O", "I-ORG", "I-ORG", "I-ORG"],
     ["O", "B-PER", "O", "O", "O", "B-ORG", "I-ORG", "O"]),
    (["B-LOC", "B-LOC", "O", "B-PER", "I-PER"],
     ["B-LOC", "I-LOC", "O", "I-PER", "I-PER"]),
    (["B-PER", "I-PER", "I-PER", "O"],
     ["B-PER", "I-ORG", "I-PER", "O"]),
    (["S-LOC", "B-ORG", "E-ORG", "O", "S-PER"],
     ["S-LOC", "B-ORG", "I-ORG", "O", "E-PER"]),
    (["O", "O", "O"],
     ["I-LOC", "O", "B-PER"]),
    (["B-ORG", "E-ORG", "S-ORG", "S-ORG"],
     ["B-ORG", "E-ORG", "B-ORG", "E-ORG"]),
    (["I-PER", "I-LOC", "I-LOC", "O", "I-PER"],
     ["I-PER", "I-LOC", "I-ORG", "O", "O"]),
    (["B-PER", "I-PER", "E-PER", "B-PER", "E-PER"],
     ["B-PER", "I-PER", "I-PER", "I-PER", "E-PER"]),
]

TYPES = ["LOC", "ORG", "PER", "MISC"]


def random_tag(rng, prefixes):
    if rng.random() < 0.45:
        return "O"
    return rng.choice(prefixes) + "-" + rng.choice(TYPES[: rng.randint(1, 4)])


def random_pair(rng):
    sentences = []
    for _ in range(rng.randint(2, 6)):
        n = rng.randint(1, 15)
        gold_prefixes = rng.choice([["I"], ["B", "I"], ["B", "I", "E", "S"]])
        gold = [random_tag(rng, gold_prefixes) for _ in range(n)]
        pred = [g if rng.random() < 0.6 else random_tag(rng, ["B", "I", "E", "S"]) for g in gold]
        sentences.append((gold, pred))
    return sentences


def write_pair(index, sentences):
    name = f"{index:02d}"
    with open(f"{name}.txt", "w") as f:
        blocks = []
        for gold, pred in sentences:
            blocks.append("".join(f"w{i} {g} {p}\n" for i, (g, p) in enumerate(zip(gold, pred))))
        f.write("\n".join(blocks))
    golds = [g for g, _ in sentences]
    preds = [p for _, p in sentences]
    true = set(get_entities(golds))
    found = set(get_entities(preds))
    types = sorted({t for t, _, _ in true | found})
    rows = ["type,precision,recall,f1"]
    for t in types:
        tt = {e for e in true if e[0] == t}
        ft = {e for e in found if e[0] == t}
        c = len(tt & ft)
        p = c / len(ft) if ft else 0.0
        r = c / len(tt) if tt else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        rows.append(f"{t},{100 * p:.2f},{100 * r:.2f},{100 * f:.2f}")
    if types:
        p, r, f = precision_score(golds, preds), recall_score(golds, preds), f1_score(golds, preds)
        rows.append(f"ALL,{100 * p:.2f},{100 * r:.2f},{100 * f:.2f}")
    with open(f"{name}.expected.csv", "w") as f:
        f.write("\n".join(rows) + "\n")


def main():
    rng = random.Random(20)
    index = 1
    for gold, pred in HAND:
        write_pair(index, [(gold, pred)])
        index += 1
    while index <= 20:
        write_pair(index, random_pair(rng))
        index += 1


if __name__ == "__main__":
    main()
