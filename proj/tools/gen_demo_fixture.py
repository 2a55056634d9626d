#!/usr/bin/env python3
"""Regenerates fixtures/demo/{dataset.jsonl,mock_script.json}.

The scripted responses are keyed on the exact text the agents place in their
prompts, so the demo run is fully determined:

  items 1-6   consistent from the start
  item 7      [+1, -1]            0.5   -> 1.0
  item 8      [-1, -1, +1]        1/3   -> 1.0
  item 9      [-1]                0.0   -> 1.0
  item 10     [whole, +1, -1, -1] 1/3   -> 2/3 -> 2/3 (never fixed)
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "demo"


def dump(value):
    return json.dumps(value, separators=(",", ":"), sort_keys=True, ensure_ascii=False)


def fence(text, style):
    if style == "fence":
        return "```json\n" + text + "\n```"
    if style == "prose":
        return "Here is my assessment.\n" + text + "\nLet me know if you need more."
    return text


ITEMS = [
    {
        "id": "demo-01",
        "reference": "The city council approved a new park on Monday. Construction will begin in April and cost two million dollars.",
        "sentences": ["The council approved a new park on Monday.", "Work starts in April."],
        "label": 5.0,
    },
    {
        "id": "demo-02",
        "reference": "Heavy rain flooded several roads in the valley overnight. Schools in the district stayed closed on Tuesday.",
        "sentences": ["Rain flooded roads in the valley.", "Schools stayed closed on Tuesday."],
        "label": 4.67,
    },
    {
        "id": "demo-03",
        "reference": "The museum opened an exhibit of early maps. It runs until the end of the summer.",
        "sentences": ["A museum exhibit of early maps opened."],
        "label": 5.0,
    },
    {
        "id": "demo-04",
        "reference": "A local bakery won a regional award for its sourdough. The owner has run the shop for twelve years.",
        "sentences": ["A bakery won a regional award.", "Its owner has run it for twelve years.", "The award was for sourdough."],
        "label": 4.33,
    },
    {
        "id": "demo-05",
        "reference": "The team signed a new goalkeeper on a three year contract. He previously played in the second division.",
        "sentences": ["The team signed a goalkeeper for three years."],
        "label": 5.0,
    },
    {
        "id": "demo-06",
        "reference": "The library extended its weekend hours. It will now close at eight in the evening.",
        "sentences": ["Weekend library hours were extended.", "It now closes at eight."],
        "label": 4.67,
    },
    {
        "id": "demo-07",
        "reference": "The bridge reopened after three months of repairs. Engineers replaced the deck and the railings.",
        "sentences": ["The bridge reopened after repairs.", "The repairs lasted six months."],
        "fixes": {1: "The repairs lasted three months."},
        "label": 3.0,
    },
    {
        "id": "demo-08",
        "reference": "The company reported higher sales in the third quarter. Profits fell because of rising costs.",
        "sentences": ["Sales dropped in the third quarter.", "Profits rose sharply.", "Costs went up."],
        "fixes": {0: "Sales rose in the third quarter.", 1: "Profits fell."},
        "label": 1.67,
    },
    {
        "id": "demo-09",
        "reference": "The festival was cancelled because of the storm warning. Organisers promised refunds to all ticket holders.",
        "sentences": ["The festival went ahead despite the storm."],
        "fixes": {0: "The festival was cancelled because of the storm."},
        "label": 1.0,
    },
    {
        "id": "demo-10",
        "reference": "The mayor announced a plan to plant five hundred trees. The first trees will be planted in the north district next spring.",
        "sentences": ["The mayor announced a tree plan.", "It covers five thousand trees.", "Planting starts this autumn."],
        "fixes": {1: "It covers five hundred trees."},
        "stuck": {2},
        "label": 2.33,
    },
]

STYLES = ["plain", "fence", "prose"]


def reason_for(item, idx, sentence, ok):
    tag = f"[{item['id']} s{idx + 1}]"
    if ok:
        return f"{tag} The sentence '{sentence}' is supported by the article."
    return f"{tag} The sentence '{sentence}' contradicts the article."


def main():
    rules = []
    dataset_lines = []
    call = 0

    def style():
        nonlocal call
        call += 1
        return STYLES[call % len(STYLES)]

    for item in ITEMS:
        dataset_lines.append(dump({
            "candidate": " ".join(item["sentences"]),
            "id": item["id"],
            "label": item["label"],
            "reference": item["reference"],
        }))
        fixes = item.get("fixes", {})
        stuck = item.get("stuck", set())
        sentences = list(item["sentences"])
        bad = set(fixes) | set(stuck)
        round_no = 1
        while True:
            entries = []
            marks = []
            if item["id"] == "demo-10" and round_no == 1:
                entries.append({"reason": "Overall, the summary mixes correct and incorrect details about the plan."})
                marks.append(-1)
            for i, s in enumerate(sentences):
                ok = i not in bad
                entries.append({"sentence": s, "reason": reason_for(item, i, s, ok)})
                marks.append(1 if ok else -1)
            consistent = all(m == 1 for m in marks)

            candidate = " ".join(sentences)
            rules.append({
                "match": "substring",
                "pattern": "## Summary ##\n" + candidate + "\n",
                "response": fence(dump({"is_consistent": consistent, "reason": entries}), style()),
            })
            block = ",\n".join("*" + json.dumps(e["reason"], ensure_ascii=False) for e in entries)
            amc = {"answer": marks} if round_no % 2 else {"reason": ["checked"] * len(marks), "answer": marks}
            rules.append({
                "match": "substring",
                "pattern": "## Attempt Answer ##:\n" + block + "\n",
                "response": fence(dump(amc), style()),
            })
            if consistent or round_no == 3:
                break

            listing = [{"reason": e["reason"], "sentence": e["sentence"]} for e in entries if "sentence" in e]
            improved = []
            new_sentences = []
            for i, s in enumerate(sentences):
                if i in fixes and i in bad:
                    new = fixes[i]
                else:
                    new = s
                improved.append({"sentence": s, "improved_sentence": new, "reason": listing[i]["reason"]})
                new_sentences.append(new)
            rules.append({
                "match": "substring",
                "pattern": "Sentences\n" + dump(listing) + "\n",
                "response": fence(dump(improved), style()),
            })
            bad = {i for i in bad if i not in fixes}
            sentences = new_sentences
            round_no += 1

    # Item 10 sees identical prompts in rounds 2 and 3; keep one rule each.
    seen = set()
    unique = []
    for r in rules:
        if r["pattern"] in seen:
            continue
        seen.add(r["pattern"])
        unique.append(r)

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "dataset.jsonl").write_text("\n".join(dataset_lines) + "\n", encoding="utf-8")
    (OUT / "mock_script.json").write_text(json.dumps(unique, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
