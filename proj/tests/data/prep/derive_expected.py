#!/usr/bin/env python3
# Copyright 2026 The Halluspan Authors.
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
"""Writes the preprocessing fixture and its expected outputs.

Each note is assembled from known section texts, so the expected dataset is
the section text with the literal rules applied by hand below.
"""
import json

SENTENCES = [
    "You were admitted to the hospital because you had trouble breathing.",
    "We found fluid in your lungs and gave you medicine to remove it.",
    "Your breathing improved over the next few days.",
    "Please weigh yourself every morning and call your doctor if your weight goes up.",
    "Take all of your medications as prescribed.",
    "Avoid salty foods because they make your body hold on to water.",
    "Your blood sugar was high, so we adjusted your insulin.",
    "You had a test of your heart that showed it is pumping a little weaker than normal.",
]

BHC = [
    "Patient presented with dyspnea and bilateral lower extremity edema. "
    "Diuresed with IV furosemide with good response. Transitioned to oral diuretic.",
    "Admitted for hyperglycemia. Insulin regimen uptitrated. A1c 9.2. Seen by diabetes team.",
    "Elective admission for monitoring after medication change. Telemetry unremarkable.",
]


def body(n_chars, offset):
    out, i = [], offset
    while len(" ".join(out)) < n_chars:
        out.append(SENTENCES[i % len(SENTENCES)])
        i += 1
    return " ".join(out)


def note(bhc, di, *, di_header="Discharge Instructions:", extra=""):
    return (
        "Name: ___ Unit No: ___\n\nChief Complaint:\nshortness of breath\n\n"
        f"Brief Hospital Course:\n{bhc}\n\nDischarge Medications:\n1. Furosemide 40 mg PO daily\n\n"
        f"{di_header}\n{di}\n{extra}"
    )


GREETING = "Dear Mr. ___,"

PARTS = {}
PARTS["n01"] = (BHC[0], GREETING + "\n" + body(420, 0))
PARTS["n02"] = (BHC[1], body(500, 1))
PARTS["n03"] = (BHC[2], "Mr. ___ was admitted to the hospital for a planned medication change. " + body(380, 2))
PARTS["n04"] = (BHC[0], body(450, 3))
PARTS["n05"] = (BHC[1], body(380, 4) + "\nWound care:\nKeep the incision clean and dry.")
PARTS["n06"] = (BHC[2], body(200, 5))
PARTS["n07"] = (BHC[0], None)
PARTS["n08"] = (BHC[1], body(60, 6))
PARTS["n09"] = (BHC[2], body(600, 7) + " At home Mr. ___ was asked to keep a food diary.")
PARTS["n10"] = (BHC[0], body(390, 1))

# n07: long enough before the greeting is removed, too short after it.
di7 = body(400, 2)[:344].rstrip() + "."
PARTS["n07"] = (BHC[0], GREETING + " " + di7)
assert len(PARTS["n07"][1]) >= 350 and len(di7) < 350

NOTES = []
for nid, (bhc, di) in PARTS.items():
    if nid == "n02":
        text = note(bhc, di, di_header="Patient Instructions:")
    elif nid == "n04":
        text = note(bhc, di, di_header="")
        text = text.replace("Discharge Medications:", "Medications:")
    elif nid == "n10":
        text = note(bhc, di, extra="\nFollowup Instructions:\nSee your cardiologist in ___ weeks.\n")
    else:
        text = note(bhc, di)
    NOTES.append({"note_id": nid, "text": text})

RULES = {
    "rules": [
        {"id": "greeting", "stage": 2, "kind": "prefix_strip", "pattern": GREETING},
        {"id": "surgical_template", "stage": 2, "kind": "template_reject", "pattern": "Wound care:"},
        {"id": "deid_you", "stage": 3, "kind": "pattern_replace", "pattern": "Mr. ___ was",
         "replacement": "you were", "icase": False},
        {"id": "min_length", "stage": 3, "kind": "length_filter", "param": 350},
    ]
}


def derive():
    kept, stats = [], []
    entered = {2: 0, 3: 0}
    rejected = {1: 0, 2: 0, 3: 0}
    transformed = {2: 0, 3: 0}
    for n in NOTES:
        bhc, di = PARTS[n["note_id"]]
        if n["note_id"] in ("n02", "n04"):
            rejected[1] += 1
            continue
        entered[2] += 1
        if di.startswith(GREETING):
            di = di[len(GREETING):].strip()
            transformed[2] += 1
        if "wound care:" in di.lower():
            rejected[2] += 1
            continue
        entered[3] += 1
        if "Mr. ___ was" in di:
            di = di.replace("Mr. ___ was", "you were")
            transformed[3] += 1
        if len(di) < 350:
            rejected[3] += 1
            continue
        kept.append({"id": n["note_id"], "context": bhc, "summary": di})
    stats = {
        "stages": [
            {"stage": 1, "name": "split_sections", "entered": len(NOTES), "rejected": rejected[1], "transformed": 0},
            {"stage": 2, "name": "greeting,surgical_template", "entered": entered[2], "rejected": rejected[2],
             "transformed": transformed[2]},
            {"stage": 3, "name": "deid_you,min_length", "entered": entered[3], "rejected": rejected[3],
             "transformed": transformed[3]},
        ],
        "kept": len(kept),
    }
    return kept, stats


def main():
    with open("notes.jsonl", "w", encoding="utf-8") as f:
        for n in NOTES:
            f.write(json.dumps(n, ensure_ascii=False) + "\n")
    with open("rules.json", "w", encoding="utf-8") as f:
        json.dump(RULES, f, indent=2)
        f.write("\n")
    kept, stats = derive()
    with open("expected_dataset.jsonl", "w", encoding="utf-8") as f:
        for d in kept:
            f.write(json.dumps(d, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open("expected_stats.json", "w", encoding="utf-8") as f:
        json.dump(stats, f, indent=2)
        f.write("\n")
    print([(s["entered"], s["rejected"], s["transformed"]) for s in stats["stages"]], stats["kept"])


if __name__ == "__main__":
    main()
