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
"""Writes the LLM replay corpus, the canned responses served by
mock_server.py, and the expected spans and diagnostics.

Expected spans are located by substring in the original summary. Alignment
confidence comes from a separate edit-distance computation below.
"""
import json

DOCS = [
    ("l01", "Admitted with chest pain. Troponins negative. Started aspirin.",
     "You were admitted for chest pain. We started you on aspirin and metoprolol."),
    ("l02", "Admitted for cellulitis of the left leg, treated with IV antibiotics.",
     "You were admitted for an infection of your left leg. You were treated with antibiotics."),
    ("l03", "Admitted for COPD exacerbation. Treated with steroids and nebulizers.",
     "You were admitted for trouble breathing. You were treated with steroids for 10 days at ___ Hospital."),
    ("l04", "Admitted for hypoglycemia. Glipizide stopped.",
     "You were admitted for low blood sugar. Please take your medictaions as prescribed."),
    ("l05", "Admitted for syncope. Echo normal.",
     "You were admitted after you fainted. Your heart ultrasound was normal."),
    ("l06", "Admitted for GI bleed. EGD showed ulcer. Started pantoprazole.",
     "You were admitted for bleeding from your stomach. We started you on omeprazole twice a day."),
    ("l07", "Admitted for pneumonia, treated with levofloxacin.",
     "You were admitted for pneumonia. You were treated with antibiotics for 5 days."),
    ("l08", "Admitted for hyperkalemia. Lisinopril held.",
     "You were admitted for high potassium. Please take 20 mg of lisinopril daily."),
    ("l09", "Admitted after a fall. PT recommended a walker.",
     "You were admitted after a fall at home. You went home with a walker and physical therapy."),
    ("l10", "Admitted for UTI. Seen by Dr. ___ from urology.",
     "You were admitted for a urine infection. Dr. ___ from urology saw you in the clinic."),
]

EXEMPLARS = [
    {"id": "x1", "context": "Admitted for CHF exacerbation. Diuresed with furosemide.",
     "summary": "You were admitted for heart failure. We gave you furosemide and started metolazone.",
     "spans": [("metolazone", "unsupported_medication")]},
    {"id": "x2", "context": "Admitted for DKA. Insulin drip, transitioned to glargine 20 units.",
     "summary": "You were admitted for high blood sugar. You now take 30 units of glargine at night.",
     "spans": [("30 units", "contradicted_fact")]},
    {"id": "x3", "context": "Admitted for alcohol withdrawal. Treated with benzodiazepines.",
     "summary": "You were admitted for alcohol withdrawal and were treated with medicines to calm you.",
     "spans": []},
    {"id": "x4", "context": "Admitted for AKI. Creatinine improved with fluids.",
     "summary": "You were admitted for kidney injury. Your kidney function improved with fluids on Tuesday.",
     "spans": [("on Tuesday", "unsupported_time")]},
]

HEADER = "AVS WITH ERRORS LABELED:\n"


def tag(text, cls=None):
    return f'<error class="{cls}">{text}</error>' if cls else f"<error>{text}</error>"


def summary(doc_id):
    return next(s for i, _, s in DOCS if i == doc_id)


# (response, [(substring in original, class)], expectations)
CASES = {}
s = summary("l01")
CASES["l01"] = (HEADER + s.replace("metoprolol", tag("metoprolol", "unsupported_medication")),
                [("metoprolol", "unsupported_medication")], {})
CASES["l02"] = ("ERRORS:\n- none\n\n" + HEADER + summary("l02"), [], {"errors_list": "- none"})
s = summary("l03")
CASES["l03"] = (HEADER + s.replace("10 days", tag("10 days", "unsupported_time"))
                .replace("___ Hospital", tag("___ Hospital", "unsupported_location")),
                [("10 days", "unsupported_time"), ("___ Hospital", "unsupported_location")], {})
s = summary("l04")
CASES["l04"] = (HEADER + s.replace("medictaions", tag("medications", "incorrect_fact")),
                [("medictaions", "incorrect_fact")], {"rewrite": s.replace("medictaions", "medications")})
s = summary("l05")
CASES["l05"] = (HEADER + s.replace("heart ultrasound", '<error class="unsupported_procedure">heart ultrasound'),
                [], {"error": "MalformedTag"})
s = summary("l06")
CASES["l06"] = ('ERRORS:\n- "omeprazole" (contradicted_fact)\n- "twice a day" (unsupported_other)\n\n' + HEADER +
                s.replace("omeprazole", tag("omeprazole", "contradicted_fact"))
                .replace("twice a day", tag("twice a day", "unsupported_other")),
                [("omeprazole", "contradicted_fact"), ("twice a day", "unsupported_other")],
                {"errors_list": '- "omeprazole" (contradicted_fact)\n- "twice a day" (unsupported_other)'})
s = summary("l07")
CASES["l07"] = (s.replace("5 days", tag("5 days", "unsupported_time")) + "\n",
                [("5 days", "unsupported_time")], {"header_missing": True})
s = summary("l08")
CASES["l08"] = (HEADER + s.replace("20 mg", tag("20 mg", "unsupported_dose")),
                [("20 mg", "unsupported_other")], {"unknown_class": "unsupported_dose"})
s = summary("l09")
CASES["l09"] = (HEADER + s.replace("at home.", "at home " + tag("during a storm", "unsupported_condition") + ".")
                .replace("physical therapy", tag("physical therapy", "unsupported_procedure")),
                [("physical therapy", "unsupported_procedure")], {"dropped": 1})
s = summary("l10")
CASES["l10"] = (HEADER + s.replace("in the clinic", tag("in the clinic")),
                [("in the clinic", "unsupported_other")], {"classless": True})


def char_offset(text, sub):
    """Codepoint offset of sub in text (texts here are ASCII)."""
    i = text.index(sub)
    return i, i + len(sub)


def align_score(a, b):
    """Minimum edit cost, then maximum matches, over monotone alignments."""
    n, m = len(a), len(b)
    inf = (10 ** 9, 0)
    best = [[inf] * (m + 1) for _ in range(n + 1)]
    best[0][0] = (0, 0)
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            cands = []
            if i and j:
                c, k = best[i - 1][j - 1]
                cands.append((c, k + 1) if a[i - 1] == b[j - 1] else (c + 1, k))
            if i:
                c, k = best[i - 1][j]
                cands.append((c + 1, k))
            if j:
                c, k = best[i][j - 1]
                cands.append((c + 1, k))
            best[i][j] = min(cands, key=lambda t: (t[0], -t[1]))
    return best[n][m]


def labeled_text(response):
    pos = response.rfind(HEADER.strip())
    body = response if pos < 0 else response[pos + len(HEADER.strip()):]
    return body.strip()


def expected(doc_id):
    response, spans, notes = CASES[doc_id]
    original = summary(doc_id)
    out_spans = []
    for sub, cls in spans:
        a, b = char_offset(original, sub)
        out_spans.append({"start": a, "end": b, "class": cls})
    diag = {"doc_id": doc_id, "ok": "error" not in notes, "error": notes.get("error"),
            "header_missing": bool(notes.get("header_missing")), "errors_list": notes.get("errors_list", ""),
            "dropped": notes.get("dropped", 0)}
    warnings = []
    labeled = labeled_text(response)
    if notes.get("header_missing"):
        warnings.append("labeled summary header missing; parsed whole response")
    if "unknown_class" in notes:
        at = labeled.index("<error")
        warnings.append(f"error tag at character {at} has unknown class '{notes['unknown_class']}'; "
                        "using unsupported_other")
    if notes.get("classless"):
        at = labeled.index("<error")
        warnings.append(f"error tag at character {at} has no class; using unsupported_other")
    diag["warnings"] = warnings
    if diag["ok"]:
        plain = labeled
        for cls_tag in ("</error>",):
            plain = plain.replace(cls_tag, "")
        import re
        plain = re.sub(r'<error( class="[^"]*")?>', "", plain)
        cost, matched = align_score(plain, original)
        diag["confidence"] = matched / max(len(plain), len(original))
    else:
        diag["confidence"] = None
        out_spans = []
    return {"doc_id": doc_id, "annotator": "gpt-4", "spans": out_spans}, diag


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    write_jsonl("corpus.jsonl", [{"id": i, "context": c, "summary": s} for i, c, s in DOCS])
    exemplars = []
    for ex in EXEMPLARS:
        spans = []
        for sub, cls in ex["spans"]:
            a, b = char_offset(ex["summary"], sub)
            spans.append({"start": a, "end": b, "class": cls})
        exemplars.append(dict(ex, spans=spans))
    write_jsonl("exemplars.jsonl", exemplars)
    with open("responses.json", "w", encoding="utf-8") as f:
        json.dump({i: CASES[i][0] for i, _, _ in DOCS}, f, indent=2)
        f.write("\n")
    sets, diags = zip(*(expected(i) for i, _, _ in DOCS))
    write_jsonl("expected.jsonl", sets)
    write_jsonl("expected_diagnostics.jsonl", diags)
    for d in diags:
        print(d["doc_id"], d["ok"], d["confidence"], d["warnings"])


if __name__ == "__main__":
    main()
