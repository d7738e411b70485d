"""Writes expected.json: the relation set the worked example enumerates.

Hand-written from the narrative of the example; does not run the engine.
"""
import json

EVENTS = {
    "event-1": ["childcare-act"],
    "event-2": ["news-bulgarian-fraud"],
    "event-3": ["book-frederik"],
    "event-4": ["book-frederik"],
    "event-5": ["ombudsman-report", "complaint-parent"] + [f"complaint-{i:03d}" for i in range(1, 201)],
    "event-6": ["book-frederik"],
    "event-7": ["email-palmen", "memo-palmen"],
    "event-8": ["email-forward"],
    "event-9": ["ombudsman-report", "judgement-council-of-state"],
}
TAX = "entity:tax-authorities"

relations = []


def rel(kind, a, b, a_kind, b_kind, directed):
    if not directed and b < a:
        a, b, a_kind, b_kind = b, a, b_kind, a_kind
    level = {("object", "object"): "TT", ("concept", "concept"): "EE"}.get((a_kind, b_kind), "TE")
    relations.append({"type": kind, "from": a, "to": b, "level": level})


for event, objects in EVENTS.items():
    for obj in objects:
        rel("ConsistsOf", event, obj, "concept", "object", True)
for a, b in [(1, 2), (2, 3), (3, 4), (4, 5)]:
    rel("Subject", f"event-{a}", f"event-{b}", "concept", "concept", False)
for a, b in [(3, 6), (6, 7), (7, 9)]:
    rel("Entity", f"event-{a}", f"event-{b}", "concept", "concept", False)
rel("Entity", TAX, "judgement-council-of-state", "concept", "object", False)
for e in (6, 7, 9):
    rel("Entity", TAX, f"event-{e}", "concept", "concept", False)
rel("Causal", "event-7", "event-8", "concept", "concept", True)
rel("Correspondence", "event-7", "event-8", "concept", "concept", False)
rel("Succession", "email-palmen", "email-forward", "object", "object", True)
rel("ReferencesTo", "email-palmen", "memo-palmen", "object", "object", True)
rel("ReferencesTo", "email-forward", "memo-palmen", "object", "object", True)
rel("TemporalSemantic", "event-6", "memo-palmen", "concept", "object", False)

relations.sort(key=lambda r: (r["type"], r["from"], r["to"]))
expected = {
    "events": [{"id": f"event-{i}", "ordinal": i} for i in range(1, 10)],
    "relations": relations,
}
with open("expected.json", "w") as f:
    json.dump(expected, f, indent=1)
    f.write("\n")
