"""
Parsing annotated papers and picking the target chapter
=======================================================

Raw papers are JSON records whose chapter text carries ``<FW>`` spans.
"""

from fwsmine.corpus import normalize_heading, paper_from_json, select_target_chapter

# headings are matched on stemmed words, so numbering and inflection don't matter
for raw in ["6 Conclusions and Future Work", "VII. Discussions", "Concluding remarks"]:
    print(f"{raw!r:35} -> {normalize_heading(raw).value}")

record = {
    "id": "demo-1", "venue": "ACL", "year": 2012,
    "chapters": [
        {"heading": "6 Conclusion", "text": "We presented a parser. It works well."},
        {"heading": "7 Future Work",
         "text": 'We thank Smith et al. for data. <FW type="Method">We plan to extend '
                 'the parser to other languages.</FW>'},
    ],
}
paper = paper_from_json(record)

# a future-work chapter beats a conclusion chapter
target = select_target_chapter(paper)
print("\ntarget chapter:", target.raw_heading)
for s in target.sentences:
    print(f"  fws={s.is_fws!s:5}  type={s.fws_type.value if s.fws_type else '-':7} {s.text}")
