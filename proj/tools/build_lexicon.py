#!/usr/bin/env python3
"""Convert a Brill-format lexicon (``word TAG [TAG...]``) into the
``word<TAB>TAG`` file read by idealize's lexicon tagger.

The first tag of each Brill entry is its most frequent one. Penn tags are
collapsed onto NOUN / ADJ / VERB / OTHER and words are case-folded; a
lowercase entry wins over a capitalized one. Entries from an optional
supplement file (already in output format) override the converted ones.

    python3 tools/build_lexicon.py en-lexicon.txt core/data/lexicon_supplement.tsv \
        > core/data/lexicon_en.tsv
"""

import re
import sys

WORD = re.compile(r"^[a-z][a-z'-]*$")


def coarse(tag):
    if tag.startswith("NN"):
        return "NOUN"
    if tag.startswith("JJ"):
        return "ADJ"
    if tag.startswith("VB") or tag == "MD":
        return "VERB"
    return "OTHER"


def main(argv):
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    lower, capitalized = {}, {}
    with open(argv[1], encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;") or not line.strip():
                continue
            parts = line.split()
            if len(parts) < 2:
                continue
            word, tag = parts[0], parts[1]
            folded = word.lower()
            if not WORD.match(folded):
                continue
            target = lower if word == folded else capitalized
            target.setdefault(folded, coarse(tag))
    merged = dict(capitalized)
    merged.update(lower)
    if len(argv) > 2:
        with open(argv[2], encoding="utf-8") as f:
            for line in f:
                if line.startswith("#") or not line.strip():
                    continue
                word, tag = line.rstrip("\n").split("\t")
                merged[word] = tag
    out = sys.stdout
    out.write("# Derived from Brill's tagger lexicon v1.14 (Brown corpus + Penn Treebank,\n")
    out.write("# MIT license, as redistributed with TextBlob/Pattern), coarse tags,\n")
    out.write("# case-folded, plus lexicon_supplement.tsv.\n")
    for word in sorted(merged):
        out.write(f"{word}\t{merged[word]}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
