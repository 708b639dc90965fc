#!/usr/bin/env python3
"""Regenerates fixtures/bilingual-site: two mirrored hosts, one English and
one Greek, 500 documents in total. Deterministic; rerun after editing."""

import random
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parent / "bilingual-site"
rng = random.Random(20070601)

TOPICS = {
    "en": {
        "host": "www.lexis-demo.org",
        "page_word": "page",
        "home": "Lexis demo library",
        "filler": "the of and a to in is for on with as by at from that this it are be was an or which".split(),
        "sections": {
            "astronomy": "star galaxy planet telescope orbit comet nebula moon solar eclipse astronomer cosmic gravity light".split(),
            "cooking": "recipe oven flour butter sauce garlic onion bake roast pepper kitchen salt dough soup".split(),
            "football": "goal match league striker referee stadium penalty coach team season keeper tactics ball pitch".split(),
            "databases": "query index table transaction join schema tuple relation storage btree record commit lock cursor".split(),
            "music": "melody rhythm guitar piano chord orchestra concert harmony tempo singer violin jazz scale note".split(),
        },
    },
    "el": {
        "host": "www.lexis-demo.gr",
        "page_word": "σελίδα",
        "home": "Βιβλιοθήκη επίδειξης",
        "filler": "και το της του η ο σε με για από που να είναι στο στην ένα μια τα οι".split(),
        "sections": {
            "astronomia": "αστέρι γαλαξίας πλανήτης τηλεσκόπιο τροχιά κομήτης νεφέλωμα σελήνη ήλιος έκλειψη αστρονόμος ουρανός βαρύτητα φως".split(),
            "mageiriki": "συνταγή φούρνος αλεύρι βούτυρο σάλτσα σκόρδο κρεμμύδι ψήσιμο πιπέρι κουζίνα αλάτι ζύμη σούπα λάδι".split(),
            "podosfairo": "γκολ αγώνας πρωτάθλημα επιθετικός διαιτητής γήπεδο πέναλτι προπονητής ομάδα σεζόν τερματοφύλακας τακτική μπάλα".split(),
            "vaseis": "ερώτημα ευρετήριο πίνακας συναλλαγή σχήμα πλειάδα σχέση αποθήκευση εγγραφή δέσμευση κλείδωμα δρομέας δεδομένα".split(),
            "mousiki": "μελωδία ρυθμός κιθάρα πιάνο συγχορδία ορχήστρα συναυλία αρμονία τέμπο τραγουδιστής βιολί τζαζ κλίμακα νότα".split(),
        },
    },
}

# pages per section; with the 2 home pages and 10 section pages this makes 500
COUNTS = [49, 49, 49, 49, 49, 49, 49, 49, 48, 48]

# pages whose anchor-text weighting the acceptance check recomputes by hand
SPECIAL = {
    ("en", "astronomy", 0): (
        "Telescope guide",
        "light light light light telescope mirror telescope lens",
    ),
    ("el", "astronomia", 0): (
        "Ο ουρανός τη νύχτα",
        "ουρανός ουρανός ουρανός πλανήτης αστέρι",
    ),
}
# (source section, source page, anchor text, target key)
SPECIAL_LINKS = [
    ("en", "astronomy", 1, "telescope guide", ("en", "astronomy", 0)),
    ("en", "astronomy", 2, "telescope basics", ("en", "astronomy", 0)),
    ("el", "astronomia", 1, "ο πλανήτης", ("el", "astronomia", 0)),
    ("el", "astronomia", 2, "κάθε πλανήτης", ("el", "astronomia", 0)),
    ("en", "astronomy", 3, "another planet", ("el", "astronomia", 0)),
    ("en", "astronomy", 4, "πλανήτης and stars", ("el", "astronomia", 0)),
]


def sentence(words, filler, n):
    return " ".join(rng.choice(words) if rng.random() < 0.55 else rng.choice(filler) for _ in range(n))


def main():
    if ROOT.exists():
        shutil.rmtree(ROOT)
    pages = []  # (lang, section, i, path, title, words)
    n = 0
    for lang, spec in TOPICS.items():
        for section, words in spec["sections"].items():
            count = COUNTS[n]
            n += 1
            for i in range(count):
                ext = "txt" if i % 7 == 6 else "html"
                path = f"{section}/p{i:02d}.{ext}"
                title = " ".join(rng.sample(words, 2)).capitalize()
                pages.append((lang, section, i, path, title, words))

    def url(lang, path):
        return f"http://{TOPICS[lang]['host']}/{path}"

    by_key = {(p[0], p[1], p[2]): p for p in pages}
    targets = [p for p in pages if (p[0], p[1], p[2]) not in SPECIAL]
    special_out = {}
    for src_lang, src_section, src_i, anchor, target in SPECIAL_LINKS:
        t = by_key[target]
        special_out.setdefault((src_lang, src_section, src_i), []).append((url(t[0], t[3]), anchor))

    for lang, section, i, path, title, words in pages:
        filler = TOPICS[lang]["filler"]
        key = (lang, section, i)
        if key in SPECIAL:
            title, body = SPECIAL[key]
        else:
            body = "\n".join(sentence(words, filler, rng.randint(8, 18)) for _ in range(rng.randint(3, 8)))
        links = []
        for t in [] if key in SPECIAL else rng.sample(targets, 3):
            if rng.random() < 0.7:
                same = [p for p in targets if p[0] == lang and p[1] == section]
                t = rng.choice(same)
            anchor = " ".join(rng.sample(t[5], 2))
            links.append((url(t[0], t[3]), anchor))
        links += special_out.get(key, [])
        file = ROOT / TOPICS[lang]["host"] / path
        file.parent.mkdir(parents=True, exist_ok=True)
        if path.endswith(".txt"):
            file.write_text(f"{title}\n\n{body}\n", encoding="utf-8")
            Path(str(file) + ".links").write_text(
                "".join(f"{u}\t{a}\n" for u, a in links), encoding="utf-8"
            )
        else:
            anchors = "\n".join(f'<li><a href="{u}">{a}</a></li>' for u, a in links)
            paragraphs = "\n".join(f"<p>{line}</p>" for line in body.split("\n"))
            heading = "" if key in SPECIAL else f"<h1>{title}</h1>\n"
            listing = f"<ul>\n{anchors}\n</ul>\n" if links else ""
            file.write_text(
                f"<html><head><title>{title}</title></head><body>\n{heading}"
                f"{paragraphs}\n{listing}</body></html>\n",
                encoding="utf-8",
            )

    for lang, spec in TOPICS.items():
        host = ROOT / spec["host"]
        sections = list(spec["sections"])
        other = "el" if lang == "en" else "en"
        home_links = "\n".join(f'<li><a href="/{s}/">{s}</a></li>' for s in sections)
        home_links += f'\n<li><a href="http://{TOPICS[other]["host"]}/">{TOPICS[other]["home"]}</a></li>'
        (host / "index.html").write_text(
            f"<html><head><title>{spec['home']}</title></head><body>\n<h1>{spec['home']}</h1>\n<ul>\n{home_links}\n</ul>\n</body></html>\n",
            encoding="utf-8",
        )
        for s in sections:
            items = [p for p in pages if p[0] == lang and p[1] == s]
            li = "\n".join(
                f'<li><a href="{p[3].split("/", 1)[1]}">{spec["page_word"]} {p[2] + 1}</a></li>' for p in items
            )
            (host / s / "index.html").write_text(
                f"<html><head><title>{s}</title></head><body>\n<h1>{s}</h1>\n<ul>\n{li}\n</ul>\n</body></html>\n",
                encoding="utf-8",
            )
    total = sum(1 for f in ROOT.rglob("*") if f.is_file() and not f.name.endswith(".links"))
    print(f"wrote {total} documents under {ROOT}")


if __name__ == "__main__":
    main()
