"""Minimal CoNLL-U reader: sentence ids and word forms only.

The exporter needs just enough of the format to know, for every sentence,
its id and its surface tokens; parse trees stay on the probing side of the
file-format boundary.
"""


class ConlluError(ValueError):
    def __init__(self, message, line_no):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def read_sentences(text):
    """Yield (sentence_id, [form, ...]) from CoNLL-U text.

    Multiword ranges ("1-2") and empty nodes ("1.1") are skipped. A
    `# sent_id = ...` comment names the sentence; otherwise sentences are
    numbered sequentially from 0.
    """
    sentences = []
    forms = []
    sent_id = None
    fallback = 0

    def flush():
        nonlocal forms, sent_id, fallback
        if forms:
            sid = sent_id if sent_id is not None else str(fallback)
            sentences.append((sid, forms))
            fallback += 1
        forms = []
        sent_id = None

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id") and "=" in body:
                sent_id = body.split("=", 1)[1].strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 columns, got {len(cols)}", line_no)
        if "-" in cols[0] or "." in cols[0]:
            continue
        if not cols[0].isdigit():
            raise ConlluError(f"bad token id {cols[0]!r}", line_no)
        forms.append(cols[1])
    flush()
    return sentences
