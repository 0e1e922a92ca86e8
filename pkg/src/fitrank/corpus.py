"""Documents, lexicons and candidate-term extraction.

Candidate terms are found by a greedy longest-match scan of a document's
tokens against a lexicon. Pre-extracted candidates (for instance the output
of a concept tagger) can be injected instead with :func:`import_candidates`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*")


class LexiconError(ValueError):
    """Malformed lexicon file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateEntryError(LexiconError):
    pass


class CandidateValidationError(ValueError):
    pass


class Token(NamedTuple):
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into lowercased alphanumeric tokens with char offsets.

    Hyphens and apostrophes are kept when they sit between two alphanumeric
    runs ("non-Hodgkin", "crohn's"); every other character separates tokens.
    """
    return [Token(m.group().lower(), m.start(), m.end()) for m in TOKEN_RE.finditer(text)]


def normalize(text: str) -> tuple[str, ...]:
    return tuple(t.text for t in tokenize(text))


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    tokens: tuple[str, ...] = field(init=False)
    offsets: tuple[tuple[int, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        toks = tokenize(self.text)
        object.__setattr__(self, "tokens", tuple(t.text for t in toks))
        object.__setattr__(self, "offsets", tuple((t.start, t.end) for t in toks))


class Corpus:
    """An ordered, non-empty collection of documents with unique ids."""

    def __init__(self, documents: Iterable[Document]):
        self.documents = tuple(documents)
        if not self.documents:
            raise ValueError("a corpus needs at least one document")
        self._by_id = {}
        for doc in self.documents:
            if doc.doc_id in self._by_id:
                raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
            self._by_id[doc.doc_id] = doc
        self._ngram_sets: dict[int, list[set]] = {}

    @property
    def N(self) -> int:
        return len(self.documents)

    def __len__(self):
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __contains__(self, doc) -> bool:
        doc_id = doc.doc_id if isinstance(doc, Document) else doc
        return doc_id in self._by_id

    def __getitem__(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    def document_frequency(self, term: Sequence[str]) -> int:
        """Number of documents containing ``term`` as a contiguous token run."""
        term = tuple(term)
        n = len(term)
        if n not in self._ngram_sets:
            self._ngram_sets[n] = [_ngrams(doc.tokens, n) for doc in self.documents]
        return sum(1 for grams in self._ngram_sets[n] if term in grams)


def _ngrams(tokens, n):
    return {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}


def read_documents(path) -> list[Document]:
    """Read a JSONL corpus file; may return an empty list."""
    docs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                docs.append(Document(str(rec["doc_id"]), rec["text"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus record ({exc})") from exc
    return docs


def load_corpus(path) -> Corpus:
    return Corpus(read_documents(path))


@dataclass(frozen=True)
class LexiconEntry:
    term_tokens: tuple[str, ...]
    familiarity: float | None = None
    semantic_types: frozenset[str] = frozenset()
    vocab_member: bool = False

    def __post_init__(self):
        if not self.term_tokens:
            raise ValueError("lexicon term has no tokens")
        if self.familiarity is not None and not 0.0 <= self.familiarity <= 1.0:
            raise ValueError(f"familiarity {self.familiarity} outside [0, 1]")


class Lexicon:
    """Lexicon entries keyed by their normalized token sequence."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self._entries: dict[tuple[str, ...], LexiconEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexiconEntry):
        if entry.term_tokens in self._entries:
            raise DuplicateEntryError(f"duplicate term {' '.join(entry.term_tokens)!r}")
        self._entries[entry.term_tokens] = entry

    @property
    def max_length(self) -> int:
        return max((len(k) for k in self._entries), default=0)

    def get(self, tokens, default=None):
        return self._entries.get(tuple(tokens), default)

    def __contains__(self, tokens) -> bool:
        return tuple(tokens) in self._entries

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)


def load_lexicon(path) -> Lexicon:
    """Parse the 4-column lexicon TSV.

    Columns: term, familiarity (may be empty), semicolon-separated semantic
    types (may be empty), vocab_member flag (0/1). ``#`` starts a comment line.
    """
    lexicon = Lexicon()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise LexiconError(f"expected 4 tab-separated columns, got {len(cols)}", lineno)
            term, fam, types, member = cols
            tokens = normalize(term)
            if not tokens:
                raise LexiconError(f"term {term!r} has no tokens", lineno)
            familiarity = None
            if fam.strip():
                try:
                    familiarity = float(fam)
                except ValueError:
                    raise LexiconError(f"familiarity {fam!r} is not a number", lineno) from None
                if not 0.0 <= familiarity <= 1.0:
                    raise LexiconError(f"familiarity {familiarity} outside [0, 1]", lineno)
            if member.strip() not in ("0", "1"):
                raise LexiconError(f"vocab_member must be 0 or 1, got {member!r}", lineno)
            sem = frozenset(t.strip() for t in types.split(";") if t.strip())
            entry = LexiconEntry(tokens, familiarity, sem, member.strip() == "1")
            try:
                lexicon.add(entry)
            except DuplicateEntryError as exc:
                raise DuplicateEntryError(str(exc), lineno) from None
    return lexicon


@dataclass(frozen=True)
class CandidateTerm:
    term_id: str
    surface_tokens: tuple[str, ...]
    occurrences: tuple[tuple[int, int], ...]
    lexicon_ref: LexiconEntry | None = None

    @property
    def tf(self) -> int:
        return len(self.occurrences)

    @property
    def first_position(self) -> int:
        return self.occurrences[0][0]


def _aggregate(matches, lexicon=None) -> list[CandidateTerm]:
    spans: dict[tuple[str, ...], list[tuple[int, int]]] = {}
    for tokens, span in matches:
        spans.setdefault(tokens, []).append(span)
    cands = []
    for tokens, occ in spans.items():
        occ = sorted(set(occ))
        ref = lexicon.get(tokens) if lexicon is not None else None
        cands.append(CandidateTerm(" ".join(tokens), tokens, tuple(occ), ref))
    cands.sort(key=lambda c: c.occurrences[0])
    return cands


def extract_candidates(doc: Document, lexicon: Lexicon) -> list[CandidateTerm]:
    """Greedy left-to-right longest-match scan of ``doc`` against ``lexicon``."""
    if not len(lexicon):
        raise ValueError("lexicon is empty")
    tokens = doc.tokens
    longest = lexicon.max_length
    matches = []
    i = 0
    while i < len(tokens):
        for n in range(min(longest, len(tokens) - i), 0, -1):
            gram = tokens[i:i + n]
            if gram in lexicon:
                matches.append((gram, (i, i + n)))
                i += n
                break
        else:
            i += 1
    return _aggregate(matches, lexicon)


def import_candidates(doc: Document, path, lexicon: Lexicon | None = None) -> list[CandidateTerm]:
    """Build candidates from a JSONL file of ``{"term", "spans"}`` records.

    Every span is checked against the document's tokens.
    """
    matches = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                rec = json.loads(line)
                term, spans = rec["term"], rec["spans"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CandidateValidationError(f"{where}: bad record ({exc})") from exc
            tokens = normalize(term)
            if not tokens:
                raise CandidateValidationError(f"{where}: term {term!r} has no tokens")
            for span in spans:
                start, end = span
                if not (0 <= start < end <= len(doc.tokens)):
                    raise CandidateValidationError(
                        f"{where}: span {span} out of range for document {doc.doc_id!r}")
                if doc.tokens[start:end] != tokens:
                    raise CandidateValidationError(
                        f"{where}: span {span} reads {' '.join(doc.tokens[start:end])!r}, "
                        f"not {' '.join(tokens)!r}")
                matches.append((tokens, (start, end)))
    return _aggregate(matches, lexicon)


def write_candidates(candidates: Sequence[CandidateTerm], path):
    """Write candidates in the JSONL import format."""
    with open(path, "w", encoding="utf-8") as f:
        for c in candidates:
            f.write(json.dumps({"term": c.term_id, "spans": [list(s) for s in c.occurrences]}) + "\n")
