"""reqmatch: bi-encoder matching of report paragraphs against checklist requirements."""

__version__ = "0.1.0"
