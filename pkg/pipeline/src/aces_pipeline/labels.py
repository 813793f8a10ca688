"""Canonical sound-descriptor category names, in taxonomy order.

These exact strings go into every exported ``labels.json``; the scoring
engine parses them from there, so the file is the only contract between
the two packages.
"""

LABELS_13 = (
    "WHO",
    "WHO/WHAT PROPERTY",
    "WHAT",
    "HOW",
    "HOW PROPERTY",
    "WHEN",
    "WHERE",
    "WHAT/WHERE",
    "SOUND TYPE",
    "SOUND PROPERTY",
    "NON-AUDITORY SENSATION",
    "OTHER",
    "O",
)

LABELS_10 = tuple(
    label for label in LABELS_13 if label not in ("WHO/WHAT PROPERTY", "HOW PROPERTY", "WHAT/WHERE")
)

# Per-category columns of the evaluation table.
REPORTED_CATEGORIES = ("HOW", "WHAT", "WHERE", "WHO")
