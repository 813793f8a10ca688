"""The closed set of sound-descriptor categories.

Thirteen categories cover what listeners report about everyday sounds:
the agent or object making the sound, the sound-producing action, spatial
and temporal context, and properties of the sound signal itself. ``O``
marks words that carry no descriptor and never enters scoring.
"""

from __future__ import annotations

import re
from enum import Enum

from .errors import ConfigError


class DescriptorLabel(Enum):
    WHO = "WHO"
    WHO_WHAT_PROPERTY = "WHO/WHAT PROPERTY"
    WHAT = "WHAT"
    HOW = "HOW"
    HOW_PROPERTY = "HOW PROPERTY"
    WHEN = "WHEN"
    WHERE = "WHERE"
    WHAT_WHERE = "WHAT/WHERE"
    SOUND_TYPE = "SOUND TYPE"
    SOUND_PROPERTY = "SOUND PROPERTY"
    NON_AUDITORY_SENSATION = "NON-AUDITORY SENSATION"
    OTHER = "OTHER"
    O = "O"

    def __str__(self) -> str:
        return self.value


# Canonical inventories. The full taxonomy has 13 entries; the reduced one
# drops the three refinement categories and keeps 10.
ALL_LABELS: tuple[DescriptorLabel, ...] = tuple(DescriptorLabel)

TEN_LABEL_INVENTORY: tuple[DescriptorLabel, ...] = tuple(
    label
    for label in DescriptorLabel
    if label
    not in (
        DescriptorLabel.WHO_WHAT_PROPERTY,
        DescriptorLabel.HOW_PROPERTY,
        DescriptorLabel.WHAT_WHERE,
    )
)

assert len(ALL_LABELS) == 13
assert len(TEN_LABEL_INVENTORY) == 10


def _fold(name: str) -> str:
    # "WHAT/WHERE", "what_where" and "What Where" all fold to "WHAT_WHERE".
    return re.sub(r"[^A-Z0-9]+", "_", name.strip().upper()).strip("_")


_LOOKUP: dict[str, DescriptorLabel] = {}
for _label in DescriptorLabel:
    _LOOKUP[_fold(_label.name)] = _label
    _LOOKUP[_fold(_label.value)] = _label


def parse_label(name: str) -> DescriptorLabel:
    """Parse a category name, tolerating case and separator variations."""
    try:
        return _LOOKUP[_fold(name)]
    except KeyError:
        raise ConfigError("label", f"unknown descriptor category {name!r}") from None


def render_label(label: DescriptorLabel) -> str:
    """Canonical display string, e.g. ``WHAT/WHERE``."""
    return label.value
