from dataclasses import dataclass

from .permcore import DEFAULT_COSET_CAP, DEFAULT_ELEMENT_CAP

DEFAULT_CHAMBER_CAP = 200_000


@dataclass(frozen=True)
class Caps:
    """Enumeration budgets.  Exceeding one raises or reports ``skipped``."""

    elements: int = DEFAULT_ELEMENT_CAP
    cosets: int = DEFAULT_COSET_CAP
    chambers: int = DEFAULT_CHAMBER_CAP


DEFAULT_CAPS = Caps()
