"""Exact computations for self-similar group actions and their groupoids."""

__version__ = "0.1.0"

from .group import SelfSimilarGroup, dihedral, load_group, parse_group  # noqa: E402

__all__ = ["SelfSimilarGroup", "dihedral", "load_group", "parse_group", "__version__"]
