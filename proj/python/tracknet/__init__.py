"""Third-party tracker extraction and network analysis."""

import os
from functools import lru_cache
from pathlib import Path

_DATA = Path(__file__).with_name("data")
if _DATA.is_dir():
    os.environ.setdefault("TRACKNET_DATA_DIR", str(_DATA))

from ._tracknet import (  # noqa: E402
    Error,
    SuffixRules,
    canonicalize_uri,
    fit_power_law,
    g2_test,
    hurwitz_zeta,
    louvain,
    modularity,
    pagerank,
    point_biserial,
    run_cli,
)
from . import _tracknet  # noqa: E402


@lru_cache(maxsize=None)
def default_rules():
    """Bundled public suffix list."""
    return SuffixRules.load(str(Path(os.environ["TRACKNET_DATA_DIR"]) / "public_suffix_list.dat"))


def resolve_pld(host, rules=None):
    return _tracknet.resolve_pld(host, rules or default_rules())


def extract_page(url, html, rules=None):
    return _tracknet.extract_page(url, html, rules or default_rules())


__all__ = [
    "Error",
    "SuffixRules",
    "canonicalize_uri",
    "default_rules",
    "extract_page",
    "fit_power_law",
    "g2_test",
    "hurwitz_zeta",
    "louvain",
    "modularity",
    "pagerank",
    "point_biserial",
    "resolve_pld",
    "run_cli",
]
