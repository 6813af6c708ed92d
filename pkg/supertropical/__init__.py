"""Supertropical semirings, supervaluations and a Kapranov verifier.

Exact arithmetic over the bipotent semifield of the rationals and its
supertropical cover, p-adic and trivial valuations, supervaluations with
dominance checks, sparse polynomials with tilde-maps and corner loci, and the
``supertropical`` command that checks the ghost-surpassing Kapranov identity
on generated instances.
"""
from __future__ import annotations

from ._version import __version__, version_info  # noqa: F401
