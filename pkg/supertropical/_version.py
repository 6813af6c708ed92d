"""Version of the supertropical package."""
from __future__ import annotations

import re
import typing as t

# Use "hatch version xx.yy.zz" to change it.
__version__ = "0.1.0"

_VERSION = re.compile(r"(\d+)\.(\d+)\.(\d+)(a|b|rc|\.dev)?(\d+)?")


class VersionInfo(t.NamedTuple):
    major: int
    minor: int
    micro: int
    releaselevel: str = ""
    serial: str = ""


def parse_version(text: str) -> VersionInfo:
    """Split a PEP 440 release such as ``1.2.0rc1``."""
    match = _VERSION.fullmatch(text)
    if match is None:
        msg = f"{text!r} is not a release version"
        raise ValueError(msg)
    major, minor, micro, level, serial = match.groups()
    return VersionInfo(int(major), int(minor), int(micro), level or "", serial or "")


version_info = parse_version(__version__)
