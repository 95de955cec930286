"""Versioned curve profiles loaded from the text configs in ``profiles/``."""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .bn import BNCurve
from .inner import InnerCurve

PROFILE_DIR = Path(__file__).with_name("profiles")
SUPPORTED_VERSION = 1


@dataclass(frozen=True)
class CurveProfile:
    name: str
    version: int
    pairing: BNCurve
    inner: InnerCurve

    @property
    def scalar_field(self):
        return self.pairing.fr


def _ints(text):
    return tuple(int(t) for t in text.replace(" ", "").split(","))


def parse_profile(text: str) -> CurveProfile:
    cfg = configparser.ConfigParser()
    cfg.read_string(text)
    version = cfg.getint("profile", "version")
    if version != SUPPORTED_VERSION:
        raise ValueError("unsupported profile version %d" % version)
    pc = cfg["pairing"]
    if pc.get("family") != "BN":
        raise ValueError("only BN pairing curves are supported")
    g2 = None
    if "g2_x" in pc:
        g2 = (_ints(pc["g2_x"]), _ints(pc["g2_y"]))
    pairing = BNCurve(pc["name"], int(pc["u"]), int(pc["b"]), _ints(pc["xi"]), _ints(pc["g1"]), g2)
    ic = cfg["inner"]
    if int(ic["order"]) != pairing.p:
        # every shipped profile pairs with its curve-cycle partner; catch typos
        raise ValueError("inner curve order does not match the pairing base prime")
    inner = InnerCurve(
        ic["name"],
        pairing.fr,
        int(ic["a"]),
        int(ic["b"]),
        int(ic["order"]),
        _ints(ic["generator"]),
        ic["seed"].encode(),
        int(ic.get("cofactor", "1")),
    )
    return CurveProfile(cfg["profile"]["name"], version, pairing, inner)


@lru_cache(maxsize=None)
def load_profile(name: str = "standard") -> CurveProfile:
    path = PROFILE_DIR / ("%s.ini" % name)
    if not path.exists():
        raise ValueError("unknown curve profile %r" % name)
    return parse_profile(path.read_text())
