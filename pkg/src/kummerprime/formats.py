"""Text file formats: map files, start-vector files, verdict records, packs.

Map and start-vector files share one layout: ``key: value`` header lines,
a ``---`` separator, then a block of decimal integers.  The ``sha256`` header
is the digest of the block (UTF-8, lines joined by newlines, no trailing
newline), so files can be checked without trusting the header order.

Verdict records are single-line JSON with sorted keys.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from math import gcd
from pathlib import Path

from gmpy2 import mpz

from .kummer import KAPPA_CONVENTION
from .sqrt5synth import MONOMIAL_ORDER, Sqrt5Map

__all__ = ["FormatError", "StartVector", "write_map", "read_map", "dump_map", "load_map",
           "write_start", "read_start", "dump_start", "load_start", "file_sha256",
           "verdict_record", "Pack", "load_pack", "save_pack"]

MAP_FORMAT = "kummerprime-map/1"
START_FORMAT = "kummerprime-start/1"
VERDICT_FORMAT = "kummerprime-verdict/1"


class FormatError(ValueError):
    pass


# decimal conversion through gmpy2: no digit limit on huge start vectors
def _dec(x: int) -> str:
    return mpz(x).digits(10)


def _int(s: str) -> int:
    try:
        return int(mpz(s.strip(), 10))
    except ValueError:
        raise FormatError("not a decimal integer: %r" % s[:40]) from None


def _digest(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()


def _render(header: list, body_lines: list) -> str:
    body = "\n".join(body_lines)
    lines = ["%s: %s" % kv for kv in header] + ["sha256: " + _digest(body), "---", body]
    return "\n".join(lines) + "\n"


def _parse(text: str, fmt: str):
    head, sep, body = text.partition("\n---\n")
    if not sep:
        raise FormatError("missing '---' separator")
    header = {}
    for line in head.splitlines():
        key, colon, value = line.partition(":")
        if not colon:
            raise FormatError("bad header line %r" % line)
        header[key.strip()] = value.strip()
    if header.get("format") != fmt:
        raise FormatError("unsupported format %r (expected %s)" % (header.get("format"), fmt))
    body = body.rstrip("\n")
    if header.get("sha256") != _digest(body):
        raise FormatError("content hash mismatch")
    return header, body.split("\n") if body else []


# --- maps -------------------------------------------------------------------

def dump_map(smap: Sqrt5Map) -> str:
    header = [("format", MAP_FORMAT), ("h", _dec(smap.h)), ("degree", smap.degree),
              ("monomial-order", MONOMIAL_ORDER), ("kappa", KAPPA_CONVENTION),
              ("validated", "true" if smap.validated else "false")]
    body = [" ".join(_dec(c) for c in row) for row in smap.coefficients]
    return _render(header, body)


def load_map(text: str) -> Sqrt5Map:
    header, lines = _parse(text, MAP_FORMAT)
    if header.get("monomial-order") != MONOMIAL_ORDER:
        raise FormatError("unknown monomial order %r" % header.get("monomial-order"))
    if len(lines) != 4:
        raise FormatError("expected 4 coefficient rows, got %d" % len(lines))
    rows = [[_int(x) for x in line.split()] for line in lines]
    try:
        return Sqrt5Map(_int(header["h"]), int(header["degree"]), rows,
                        validated=header.get("validated") == "true")
    except (KeyError, ValueError) as exc:
        raise FormatError(str(exc)) from None


def write_map(path, smap: Sqrt5Map) -> None:
    Path(path).write_text(dump_map(smap))


def read_map(path) -> Sqrt5Map:
    return load_map(Path(path).read_text())


# --- start vectors ------------------------------------------------------------

@dataclass(frozen=True)
class StartVector:
    h: int
    alpha: int
    beta: int
    m: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 4:
            raise FormatError("start vector needs 4 coordinates")
        g = 0
        for c in self.coords:
            g = gcd(g, c)
        if g != 1:
            raise FormatError("start vector coordinates are not coprime")
        if self.beta ** 2 != self.alpha ** 5 + self.h:
            raise FormatError("(alpha, beta) is not on y^2 = x^5 + h")


def dump_start(sv: StartVector) -> str:
    header = [("format", START_FORMAT), ("h", _dec(sv.h)), ("alpha", _dec(sv.alpha)),
              ("beta", _dec(sv.beta)), ("m", sv.m)]
    return _render(header, [_dec(c) for c in sv.coords])


def load_start(text: str) -> StartVector:
    header, lines = _parse(text, START_FORMAT)
    if len(lines) != 4:
        raise FormatError("expected 4 coordinates, got %d" % len(lines))
    try:
        return StartVector(_int(header["h"]), _int(header["alpha"]), _int(header["beta"]),
                           int(header["m"]), tuple(_int(x) for x in lines))
    except KeyError as exc:
        raise FormatError("missing header %s" % exc) from None


def write_start(path, sv: StartVector) -> None:
    Path(path).write_text(dump_start(sv))


def read_start(path) -> StartVector:
    return load_start(Path(path).read_text())


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- verdict records ---------------------------------------------------------

def verdict_record(m: int, n: int, verdict, map_sha=None, start_sha=None, h=None) -> str:
    rec = {
        "format": VERDICT_FORMAT, "m": m, "n": n,
        "lambda": _dec(4 * m * m * 5 ** n - 1),
        "outcome": verdict.outcome,
        "factor": None if verdict.factor is None else _dec(verdict.factor),
        "r": verdict.r, "T_safe": verdict.threshold,
        "wall_time": round(verdict.elapsed, 6),
        "map_sha256": map_sha, "start_sha256": start_sha, "h": h,
    }
    if verdict.reason:
        rec["reason"] = verdict.reason
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


# --- seed packs ---------------------------------------------------------------

@dataclass
class Pack:
    """A directory holding ``map.txt`` and ``start-m{m}.txt`` files for one (h, Q0)."""

    path: Path

    @property
    def map_path(self) -> Path:
        return self.path / "map.txt"

    def start_path(self, m: int) -> Path:
        return self.path / ("start-m%d.txt" % m)

    def has(self, m: int) -> bool:
        return self.start_path(m).exists()

    def load(self, m: int):
        smap = read_map(self.map_path)
        sv = read_start(self.start_path(m))
        if sv.h != smap.h:
            raise FormatError("pack %s: map h=%d, start h=%d" % (self.path, smap.h, sv.h))
        if sv.m != m:
            raise FormatError("pack %s: start vector is for m=%d" % (self.path, sv.m))
        return smap, sv


def load_pack(path) -> Pack:
    p = Path(path)
    if not (p / "map.txt").exists():
        raise FormatError("%s has no map.txt" % p)
    return Pack(p)


def save_pack(path, smap: Sqrt5Map, starts=()) -> Pack:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    write_map(p / "map.txt", smap)
    for sv in starts:
        write_start(p / ("start-m%d.txt" % sv.m), sv)
    return Pack(p)
