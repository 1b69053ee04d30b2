"""FCIDUMP interchange: namelist header plus index-value records.

Conventions: chemists' notation (pq|rs), 1-based orbital indices, the
trailing all-zero-index record carrying the nuclear repulsion constant.
Permutationally redundant two-electron entries are written once in canonical
order (p >= q, r >= s, pq-pair >= rs-pair) and fanned back out on read.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .scf import MOIntegrals


class FCIDumpFormatError(ValueError):
    """Structurally invalid FCIDUMP content."""


@dataclass(frozen=True)
class FCIDumpMetadata:
    n_orb: int
    n_elec: int
    ms2: int
    orbsym: tuple[int, ...]
    isym: int


def _canonical_two_body(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    if p < q:
        p, q = q, p
    if r < s:
        r, s = s, r
    if (p, q) < (r, s):
        p, q, r, s = r, s, p, q
    return p, q, r, s


def write_fcidump(mo: MOIntegrals, n_elec: int, ms2: int = 0) -> str:
    """Serialize MO integrals; values below 1e-16 are skipped."""
    n = mo.n_mo
    lines = [
        f"&FCI NORB={n},NELEC={n_elec},MS2={ms2},",
        "  ORBSYM=" + ",".join(["1"] * n) + ",",
        "  ISYM=1,",
        "&END",
    ]
    written = set()
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    key = _canonical_two_body(p + 1, q + 1, r + 1, s + 1)
                    if key in written:
                        continue
                    written.add(key)
                    val = mo.g_mo[key[0] - 1, key[1] - 1, key[2] - 1, key[3] - 1]
                    if abs(val) > 1e-16:
                        lines.append(f"{val:23.16e} {key[0]:3d} {key[1]:3d} {key[2]:3d} {key[3]:3d}")
    for p in range(n):
        for q in range(p + 1):
            val = mo.h_mo[p, q]
            if abs(val) > 1e-16:
                lines.append(f"{val:23.16e} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f"{mo.e_nuc:23.16e}   0   0   0   0")
    return "\n".join(lines) + "\n"


def read_fcidump(text: str) -> tuple[MOIntegrals, FCIDumpMetadata]:
    """Parse FCIDUMP text; redundant permutations must agree within 1e-10."""
    header_match = re.search(r"&FCI(.*?)(?:&END|/)", text, re.IGNORECASE | re.DOTALL)
    if not header_match:
        raise FCIDumpFormatError("missing &FCI ... &END namelist header")
    header = header_match.group(1)

    def field(name: str, default=None):
        m = re.search(rf"{name}\s*=\s*([0-9,\s-]+?)(?=[A-Za-z&/]|$)", header, re.IGNORECASE)
        if not m:
            if default is None:
                raise FCIDumpFormatError(f"namelist field {name} missing")
            return default
        return m.group(1)

    n_orb = int(field("NORB").strip().rstrip(","))
    n_elec = int(field("NELEC").strip().rstrip(","))
    ms2 = int(str(field("MS2", "0")).strip().rstrip(",") or 0)
    orbsym_raw = str(field("ORBSYM", "")).strip().rstrip(",")
    orbsym = tuple(int(v) for v in orbsym_raw.split(",") if v.strip()) if orbsym_raw else tuple([1] * n_orb)
    isym = int(str(field("ISYM", "1")).strip().rstrip(",") or 1)

    if n_orb < 1:
        raise FCIDumpFormatError(f"NORB = {n_orb} invalid")
    if n_elec < 0 or n_elec > 2 * n_orb:
        raise FCIDumpFormatError(f"NELEC = {n_elec} inconsistent with NORB = {n_orb}")

    body = text[header_match.end():]
    h = np.zeros((n_orb, n_orb))
    g = np.zeros((n_orb, n_orb, n_orb, n_orb))
    e_nuc = 0.0
    seen: dict[tuple[int, int, int, int], float] = {}
    for line_no, line in enumerate(body.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FCIDumpFormatError(f"record {line_no}: expected 'value i j k l'")
        try:
            val = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(v) for v in parts[1:])
        except ValueError as exc:
            raise FCIDumpFormatError(f"record {line_no}: {exc}") from None
        if max(i, j, k, l) > n_orb or min(i, j, k, l) < 0:
            raise FCIDumpFormatError(f"record {line_no}: index outside 1..{n_orb}")
        if i == 0 and j == 0 and k == 0 and l == 0:
            e_nuc = val
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FCIDumpFormatError(f"record {line_no}: partial zero indices")
            key = (max(i, j), min(i, j), 0, 0)
            if key in seen and abs(seen[key] - val) > 1e-10:
                raise FCIDumpFormatError(
                    f"record {line_no}: conflicting duplicate for h[{i},{j}]"
                )
            seen[key] = val
            h[i - 1, j - 1] = h[j - 1, i - 1] = val
        else:
            if 0 in (i, j, k, l):
                raise FCIDumpFormatError(f"record {line_no}: partial zero indices")
            key = _canonical_two_body(i, j, k, l)
            if key in seen and abs(seen[key] - val) > 1e-10:
                raise FCIDumpFormatError(
                    f"record {line_no}: conflicting duplicate for ({i}{j}|{k}{l})"
                )
            seen[key] = val
            for a, b in ((i, j), (j, i)):
                for c, d in ((k, l), (l, k)):
                    g[a - 1, b - 1, c - 1, d - 1] = val
                    g[c - 1, d - 1, a - 1, b - 1] = val

    mo = MOIntegrals(h_mo=h, g_mo=g, e_nuc=e_nuc, n_mo=n_orb)
    meta = FCIDumpMetadata(n_orb=n_orb, n_elec=n_elec, ms2=ms2, orbsym=orbsym, isym=isym)
    return mo, meta
