"""Sparse SDPA (.dat-s) export and import.

Layout written:

    * comment lines
    m
    nblock
    block sizes (negative size = diagonal block)
    c_1 ... c_m
    mat block i j value        (mat 0 is the constant matrix F0)

Semantics: minimize c.x subject to sum_p x_p F_p - F0 psd, which is exactly
the moment-side standard form.  Values carry 17 significant digits; entries
are upper-triangular, deterministically ordered, duplicates pre-aggregated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .relax import SdpInstance


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def render_sdpa(inst: SdpInstance) -> str:
    m = inst.nmoments
    blocks = [b for b in inst.blocks if b.size > 0]
    lines = [
        f"* realideal moment relaxation, order {inst.k}, side {inst.side}",
        f"{m}",
        f"{len(blocks)}",
        " ".join(str(-b.size if b.diag else b.size) for b in blocks),
    ]
    c = [Fraction(0)] * m
    for a, v in inst.objective.items():
        if a > 0:
            c[a - 1] = v
    lines.append(" ".join(_fmt(float(v)) for v in c))
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    for bi, b in enumerate(blocks, start=1):
        for a, ents in b.coeffs.items():
            for i, j, coeff in ents:
                sign = -1 if a == 0 else 1  # F0 = -(constant part)
                key = (a, bi, i + 1, j + 1)
                entries[key] = entries.get(key, Fraction(0)) + sign * coeff
    for (mat, bi, i, j) in sorted(entries):
        v = entries[(mat, bi, i, j)]
        if v:
            lines.append(f"{mat} {bi} {i} {j} {_fmt(float(v))}")
    return "\n".join(lines) + "\n"


def export_sdpa(inst: SdpInstance, destination) -> Path:
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_sdpa(inst))
    return path


@dataclass
class SdpaData:
    m: int
    sizes: list[int]  # negative = diagonal
    c: list[float]
    entries: dict[tuple[int, int, int, int], float]  # (mat, block, i, j) 1-based


def import_sdpa(text: str) -> SdpaData:
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("*") or s.startswith('"'):
            continue
        rows.append(s)
    m = int(rows[0])
    nblock = int(rows[1])
    sizes = [int(t) for t in rows[2].replace(",", " ").split()]
    if len(sizes) != nblock:
        raise ValueError("block size count mismatch")
    c = [float(t) for t in rows[3].replace(",", " ").split()] if m else []
    if len(c) != m:
        raise ValueError("objective length mismatch")
    entries: dict[tuple[int, int, int, int], float] = {}
    for s in rows[4:]:
        toks = s.split()
        if len(toks) != 5:
            raise ValueError(f"bad entry line: {s!r}")
        mat, b, i, j = (int(t) for t in toks[:4])
        v = float(toks[4])
        if not (0 <= mat <= m and 1 <= b <= nblock):
            raise ValueError(f"entry out of range: {s!r}")
        if i > j:
            i, j = j, i
        entries[(mat, b, i, j)] = entries.get((mat, b, i, j), 0.0) + v
    return SdpaData(m, sizes, c, entries)


def instance_to_sdpa_data(inst: SdpInstance) -> SdpaData:
    """Float view of an exact instance, for round-trip comparisons."""
    return import_sdpa(render_sdpa(inst))


def roundtrip_equal(inst: SdpInstance, data: SdpaData, tol: float = 0.0) -> bool:
    want = instance_to_sdpa_data(inst)
    if (want.m, want.sizes) != (data.m, data.sizes):
        return False
    if len(want.c) != len(data.c):
        return False
    if any(abs(a - b) > tol for a, b in zip(want.c, data.c)):
        return False
    if set(want.entries) != set(data.entries):
        return False
    return all(abs(data.entries[k] - v) <= tol for k, v in want.entries.items())
