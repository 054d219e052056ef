"""JSON and CSV serialization for symbols, measures, grids, and reports.

Conventions: complex numbers are [re, im] pairs, angles are radians in
[0, 2*pi), JSON is emitted in canonical form (sorted keys, no whitespace)
so that reruns with equal configurations are byte-identical, and CSV cells
use 17 significant digits so that values round-trip exactly.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional

import numpy as np

from .clark1d import BoundaryMeasure1D, _theta_grid
from .domains import DomainDescriptor
from .holomaps import PolyMapND, RationalSelfMap1D, SymbolMap


def cplx(value) -> list:
    value = complex(value)
    return [value.real, value.imag]


def from_cplx(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    return complex(float(pair[0]), float(pair[1]))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def fingerprint(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


# -- domains -----------------------------------------------------------------

def domain_to_dict(domain: DomainDescriptor) -> dict:
    return {"kind": domain.kind, "n": domain.n}


def domain_from_dict(d: dict) -> DomainDescriptor:
    return DomainDescriptor(str(d["kind"]), int(d["n"]))


# -- symbols -----------------------------------------------------------------

def symbol_to_dict(symbol: SymbolMap) -> dict:
    out = {
        "domain": domain_to_dict(symbol.domain),
        "base": {
            "n": symbol.base.n,
            "terms": [{"k": list(k), "c": cplx(c)} for k, c in symbol.base.terms],
        },
    }
    if symbol.post is not None:
        out["post"] = {
            "num": [cplx(c) for c in symbol.post.num],
            "den": [cplx(c) for c in symbol.post.den],
        }
    return out


def symbol_from_dict(d: dict, domain: Optional[DomainDescriptor] = None) -> SymbolMap:
    base_d = d["base"]
    n = int(base_d["n"])
    terms = {tuple(int(x) for x in t["k"]): from_cplx(t["c"]) for t in base_d["terms"]}
    base = PolyMapND(n, terms)
    post = None
    if d.get("post") is not None:
        post = RationalSelfMap1D(
            tuple(from_cplx(c) for c in d["post"]["num"]),
            tuple(from_cplx(c) for c in d["post"]["den"]),
        )
    if domain is None:
        if "domain" in d:
            domain = domain_from_dict(d["domain"])
        else:
            domain = DomainDescriptor("disc" if n == 1 else "polydisc", n)
    return SymbolMap(domain, base, post)


def load_symbol(path, domain: Optional[DomainDescriptor] = None) -> SymbolMap:
    with open(path, "r", encoding="utf-8") as fh:
        return symbol_from_dict(json.load(fh), domain)


# -- measures ----------------------------------------------------------------

def measure_to_dict(mu: BoundaryMeasure1D, alpha: Optional[complex] = None) -> dict:
    out = {
        "grid": mu.grid,
        "atoms": [
            [float(np.mod(np.angle(t), 2 * np.pi)), m]
            for t, m in zip(mu.atom_positions, mu.atom_masses)
        ],
        "density": [float(v) for v in mu.density_values],
    }
    if alpha is not None:
        out["alpha"] = cplx(alpha)
    return out


def measure_from_dict(d: dict) -> BoundaryMeasure1D:
    grid = int(d["grid"])
    atoms = [(np.exp(1j * float(a)), float(m)) for a, m in d["atoms"]]
    pos = tuple(t for t, _ in atoms)
    masses = tuple(m for _, m in atoms)
    dv = np.asarray(d["density"], dtype=float)
    return BoundaryMeasure1D(pos, masses, _theta_grid(grid).copy(), dv, grid)


# -- CSV ----------------------------------------------------------------------

def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(format_float(v) if isinstance(v, float) else str(v) for v in row)
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def density_rows(mu: BoundaryMeasure1D):
    return [(float(t), float(v)) for t, v in zip(mu.thetas, mu.density_values)]


def atom_rows(mu: BoundaryMeasure1D):
    return [
        (float(np.mod(np.angle(t), 2 * np.pi)), float(m))
        for t, m in zip(mu.atom_positions, mu.atom_masses)
    ]
