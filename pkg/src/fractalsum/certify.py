"""Build certificates from plain input records, and re-verify stored ones.

Every certificate stores the ``inputs`` it was built from; recomputing from
those inputs must reproduce the record exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from . import _numeric as num
from .certificates import Certificate
from .cloud import DEFAULT_CAP
from .exact import AffineMap, OrthoMatrix, format_point, parse_point, rational
from .ifs import HomogeneousIFS, similarity_dimension
from .indexsets import parse_index_set
from .moran import b_ell_containment, ev_params, moran_dim_estimate
from .subset import (
    address_boxdim_estimate,
    boxdim_sweep,
    covering_shadow,
    homogenization_containment,
    homogenize,
    pdsp_decompose,
    psp_decompose,
)
from .sumset import (
    e_rho_n_certificate,
    hsp_beta,
    exhaustive_translate_oracle,
    translate_intersection,
)

_BUILDERS: dict[str, Callable[[dict, int], Certificate]] = {}


def builder(kind: str):
    def register(fn):
        _BUILDERS[kind] = fn
        return fn
    return register


def maps_from_json(data: dict) -> list[AffineMap]:
    d = int(data["dimension"])
    out = []
    for m in data["maps"]:
        ortho = OrthoMatrix.from_entries(m.get("ortho") or OrthoMatrix.identity(d).flat(), d)
        out.append(AffineMap(rational(m["ratio"]), ortho, parse_point(m["shift"])))
    return out


def maps_to_json(maps) -> dict:
    return {"dimension": maps[0].dimension,
            "maps": [{"ratio": str(f.ratio), "ortho": f.ortho.flat(), "shift": format_point(f.shift)} for f in maps]}


@builder("hsp-bound")
def _hsp(inp: dict, cap: int) -> Certificate:
    return hsp_beta(HomogeneousIFS.from_json(inp["ifs"]), inp.get("probe_depth", 4)).record(inp)


@builder("e-family")
def _efam(inp: dict, cap: int) -> Certificate:
    cert = e_rho_n_certificate(inp["rho"], int(inp["N"]), inp.get("probe_depth", 4))
    cert.inputs = inp
    return cert


@builder("translate-instance")
def _l21(inp: dict, cap: int) -> Certificate:
    A = [parse_point(p) for p in inp["A"]]
    T = [parse_point(p) for p in inp["T"]]
    rep = translate_intersection(A, T)
    return Certificate(
        kind="translate-instance", claim="#⋂(A + t_j) <= #A + 1 - l",
        hypotheses=[{"name": "#A >= 2 and 1 <= l <= #A + 1, translations distinct", "holds": True}],
        witness={"intersection": [format_point(p) for p in rep.intersection], "cardinality": rep.cardinality,
                 "bound": rep.bound},
        verified=rep.satisfied, inputs=inp)


@builder("translate-exhaustive")
def _l21x(inp: dict, cap: int) -> Certificate:
    v = exhaustive_translate_oracle(inp["max_size"], inp["dimension"], inp["coordinate_range"])
    return Certificate(
        kind="translate-exhaustive", claim="no translate intersection exceeds #A + 1 - l on the grid",
        hypotheses=[], verified=v.ok, inputs=inp,
        witness={"sets_checked": v.sets_checked, "cases_checked": v.cases_checked, "tight_cases": v.tight_cases,
                 "violations": [[[list(map(str, p)) for p in A], [list(map(str, t)) for t in T]]
                                for A, T in v.violations[:20]]})


@builder("translate-random")
def _l21r(inp: dict, cap: int) -> Certificate:
    rng = random.Random(inp["seed"])
    r, d = inp["coordinate_range"], inp["dimension"]
    checked = 0
    for _ in range(inp["cases"]):
        size = rng.randint(2, inp["max_size"])
        grid = [tuple(Fraction(rng.randint(0, r)) for _ in range(d)) for _ in range(4 * size)]
        A = sorted(set(grid))[:size]
        if len(A) < 2:
            continue
        diffs = sorted({tuple(x - y for x, y in zip(p, q)) for p in A for q in A})
        pool = diffs + [tuple(c + Fraction(1, 2) for c in t) for t in diffs]
        T = rng.sample(pool, rng.randint(1, min(len(A) + 1, len(pool))))
        translate_intersection(A, T)
        checked += 1
    return Certificate(kind="translate-random", claim="random translate intersections respect #A + 1 - l",
                       hypotheses=[], witness={"cases_checked": checked}, verified=True, inputs=inp)


@builder("psp-equality")
def _psp(inp: dict, cap: int) -> Certificate:
    ifs = HomogeneousIFS.from_json(inp["ifs"])
    cert = psp_decompose(ifs, inp["ell"], inp["depth"], inp.get("partition", "residues"), inp.get("rounds"), cap)
    return cert.record(inp, f"K_S1 + ... + K_S{inp['ell']} = K at depth {inp['depth']}")


@builder("pdsp-containment")
def _pdsp(inp: dict, cap: int) -> Certificate:
    ifs = HomogeneousIFS.from_json(inp["ifs"])
    cert = pdsp_decompose(ifs, inp["ell"], inp["depth"], cap)
    return cert.record(inp, f"K_S1 + ... + K_S{inp['ell']} ⊂ K with dim_H K_Sj > 0")


@builder("homogenize")
def _homog(inp: dict, cap: int) -> Certificate:
    maps = maps_from_json(inp["maps"])
    h = homogenize(maps)
    check = homogenization_containment(h, maps, inp.get("depth", 3), cap)
    equal_linear = len({(f.ratio, f.ortho) for f in h.ifs.maps()}) == 1
    dim = similarity_dimension(h.ifs)
    return Certificate(
        kind="homogenize", claim="the homogeneous system's attractor is contained in the original attractor",
        hypotheses=[{"name": "two maps with distinct fixed points", "holds": True}],
        witness={"pair": list(h.pair), "dictionary": h.word_strings(), "equal_linear_parts": equal_linear,
                 "containment": check, "ifs": h.ifs.to_json()},
        verified=equal_linear and check["word_substitution"] and check["subset"],
        numeric_values={"similarity_dimension": num.decimal(dim.value)},
        exact_values={"ratio": str(h.ifs.ratio), "digits": [format_point(b) for b in h.ifs.digits]},
        inputs=inp)


@builder("boxdim-sweep")
def _boxdim(inp: dict, cap: int) -> Certificate:
    ifs = HomogeneousIFS.from_json(inp["ifs"])
    S = parse_index_set(inp["S"])
    depths = list(inp["depths"])
    rows = boxdim_sweep(ifs, S, depths, cap)
    shadows = [covering_shadow(ifs, S, n, cap=cap) for n in depths]
    sim = similarity_dimension(ifs).value
    below = all(address_boxdim_estimate(ifs.normalized()[0], S, n).estimate <= sim for n in depths)
    return Certificate(
        kind="boxdim-sweep", claim="address estimates stay below the similarity dimension; covering inequality holds",
        hypotheses=[], witness={"rows": rows, "covering": shadows, "address_below_similarity_dimension": below},
        verified=below and all(s["holds"] for s in shadows),
        numeric_values={"similarity_dimension": num.decimal(sim)}, inputs=inp)


@builder("moran-containment")
def _moran(inp: dict, cap: int) -> Certificate:
    params = ev_params(inp["alpha"], max(inp.get("k_max", 6), inp.get("digitwise_to", 20)), inp["ell"])
    cert = b_ell_containment(params, inp["depth"], inp.get("digitwise_to", 20), cap)
    cert.inputs = inp
    return cert


@builder("moran-dimension")
def _moran_dim(inp: dict, cap: int) -> Certificate:
    params = ev_params(inp["alpha"], inp["k_max"])
    ests = [moran_dim_estimate(params, k) for k in range(1, params.k_max + 1)]
    return Certificate(
        kind="moran-dimension", claim="prefix ratios s_k satisfy s_k >= alpha",
        hypotheses=[], verified=all(e.at_least_alpha for e in ests),
        witness={"rows": [{"k": e.k, "m_k": str(params.m[e.k - 1]), "N_k": str(params.N[e.k - 1]),
                           "equals_alpha": e.equals_alpha, "at_least_alpha": e.at_least_alpha} for e in ests]},
        numeric_values={f"s_{e.k}": num.decimal(e.value) for e in ests},
        exact_values={"alpha": str(params.alpha)}, inputs=inp)


def build(inputs: dict, cap: int = DEFAULT_CAP) -> Certificate:
    kind = inputs.get("kind")
    if kind not in _BUILDERS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    return _BUILDERS[kind](inputs, cap)


def reverify(cert: Certificate, cap: int = DEFAULT_CAP) -> tuple[bool, bool]:
    """Recompute from stored inputs; returns ``(reproduced, verified)``."""
    again = build(cert.inputs, cap)
    return again.to_json() == cert.to_json(), again.verified
