"""Cone reports: lossless structured serialization plus text/TeX rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .chern import ChernCharacter, Slope
from .cone import ConeResult, Facet
from .resolver import KroneckerData


def _fr(x: Fraction) -> str:
    return str(x)


def _ch_dict(ch: ChernCharacter) -> Dict[str, str]:
    return {"rank": _fr(ch.rank), "c1a": _fr(ch.c1a), "c1b": _fr(ch.c1b),
            "ch2": _fr(ch.ch2)}


def _ch_from(d: Dict[str, str]) -> ChernCharacter:
    return ChernCharacter(Fraction(d["rank"]), Fraction(d["c1a"]),
                          Fraction(d["c1b"]), Fraction(d["ch2"]))


@dataclass
class ConeReport:
    """Serializable summary of one effective-cone computation."""

    data: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_result(cls, result: ConeResult) -> "ConeReport":
        pairs = []
        for p in result.pairs:
            res = p.resolution
            kron = res.kronecker()
            pairs.append({
                "alpha": str(p.alpha), "beta": str(p.beta),
                "point": {"mu1": _fr(p.point.mu.mu1), "mu2": _fr(p.point.mu.mu2),
                          "delta": _fr(p.point.delta), "kind": p.point.kind},
                "character": _ch_dict(p.character),
                "assumed_conditions": list(p.assumed),
                "resolution": {
                    "case": res.case,
                    "coil": [str(t) for t in res.coil],
                    "coil_characters": [_ch_dict(t.ch) for t in res.coil],
                    "mults": list(res.mults),
                    "delta_p": list(res.delta_p),
                    "arrow": res.arrow_text(),
                },
                "kronecker": (None if kron is None else
                              {"N": kron.N, "a": kron.a, "b": kron.b,
                               "edim": kron.edim}),
            })
        data = {
            "character": _ch_dict(result.xi),
            "n": result.n,
            "raw_mode": result.raw_mode,
            "rays": [{"vec": list(r.vec), "label": r.label,
                      "provenance": list(r.provenance)} for r in result.rays],
            "facets": [{"normal": list(f.normal), "rays": list(f.rays)}
                       for f in result.facets],
            "pairs": pairs,
            "warnings": list(result.warnings),
        }
        return cls(data)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConeReport":
        return cls(json.loads(text))

    def character(self) -> ChernCharacter:
        return _ch_from(self.data["character"])

    def ray_vectors(self) -> List[Tuple[int, int, int]]:
        return [tuple(r["vec"]) for r in self.data["rays"]]

    def ray_labels(self) -> List[str]:
        return [r["label"] for r in self.data["rays"]]

    def facet_normals(self) -> List[Tuple[int, int, int]]:
        return [tuple(f["normal"]) for f in self.data["facets"]]

    # -- rendering -----------------------------------------------------------

    def text(self) -> str:
        d = self.data
        lines = []
        head = f"effective cone for ch = {self.character()}"
        if d.get("n") is not None:
            head += f"  (Hilbert scheme of {d['n']} points)"
        lines.append(head)
        lines.append("rays:")
        for r in d["rays"]:
            prov = f"   [{'; '.join(r['provenance'])}]" if r["provenance"] else ""
            lines.append(f"  {r['label']}  {tuple(r['vec'])}{prov}")
        if d["facets"]:
            lines.append("facets (a,b,c)-functionals, >= 0 on the cone:")
            for f in d["facets"]:
                a, b, c = f["normal"]
                lines.append(f"  {a}a + {b}b + {c}c >= 0   spanning rays {f['rays']}")
        if d["pairs"]:
            lines.append("extremal pairs:")
            for p in d["pairs"]:
                lines.append(f"  ({p['alpha']}, {p['beta']})  point "
                             f"(({p['point']['mu1']},{p['point']['mu2']}),"
                             f"{p['point']['delta']}) [{p['point']['kind']}]"
                             f"  assumed {p['assumed_conditions']}")
                lines.append(f"    character {self._char_str(p['character'])}")
                lines.append(f"    {p['resolution']['case']}: {p['resolution']['arrow']}")
                lines.append(f"    coil {{{', '.join(p['resolution']['coil'])}}}"
                             f"  delta_p {tuple(p['resolution']['delta_p'])}")
                if p["kronecker"]:
                    k = p["kronecker"]
                    lines.append(f"    Kronecker N={k['N']} dims=({k['a']},{k['b']})"
                                 f" edim={k['edim']}")
        for w in d["warnings"]:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _char_str(cd: Dict[str, str]) -> str:
        return f"({cd['rank']},({cd['c1a']},{cd['c1b']}),{cd['ch2']})"


def delimited_rays(report: ConeReport) -> str:
    """Tab-separated ray listing (label, a, b, c), one ray per line."""
    lines = ["label\ta\tb\tc"]
    for r in report.data["rays"]:
        a, b, c = r["vec"]
        lines.append(f"{r['label']}\t{a}\t{b}\t{c}")
    return "\n".join(lines) + "\n"


def _tex_frac(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return rf"\frac{{{x.numerator}}}{{{x.denominator}}}"


def tex_label(vec: Tuple[int, int, int]) -> str:
    a, b, c = vec
    if (a, b) == (0, 0):
        return "$B$"
    if c == 0:
        return rf"$Y_{{{a},{b}}}$"
    return rf"$X_{{{_tex_frac(Fraction(a, c))},{_tex_frac(Fraction(b, c))}}}$"


def tex_table(rows: Dict[int, List[Tuple[int, int, int]]]) -> str:
    """TeX tabular of extremal rays per n, in the published layout."""
    lines = [r"\begin{tabular}{|c|c|}", r" \hline",
             r" n & Extremal Rays  \\", r" \hline"]
    for n in sorted(rows):
        labels = [tex_label(v) for v in rows[n]]
        if len(labels) > 1:
            ray_text = ", ".join(labels[:-1]) + ", and " + labels[-1]
        else:
            ray_text = labels[0] if labels else ""
        lines.append(f" {n} & {ray_text} \\\\")
        lines.append(r" \hline")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"
