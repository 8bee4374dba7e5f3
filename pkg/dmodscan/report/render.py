from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from ..config import SCHEMA_VERSION
from ..exactnum import format_rational
from ..ident import AlgebraCatalogue, AlphaOrbit, ClosedSuperalgebra
from ..scf import ClosureKind, ClosureResult
from ..sigma import TABLE_HEADER, TableRow


def _aligned(rows: Sequence[Sequence[str]]) -> List[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return lines


def render_table_text(rows: Iterable[TableRow]) -> str:
    body = [TABLE_HEADER] + [r.cells() for r in rows]
    return "\n".join(_aligned(body)) + "\n"


def table_record(rows: Iterable[TableRow]) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "record": "table", "rows": [r.to_record() for r in rows]}


def parse_table_record(text: str) -> List[TableRow]:
    data = json.loads(text)
    return [TableRow.from_record(r) for r in data.get("rows", [])]


def closure_record(result: ClosureResult) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "record": "closure", **result.to_record()}


def render_closure_text(result: ClosureResult) -> str:
    lines: List[str] = [f"content: {result.content.label}", f"kind:    {result.kind.value}"]
    if result.kind is ClosureKind.CRITICAL:
        for lam, name, w in zip(result.critical, result.names, result.witnesses):
            lines.append(f"lambda = {format_rational(lam)}  ->  {name}  dims {w.signature}")
    elif result.kind is ClosureKind.ANY:
        w = result.witnesses[0]
        lines.append(f"closes for every lambda; at lambda = {format_rational(w.lambda_value)}: {result.names[0]}  dims {w.signature}")
    else:
        lines.append("no critical lambda: the superconformal closure never holds")
        if result.residual_gcd is not None:
            lines.append(f"residual gcd: {result.residual_gcd}")
    return "\n".join(lines) + "\n"


def algebra_record(algebra: ClosedSuperalgebra, name: str, orbit: Optional[AlphaOrbit] = None) -> Dict[str, Any]:
    """Export record: labels, parities, ad Dil weights and (a, b, c, "p/q") structure constants."""
    rec: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "record": "superalgebra",
        "content": algebra.content,
        "lambda": None if algebra.lambda_value is None else format_rational(algebra.lambda_value),
        "name": name,
        "signature": algebra.signature,
        "labels": list(algebra.labels),
        "parities": ["odd" if p else "even" for p in algebra.parities],
        "weights": [format_rational(w) for w in algebra.weights()],
        "structure_constants": [[a, b, c, format_rational(f)] for a, b, c, f in algebra.structure_table()],
        "alpha_orbit": None,
    }
    if orbit is not None:
        rec["alpha_orbit"] = {
            "values": orbit.to_strings(),
            "canonical": format_rational(orbit.canonical),
            "degenerate": orbit.degenerate,
        }
    return rec


def render_algebra_text(algebra: ClosedSuperalgebra, name: str, orbit: Optional[AlphaOrbit] = None) -> str:
    lam = "-" if algebra.lambda_value is None else format_rational(algebra.lambda_value)
    lines = [f"{name}  dims {algebra.signature}  content {algebra.content}  lambda {lam}"]
    if orbit is not None:
        note = "  (degenerate)" if orbit.degenerate else ""
        lines.append("alpha orbit: {" + ", ".join(orbit.to_strings()) + "}" + note)
    labels = algebra.labels
    pairs: Dict[tuple, List[str]] = {}
    for a, b, c, f in algebra.structure_table():
        pairs.setdefault((a, b), []).append(f"{format_rational(f)} {labels[c]}")
    for (a, b), terms in pairs.items():
        lines.append(f"[{labels[a]},{labels[b]}] = " + " + ".join(terms))
    return "\n".join(lines) + "\n"


def verify_record(outcomes: Sequence[Any], seed: int, skipped_slow: bool) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "record": "verify",
        "seed": seed,
        "skipped_slow": skipped_slow,
        "passed": all(o.passed for o in outcomes),
        "results": [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in outcomes],
    }


def render_catalogue(catalogue: AlgebraCatalogue) -> str:
    rows = [["N", "algebra", "dims", "R-symmetry", "dim R", "exceptional"]]
    for e in catalogue:
        rows.append(
            [str(e.n_susy), e.name, e.signature, e.r_symmetry, str(e.r_dim), "yes" if e.exceptional else ""]
        )
    return "\n".join(_aligned(rows)) + "\n"


def dumps(record: Dict[str, Any]) -> str:
    return json.dumps(record, indent=2) + "\n"


def write_output(text: str, out_path: Optional[Path]) -> None:
    """Write to ``out_path`` when given; the CLI echoes to stdout otherwise."""
    if out_path is None:
        return
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8")


def load_golden(name: str) -> str:
    """Text of a golden file shipped under ``dmodscan/golden``."""
    return resources.files("dmodscan").joinpath("golden").joinpath(name).read_text(encoding="utf-8")
