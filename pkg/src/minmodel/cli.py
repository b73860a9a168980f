"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 resource limit, 3 input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, field
from importlib import resources

from .chains import betti, enumerate_chains
from .hochschild import classical_hh_dims, hh_dims
from .linalg import LimitError
from .model import decompositions, differential_b, ext_product
from .presentation import Document, Presentation, PresentationError, max_normal_weight, parse_document, render_bar
from .verify import run_battery, verify_hh_oracle

FIXTURES = ("t2", "t3", "t4", "x2_xy", "xyx", "a3")
EXIT_OK, EXIT_FAIL, EXIT_LIMIT, EXIT_INPUT = 0, 1, 2, 3


def fixture_text(name: str) -> str:
    return resources.files("minmodel").joinpath("fixtures", f"{name}.txt").read_text(encoding="utf-8")


def load_fixture(name: str) -> Document:
    return parse_document(fixture_text(name))


def canonical_text(p: Presentation) -> str:
    q = p.quiver
    arrows = ", ".join(f"{a.name}:{a.source}->{a.target}" for a in q.arrows)
    rels = ", ".join(" ".join(q.arrows[i].name for i in r) for r in p.sorted_relations())
    return f"vertices {', '.join(q.vertices)}; arrows {arrows}; relations {rels}"


def digest(p: Presentation) -> str:
    return hashlib.sha256(canonical_text(p).encode()).hexdigest()[:16]


@dataclass
class Certificate:
    suite: str
    presentation: str
    bounds: dict
    passed: bool
    counterexamples: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "presentation": self.presentation, "bounds": self.bounds,
                "passed": self.passed, "counterexamples": self.counterexamples}


# ---------------------------------------------------------------------------

def _chain_str(p, c) -> str:
    return render_bar(p.quiver, c.splitting)


def _shifts(text: str | None, default=range(-8, 9)):
    if text is None:
        return default
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    n = int(text)
    return range(-n, n + 1)


def _weight(text: str | None, default: int) -> int:
    w = default if text is None else int(text)
    if w < 1:
        raise ValueError("max weight must be positive")
    return w


def _emit(fmt: str, header: list, rows: list, text_lines: list) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(rows)
        return buf.getvalue()
    return "".join(line + "\n" for line in text_lines)


def cmd_chains(doc: Document, cfg) -> tuple[str, int]:
    p = doc.presentation
    w = _weight(cfg.max_weight, 8)
    rows, lines = [], []
    for (r, wt), group in enumerate_chains(p, w).items():
        for c in group:
            a, b = c.interlace
            rows.append([_chain_str(p, c), r, wt, list(a), list(b)])
            lines.append(f"{_chain_str(p, c)} len={r} wt={wt}"
                         + (f" a={','.join(map(str, a))} b={','.join(map(str, b))}" if r else ""))
    if cfg.format == "csv":
        rows = [[s, r, wt, " ".join(map(str, a)), " ".join(map(str, b))] for s, r, wt, a, b in rows]
    return _emit(cfg.format, ["chain", "length", "weight", "a", "b"], rows, lines), EXIT_OK


def cmd_betti(doc: Document, cfg) -> tuple[str, int]:
    table = betti(doc.presentation, _weight(cfg.max_weight, 8))
    rows = [list(r) for r in table.rows()]
    lines = [f"Tor^{n} weight {w}: {c}" for n, w, c in rows]
    return _emit(cfg.format, ["n", "w", "count"], rows, lines), EXIT_OK


def cmd_model(doc: Document, cfg) -> tuple[str, int]:
    p = doc.presentation
    w = _weight(cfg.max_weight, 8)
    records, lines = [], []
    for (r, wt), group in enumerate_chains(p, w).items():
        for c in group:
            terms = [{"sign": s, "parts": [_chain_str(p, g) for g in word]}
                     for word, s in differential_b(c, p, doc.directives, cfg.signs).items()]
            records.append({"generator": _chain_str(p, c), "weight": wt, "length": r, "terms": terms})
            body = " ".join(f"{'+' if t['sign'] > 0 else '-'}{' (x) '.join(t['parts'])}" for t in terms)
            lines.append(f"b {_chain_str(p, c)} = {body or '0'}")
    if cfg.format == "json":
        return json.dumps(records, indent=2) + "\n", EXIT_OK
    rows = [[rec["generator"], rec["weight"], rec["length"], t["sign"], " ".join(t["parts"])]
            for rec in records for t in rec["terms"]]
    return _emit(cfg.format, ["generator", "weight", "length", "sign", "parts"], rows, lines), EXIT_OK


def cmd_ext(doc: Document, cfg) -> tuple[str, int]:
    p = doc.presentation
    w = _weight(cfg.max_weight, 6)
    rows, lines = [], []
    for group in enumerate_chains(p, w).values():
        for c in group:
            for n in range(2, cfg.max_arity + 1):
                for d in decompositions(c, n, p):
                    sign, g = ext_product(d.parts, p)
                    ins = [_chain_str(p, x) + "^" for x in d.parts]
                    rows.append([n, " ".join(ins), sign, _chain_str(p, g) + "^"])
                    lines.append(f"mu{n}({', '.join(ins)}) = {'+' if sign > 0 else '-'}{_chain_str(p, g)}^")
    return _emit(cfg.format, ["arity", "inputs", "sign", "output"], rows, lines), EXIT_OK


def cmd_hh(doc: Document, cfg) -> tuple[str, int]:
    p = doc.presentation
    shifts = _shifts(cfg.max_weight)
    if cfg.engine == "classical":
        table = classical_hh_dims(p, cfg.max_degree, shifts, cfg.cap)
    else:
        table = hh_dims(p, cfg.max_degree, shifts, cfg.cap, cfg.signs)
    rows = [[n, s, d] for (n, s), d in sorted(table.items())]
    lines = [f"HH^{n} shift {s}: {d}" for n, s, d in rows]
    return _emit(cfg.format, ["degree", "weight", "dim"], rows, lines), EXIT_OK


def cmd_verify(doc: Document, cfg) -> tuple[str, int]:
    p = doc.presentation
    w = _weight(cfg.max_weight, 8)
    bounds = {"max_weight": w, "max_arity": cfg.max_arity, "max_degree": cfg.max_degree, "signs": cfg.signs}
    reps = run_battery(p, w, cfg.max_arity, cfg.max_degree, cap=cfg.cap, jobs=cfg.jobs,
                       sabotage=doc.directives, signs=cfg.signs)
    if max_normal_weight(p) is not None:
        reps.append(verify_hh_oracle(p, cfg.max_degree, _shifts(None), cfg.cap, cfg.signs))
    dg = digest(p)
    certs = [Certificate(r.suite, dg, bounds, r.passed, r.counterexamples) for r in reps]
    code = EXIT_OK if all(c.passed for c in certs) else EXIT_FAIL
    if cfg.format == "json":
        return json.dumps([c.as_dict() for c in certs], indent=2) + "\n", code
    if cfg.format == "csv":
        rows = [[c.suite, c.presentation, "pass" if c.passed else "fail", len(c.counterexamples)] for c in certs]
        return _emit("csv", ["suite", "presentation", "result", "counterexamples"], rows, []), code
    lines = [f"presentation {dg}: {canonical_text(p)}"]
    for r in reps:
        lines.append(r.summary())
        for ce in r.counterexamples[:5]:
            lines.append(f"  chain {ce['chain']} arity {ce['arity']}: {ce['term']} [{ce['coefficient']:+d}]")
    return "\n".join(lines) + "\n", code


COMMANDS = {"chains": cmd_chains, "betti": cmd_betti, "model": cmd_model,
            "ext": cmd_ext, "hh": cmd_hh, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minmodel", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", help=f"presentation file, '-' for stdin, or a fixture name ({', '.join(FIXTURES)}, sabotage)")
    ap.add_argument("-w", "--max-weight", help="weight bound; for hh a shift window 'a..b' or N for -N..N")
    ap.add_argument("-n", "--max-arity", type=int, default=5)
    ap.add_argument("-d", "--max-degree", type=int, default=3)
    ap.add_argument("--format", choices=("text", "csv", "json"), default="text")
    ap.add_argument("--engine", choices=("twisted", "classical"), default="twisted")
    ap.add_argument("--signs", choices=("binomial", "parity"), default="binomial",
                    help="sign rule for b: C(n+1,2)+r1 or n+r1")
    ap.add_argument("--cap", type=int, default=None, help="largest block dimension allowed")
    ap.add_argument("-j", "--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", help="write to this file instead of stdout")
    return ap


def _read_input(name: str) -> Document:
    if name == "-":
        return parse_document(sys.stdin.read())
    try:
        with open(name, encoding="utf-8") as fh:
            return parse_document(fh.read())
    except FileNotFoundError:
        if name in FIXTURES or name == "sabotage":
            return load_fixture(name)
        raise


def main(argv=None) -> int:
    cfg = build_parser().parse_args(argv)
    try:
        if cfg.max_arity < 2 or cfg.max_degree < 0 or (cfg.cap is not None and cfg.cap < 1) or cfg.jobs < 1:
            raise ValueError("bounds must be positive")
        doc = _read_input(cfg.input)
        out, code = COMMANDS[cfg.command](doc, cfg)
    except (PresentationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LimitError as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
