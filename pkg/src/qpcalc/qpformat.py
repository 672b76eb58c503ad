"""The QP text format, JSON schema, and DOT export.

Text format, line oriented, `#` starts a comment:

    vertices 1 2 3
    arrow a 1 2
    truncation 6
    potential 1 c.b.a

A potential word is dot-separated arrow names, leftmost applied last.
Coefficients are integers or fractions p/q.  Parsing is total: malformed
input yields a diagnostic list with line and column, never an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotComposable
from .fields import QQ, FieldError
from .qp import QP, Potential
from .quiver import Arrow, GradedQuiver

DEFAULT_TRUNCATION = 6


@dataclass
class Diagnostic:
    line: int
    col: int
    message: str
    token: str = ""

    def render(self) -> str:
        tok = f" near {self.token!r}" if self.token else ""
        return f"line {self.line}, col {self.col}: {self.message}{tok}"


def _tokens(line: str):
    """(token, 1-based column) pairs, with comments stripped."""
    out = []
    col = 0
    for raw in line.split("#", 1)[0].split():
        col = line.index(raw, col)
        out.append((raw, col + 1))
        col += len(raw)
    return out


def parse_qp_text(text: str, field=QQ, default_trunc: int = DEFAULT_TRUNCATION):
    """Parse the QP text format. Returns (QP or None, diagnostics)."""
    diags: list[Diagnostic] = []
    vertices: list[str] | None = None
    arrows: list[Arrow] = []
    arrow_names: set[str] = set()
    potential_lines: list[tuple[int, int, object, list[str]]] = []
    trunc = None

    for ln, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        kw, kcol = toks[0]
        rest = toks[1:]
        if kw == "vertices":
            if vertices is not None:
                diags.append(Diagnostic(ln, kcol, "duplicate vertices line", kw))
                continue
            if not rest:
                diags.append(Diagnostic(ln, kcol, "vertices line needs at least one name"))
                continue
            names = [t for t, _ in rest]
            for t, c in rest:
                if names.count(t) > 1:
                    diags.append(Diagnostic(ln, c, "duplicate vertex name", t))
            vertices = list(dict.fromkeys(names))
        elif kw == "arrow":
            if len(rest) != 3:
                diags.append(Diagnostic(ln, kcol, "expected: arrow name src dst", kw))
                continue
            (name, c0), (src, c1), (dst, c2) = rest
            if vertices is None:
                diags.append(Diagnostic(ln, kcol, "arrow before vertices line", name))
                continue
            if name in arrow_names:
                diags.append(Diagnostic(ln, c0, "duplicate arrow name", name))
                continue
            ok = True
            if src not in vertices:
                diags.append(Diagnostic(ln, c1, "unknown source vertex", src))
                ok = False
            if dst not in vertices:
                diags.append(Diagnostic(ln, c2, "unknown target vertex", dst))
                ok = False
            if ok:
                arrow_names.add(name)
                arrows.append(Arrow(name, src, dst))
        elif kw == "truncation":
            if len(rest) != 1:
                diags.append(Diagnostic(ln, kcol, "expected: truncation N"))
                continue
            tok, c = rest[0]
            try:
                trunc = int(tok)
            except ValueError:
                diags.append(Diagnostic(ln, c, "truncation must be an integer", tok))
                continue
            if trunc < 2:
                diags.append(Diagnostic(ln, c, "truncation must be >= 2", tok))
                trunc = None
        elif kw == "potential":
            if len(rest) != 2:
                diags.append(Diagnostic(ln, kcol, "expected: potential coeff word"))
                continue
            (coeff_tok, c0), (word_tok, c1) = rest
            try:
                coeff = field.parse(coeff_tok)
            except (FieldError, ValueError):
                diags.append(Diagnostic(ln, c0, "bad coefficient", coeff_tok))
                continue
            potential_lines.append((ln, c1, coeff, word_tok.split(".")))
        else:
            diags.append(Diagnostic(ln, kcol, "unknown directive", kw))

    if vertices is None:
        diags.append(Diagnostic(0, 0, "missing vertices line"))
        return None, diags
    if not vertices:
        diags.append(Diagnostic(0, 0, "quiver must be non-empty"))
        return None, diags
    if any(d for d in diags):
        return None, diags

    quiver = GradedQuiver(vertices, arrows)
    n = trunc if trunc is not None else default_trunc
    entries = []
    for ln, col, coeff, word in potential_lines:
        for nm in word:
            if nm not in arrow_names:
                diags.append(Diagnostic(ln, col, "unknown arrow in potential", nm))
                break
        else:
            try:
                p = quiver.path(word)
            except NotComposable:
                diags.append(Diagnostic(ln, col, "word not composable", ".".join(word)))
                continue
            if not p.is_cycle:
                diags.append(Diagnostic(ln, col, "term is not a cycle", ".".join(word)))
                continue
            if p.length > n:
                diags.append(Diagnostic(
                    ln, col, f"term longer than truncation order {n}", ".".join(word)))
                continue
            entries.append((p, coeff))
    if diags:
        return None, diags
    pot = Potential(quiver, n, entries, field)
    return QP(quiver, pot, n, field), diags


def format_coeff(c, field=QQ) -> str:
    return field.format(c)


def format_qp_text(q: QP) -> str:
    lines = ["# qpcalc QP file (words compose right to left: leftmost arrow applied last)"]
    lines.append("vertices " + " ".join(q.quiver.vertices))
    for a in q.quiver.arrows:
        lines.append(f"arrow {a.name} {a.source} {a.target}")
    lines.append(f"truncation {q.trunc}")
    for p, c in q.potential.canonical_series().sorted_terms():
        word = ".".join(x.name for x in p.letters())
        lines.append(f"potential {format_coeff(c, q.field)} {word}")
    return "\n".join(lines) + "\n"


def _coeff_to_json(c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c)
        return f"{c.numerator}/{c.denominator}"
    return int(c.val)  # prime field


def qp_to_json_dict(q: QP) -> dict:
    return {
        "vertices": list(q.quiver.vertices),
        "arrows": [
            {"name": a.name, "src": a.source, "dst": a.target, "deg": a.degree}
            for a in q.quiver.arrows
        ],
        "potential": [
            {"coeff": _coeff_to_json(c), "word": [x.name for x in p.letters()]}
            for p, c in q.potential.canonical_series().sorted_terms()
        ],
        "truncation": q.trunc,
    }


def qp_from_json_dict(d: dict, field=QQ) -> QP:
    quiver = GradedQuiver(
        [str(v) for v in d["vertices"]],
        [Arrow(a["name"], str(a["src"]), str(a["dst"]), int(a.get("deg", 0)))
         for a in d.get("arrows", [])],
    )
    n = int(d.get("truncation", DEFAULT_TRUNCATION))
    entries = []
    for term in d.get("potential", []):
        p = quiver.path([str(x) for x in term["word"]])
        entries.append((p, field.parse(str(term["coeff"]))))
    return QP(quiver, Potential(quiver, n, entries, field), n, field)


def quiver_to_dot(quiver: GradedQuiver, name: str = "QP") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in quiver.vertices:
        lines.append(f'  "{v}";')
    for a in quiver.arrows:
        label = a.name if a.degree == 0 else f"{a.name} ({a.degree})"
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def qp_to_dot(q: QP) -> str:
    return quiver_to_dot(q.quiver)
