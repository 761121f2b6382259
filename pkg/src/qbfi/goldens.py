"""Access to the bundled golden proofs and the mutation table."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .formats import parse_qdimacs, parse_trace


def _dir():
    return resources.files("qbfi") / "corpus"


def golden_names():
    return sorted(p.name[:-5] for p in _dir().iterdir() if p.name.endswith(".qrtf"))


def golden_text(name):
    d = _dir()
    return (d / f"{name}.qdimacs").read_text(), (d / f"{name}.qrtf").read_text()


def load_golden(name):
    ftext, ttext = golden_text(name)
    f = parse_qdimacs(ftext)
    return f, parse_trace(ttext, f)


@dataclass(frozen=True)
class Mutation:
    golden: str
    step: str
    replacement: str
    label: str

    def apply(self):
        """Trace text with the target line (a step id or ``header``) replaced."""
        _, ttext = golden_text(self.golden)
        out, hit = [], False
        for line in ttext.splitlines():
            toks = line.split()
            target = toks and (toks[0] == "s" if self.step == "header" else toks[0] == self.step)
            if target:
                out.append(self.replacement)
                hit = True
            else:
                out.append(line)
        if not hit:
            raise KeyError(f"{self.golden} has no line {self.step}")
        return "\n".join(out) + "\n"


def mutations():
    rows = []
    for line in (_dir() / "mutations.tsv").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rows.append(Mutation(*line.split("\t")))
    return rows
