"""Checked lemmas, loaded from the shipped proof files.

Nothing shipped is trusted: every file is parsed and re-checked, in
dependency order, the first time the library is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..lang import Eq, Formula, IntLit, Mul, parse_formula, subst
from ..kernel import check, load_proof
from ..kernel import proofs as P
from .build import ORDER, STATEMENTS, TAGS, Chain


class LibraryError(Exception):
    pass


@dataclass(frozen=True)
class LemmaEntry:
    name: str
    statement: Formula
    proof: object
    tags: tuple
    text: str  # the file the proof was loaded from

    @property
    def is_generic(self):
        return "generic" in self.tags


def lemma_dir() -> Path:
    return Path(str(resources.files(__package__) / "lemmas"))


def load_library(directory: Path | None = None) -> dict:
    directory = Path(directory) if directory is not None else None
    if directory is None:
        return dict(_default())
    return _load(directory)


@lru_cache(maxsize=1)
def _default():
    return tuple(_load(lemma_dir()).items())


def _load(directory):
    out = {}
    known = {}
    for name in ORDER:
        path = directory / f"{name}.sexp"
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise LibraryError(f"missing lemma file {path}: {e}") from None
        proof = load_proof(text)
        statement = parse_formula(STATEMENTS[name])
        report = check(proof, statement, known)
        if not report.accepted:
            raise LibraryError(f"{name} does not check: {report}")
        tags = TAGS[name]
        if "generic" in tags and P.count_nodes(proof, P.RangeEnum):
            raise LibraryError(f"{name} is tagged generic but enumerates cases")
        out[name] = LemmaEntry(name, statement, proof, tags, text)
        known[name] = statement
    return out


def write_files(directory: Path):
    """Copy the checked lemma files into ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    for name, e in load_library().items():
        (directory / f"{name}.sexp").write_text(e.text, encoding="utf-8")


def statements() -> dict:
    """Name to statement, as the checker expects for LemmaRef."""
    return {name: e.statement for name, e in load_library().items()}


def lemma(name) -> LemmaEntry:
    try:
        return load_library()[name]
    except KeyError:
        raise LibraryError(f"no lemma named {name}") from None


def repunit_core():
    return lemma("repunit_core")


def geom_merge():
    return lemma("geom_merge")


def repunit_general():
    return lemma("repunit_general")


def digit_scaling():
    return lemma("digit_scaling")


def division_invariant_core():
    return lemma("division_invariant_core")


def digit_scaling_instance(n: int):
    """Proof of ``12345679 * (9 n) = ddddddddd`` (d = n) that instantiates the
    generic digit-scaling proof in place, so the result contains one cut."""
    if not 1 <= n <= 9:
        raise ValueError(f"digit must be in [1, 9], got {n}")
    entry = digit_scaling()
    inst = subst(entry.statement.body, entry.statement.var, IntLit(n))
    goal = Eq(_mul(12345679, 9 * n), IntLit(111111111 * n))
    c = Chain(goal.l)
    c.step("Evaluate", (1,), _mul(9, n))
    c.step("AssocComm", (), inst.l)
    c.lemma((), P.ForallElim(entry.proof, IntLit(n)), inst)
    c.step("Evaluate", (), goal.r)
    return goal, c.done(goal)


def _mul(a, b):
    return Mul(IntLit(a), IntLit(b))
