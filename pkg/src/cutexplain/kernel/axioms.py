"""The fixed axiom registry.  Schemas are quantifier-free implications whose
variables are closed off by instantiation."""

from ..lang import free_vars, parse_formula, subst

_SCHEMAS = {
    "MulMonoLe": "x <= y => 0 <= z => x * z <= y * z",
    "AddMonoLe": "x <= y => x + z <= y + z",
    "PowMonoLe": "0 <= n => 0 <= x => x <= y => x^n <= y^n",
    "LeTrans": "x <= y => y <= z => x <= z",
    "LtLeTrans": "x < y => y <= z => x < z",
    "SuccGt": "t < x => t + 1 <= x",
    "SuccGtRev": "t + 1 <= x => t < x",
    "Trichotomy": "x <= t \\/ t < x",
    "LtNeq": "x < y => x != y",
    "GtNeq": "y < x => x != y",
    "EqRefl": "x = x",
    "EqSym": "x = y => y = x",
    "EqTrans": "x = y => y = z => x = z",
}

AXIOMS = {name: parse_formula(text) for name, text in _SCHEMAS.items()}


class AxiomError(Exception):
    pass


def instantiate(name, inst):
    """Instance of schema ``name`` under ``inst`` (pairs of var and term)."""
    try:
        schema = AXIOMS[name]
    except KeyError:
        raise AxiomError(f"unknown axiom {name}") from None
    mapping = dict(inst)
    need = free_vars(schema)
    if set(mapping) != need:
        raise AxiomError(f"{name} needs exactly {sorted(need)}, got {sorted(mapping)}")
    # simultaneous substitution through fresh placeholders
    out = schema
    for v in sorted(mapping):
        out = subst(out, v, _placeholder(v))
    for v in sorted(mapping):
        out = subst(out, _placeholder(v).name, mapping[v])
    return out


def _placeholder(v):
    from ..lang import Var
    return Var(f"%{v}")
