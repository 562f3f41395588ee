"""Machine-checked proofs and the explanations hidden in them.

Modules: ``numeral`` (digit traces), ``lang`` (terms and formulas),
``kernel`` (proof checker), ``library`` (checked lemmas), ``dioph``
(polynomial non-solvability provers), ``explain`` (cuts, explanations,
classification) and ``cli``.
"""

__version__ = "0.1.0"
