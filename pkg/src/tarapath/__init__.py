"""tarapath: attack-tree threat rules and TARA work products for vehicle models.

The package turns catalogued anti-patterns into attack-path threat rules,
evaluates them against a data-flow model of a connected vehicle, and
produces risk-rated findings with the full set of TARA work products.
"""

__version__ = "0.1.0"
