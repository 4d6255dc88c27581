"""Bifurcation toolkit for a harvested Holling-III / modified Leslie-Gower
predator-prey system: closed-form equilibria, stability taxonomy, Hopf and
Bogdanov-Takens analysis, adaptive simulation, and a reporting CLI."""

__version__ = "0.1.0"
