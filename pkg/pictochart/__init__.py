"""Gráficos pictóricos: esqueletos, fidelidad de datos, compuerta de atención y ensamblado por grillas."""

__version__ = "1.0.0"
