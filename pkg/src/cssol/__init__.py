"""Wronskian-pair Liouville solutions, self-dual magnetic solitons, and the
variational machinery of the self-generated-field interpolation constant."""

__version__ = "0.1.0"
