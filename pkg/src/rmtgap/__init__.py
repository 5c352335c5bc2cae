"""Gap probabilities of classical random matrix ensembles via sigma-form Painleve equations."""

__version__ = "0.1.0"
