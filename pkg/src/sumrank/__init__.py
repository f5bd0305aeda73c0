"""Sum-rank-metric code families over small finite fields, with exact
certification of distances, covering radii and optimality claims."""

__version__ = "0.1.0"
