"""graphbench: a procedural graph-reasoning benchmark factory and harness."""

__version__ = "0.1.0"
