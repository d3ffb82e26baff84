"""Regular separability toolkit for vector addition system languages."""

__version__ = "0.1.0"
