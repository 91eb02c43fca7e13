"""Symmetric racks and quandles, their modules, extensions and cohomology."""

__version__ = "0.1.0"
