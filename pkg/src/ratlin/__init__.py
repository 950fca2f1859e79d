"""Local linearizations of rational matrices."""
