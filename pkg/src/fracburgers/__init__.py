"""Conformable double ARA decomposition for coupled Burgers systems."""
