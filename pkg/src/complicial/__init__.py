"""Augmented directed complexes, simplexes and the lambda/nu functors."""
